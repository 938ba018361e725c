//! Small dense least-squares solver used by the T-learner and the
//! modulation-function fit.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::numeric::CompensatedSum;
use crate::{Error, Result};

/// Solution of a least-squares problem via normal equations.
pub(crate) struct LsqSolution {
    pub coeffs: Vec<f64>,
    /// True when the Gram matrix was not positive definite and a ridge
    /// term `lambda * I` was added to obtain a solution.
    pub ridge_fallback: bool,
}

/// Solve `min ||X beta - y||^2` where `X` is given row-wise through an
/// iterator of feature slices. Falls back to ridge (`lambda = 1e-6`) when
/// the Gram matrix is rank deficient.
pub(crate) fn least_squares<'a, I>(rows: I, y: &[f64], k: usize) -> Result<LsqSolution>
where
    I: Iterator<Item = &'a [f64]> + Clone,
{
    // Accumulate X'X (symmetric, packed full) and X'y.
    let mut xtx = vec![0.0_f64; k * k];
    let mut xty = vec![0.0_f64; k];
    let mut n = 0usize;
    for (row, &yi) in rows.clone().zip(y) {
        debug_assert_eq!(row.len(), k);
        for i in 0..k {
            xty[i] += row[i] * yi;
            for j in i..k {
                xtx[i * k + j] += row[i] * row[j];
            }
        }
        n += 1;
    }
    if n != y.len() {
        return Err(Error::input("design/target length mismatch"));
    }
    if n < k {
        return Err(Error::fit("fewer rows than parameters"));
    }
    for i in 0..k {
        for j in 0..i {
            xtx[i * k + j] = xtx[j * k + i];
        }
    }

    match cholesky_solve(&xtx, &xty, k) {
        Some(coeffs) => Ok(LsqSolution { coeffs, ridge_fallback: false }),
        None => {
            const LAMBDA: f64 = 1e-6;
            let mut ridged = xtx;
            for i in 0..k {
                ridged[i * k + i] += LAMBDA;
            }
            let coeffs = cholesky_solve(&ridged, &xty, k)
                .ok_or_else(|| Error::fit("rank-deficient design, ridge fallback failed"))?;
            Ok(LsqSolution { coeffs, ridge_fallback: true })
        }
    }
}

/// Cholesky solve of `A x = b` for symmetric `A`; `None` when `A` is not
/// positive definite within tolerance.
pub(crate) fn cholesky_solve(a: &[f64], b: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0_f64; k * k];
    let scale: f64 = (0..k).map(|i| a[i * k + i].abs()).fold(0.0, f64::max);
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    for i in 0..k {
        for j in 0..=i {
            let mut s = CompensatedSum::new();
            s.add(a[i * k + j]);
            for m in 0..j {
                s.add(-l[i * k + m] * l[j * k + m]);
            }
            let v = s.total();
            if i == j {
                if v <= tol {
                    return None;
                }
                l[i * k + i] = v.sqrt();
            } else {
                l[i * k + j] = v / l[j * k + j];
            }
        }
    }
    // forward solve L z = b
    let mut z = vec![0.0_f64; k];
    for i in 0..k {
        let mut s = CompensatedSum::new();
        s.add(b[i]);
        for m in 0..i {
            s.add(-l[i * k + m] * z[m]);
        }
        z[i] = s.total() / l[i * k + i];
    }
    // back solve L' x = z
    let mut x = vec![0.0_f64; k];
    for i in (0..k).rev() {
        let mut s = CompensatedSum::new();
        s.add(z[i]);
        for m in (i + 1)..k {
            s.add(-l[m * k + i] * x[m]);
        }
        x[i] = s.total() / l[i * k + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_solve_on_well_posed_system() {
        // A = [[4,2],[2,3]], b = [10, 8] -> x = [1.75, 1.5]
        let a = [4.0, 2.0, 2.0, 3.0];
        let b = [10.0, 8.0];
        let x = cholesky_solve(&a, &b, 2).unwrap();
        assert!((x[0] - 1.75).abs() < 1e-12);
        assert!((x[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn singular_matrix_reports_none() {
        let a = [1.0, 1.0, 1.0, 1.0];
        assert!(cholesky_solve(&a, &[1.0, 1.0], 2).is_none());
    }

    #[test]
    fn least_squares_recovers_exact_linear_data() {
        let rows: Vec<Vec<f64>> =
            (0..20).map(|i| vec![1.0, i as f64, (i * i) as f64]).collect();
        let y: Vec<f64> =
            rows.iter().map(|r| 2.0 + 3.0 * r[1] - 0.25 * r[2]).collect();
        let sol = least_squares(rows.iter().map(Vec::as_slice), &y, 3).unwrap();
        assert!(!sol.ridge_fallback);
        for (got, want) in sol.coeffs.iter().zip([2.0, 3.0, -0.25]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn duplicate_column_falls_back_to_ridge() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, i as f64, i as f64]).collect();
        let y: Vec<f64> = rows.iter().map(|r| 1.0 + 2.0 * r[1]).collect();
        let sol = least_squares(rows.iter().map(Vec::as_slice), &y, 3).unwrap();
        assert!(sol.ridge_fallback);
        // Ridge splits the shared coefficient across the twin columns.
        assert!((sol.coeffs[1] + sol.coeffs[2] - 2.0).abs() < 1e-3);
    }
}
