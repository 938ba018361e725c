//! Synthetic data generators with ground-truth potential outcomes.
//!
//! Three small structural causal models (`csuite_1`..`csuite_3`) and two
//! observational data-generating processes (continuous and binary
//! treatment). For every unit the exogenous noises are drawn once and both
//! potential outcomes are computed by forcing the treatment node to 1 and
//! to 0 under those same noises, so the simulator sees counterfactually
//! consistent pairs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::Matrix;
use crate::numeric::{all_finite, sigmoid, softplus};
use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Identifier of a synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetId {
    Csuite1,
    Csuite2,
    Csuite3,
    DgpContinuous,
    DgpBinary,
}

impl DatasetId {
    pub const ALL: [DatasetId; 5] = [
        DatasetId::Csuite1,
        DatasetId::Csuite2,
        DatasetId::Csuite3,
        DatasetId::DgpContinuous,
        DatasetId::DgpBinary,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DatasetId::Csuite1 => "csuite_1",
            DatasetId::Csuite2 => "csuite_2",
            DatasetId::Csuite3 => "csuite_3",
            DatasetId::DgpContinuous => "dgp_continuous",
            DatasetId::DgpBinary => "dgp_binary",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csuite_1" => Ok(DatasetId::Csuite1),
            "csuite_2" => Ok(DatasetId::Csuite2),
            "csuite_3" => Ok(DatasetId::Csuite3),
            "dgp_continuous" => Ok(DatasetId::DgpContinuous),
            "dgp_binary" => Ok(DatasetId::DgpBinary),
            other => Err(Error::config(format!(
                "unknown dataset id `{other}`; valid ids: csuite_1, csuite_2, csuite_3, \
                 dgp_continuous, dgp_binary"
            ))),
        }
    }

    pub fn is_csuite(&self) -> bool {
        matches!(self, DatasetId::Csuite1 | DatasetId::Csuite2 | DatasetId::Csuite3)
    }
}

impl core::fmt::Display for DatasetId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dimensions of the observational DGPs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DgpParams {
    /// Control-variable dimensionality (enters the heterogeneous effect).
    pub n_x: usize,
    /// Confounder dimensionality (enters treatment and outcome).
    pub n_w: usize,
}

impl Default for DgpParams {
    fn default() -> Self {
        Self { n_x: 30, n_w: 30 }
    }
}

/// Full description of one synthetic structural causal model: which node is
/// intervened on, which is read out, and which nodes are exported as
/// covariates for treatment assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScmSpec {
    pub id: DatasetId,
    pub treatment_node: usize,
    pub outcome_node: usize,
    pub covariate_nodes: Vec<usize>,
    pub params: DgpParams,
}

impl ScmSpec {
    /// Nonlinear Simpson's-paradox SCM; treatment X1, outcome X3.
    pub fn csuite_1() -> Self {
        Self {
            id: DatasetId::Csuite1,
            treatment_node: 1,
            outcome_node: 3,
            covariate_nodes: vec![0],
            params: DgpParams::default(),
        }
    }

    /// Linear Gaussian chain X0 -> X1 -> X2; treatment X1, outcome X2.
    pub fn csuite_2() -> Self {
        Self {
            id: DatasetId::Csuite2,
            treatment_node: 1,
            outcome_node: 2,
            covariate_nodes: vec![0],
            params: DgpParams::default(),
        }
    }

    /// Linear Gaussian fork (outcome does not depend on the treatment
    /// node, so the per-unit effect is structurally zero).
    pub fn csuite_3() -> Self {
        Self {
            id: DatasetId::Csuite3,
            treatment_node: 1,
            outcome_node: 2,
            covariate_nodes: vec![0],
            params: DgpParams::default(),
        }
    }

    /// Continuous-treatment observational DGP.
    pub fn dgp_continuous(params: DgpParams) -> Result<Self> {
        Self::dgp(DatasetId::DgpContinuous, params)
    }

    /// Binary-treatment observational DGP.
    pub fn dgp_binary(params: DgpParams) -> Result<Self> {
        Self::dgp(DatasetId::DgpBinary, params)
    }

    fn dgp(id: DatasetId, params: DgpParams) -> Result<Self> {
        if params.n_x == 0 || params.n_w == 0 {
            return Err(Error::config("dgp requires n_x >= 1 and n_w >= 1"));
        }
        Ok(Self {
            id,
            treatment_node: 0,
            outcome_node: 1,
            covariate_nodes: (2..2 + params.n_x + params.n_w).collect(),
            params,
        })
    }

    /// Spec with default parameters for the given id.
    pub fn from_id(id: DatasetId) -> Self {
        match id {
            DatasetId::Csuite1 => Self::csuite_1(),
            DatasetId::Csuite2 => Self::csuite_2(),
            DatasetId::Csuite3 => Self::csuite_3(),
            DatasetId::DgpContinuous => {
                Self::dgp_continuous(DgpParams::default()).expect("default params valid")
            }
            DatasetId::DgpBinary => {
                Self::dgp_binary(DgpParams::default()).expect("default params valid")
            }
        }
    }
}

/// Per-unit covariates and both ground-truth potential outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialOutcomeTable {
    pub covariates: Matrix,
    pub y1: Vec<f64>,
    pub y0: Vec<f64>,
}

impl PotentialOutcomeTable {
    pub fn new(covariates: Matrix, y1: Vec<f64>, y0: Vec<f64>) -> Result<Self> {
        let n = y1.len();
        if n < 2 {
            return Err(Error::input("potential-outcome table needs n >= 2"));
        }
        if y0.len() != n || covariates.nrows() != n {
            return Err(Error::input("table columns disagree on unit count"));
        }
        if !all_finite(&y1) || !all_finite(&y0) || !covariates.is_finite() {
            return Err(Error::input("non-finite entry in potential-outcome table"));
        }
        Ok(Self { covariates, y1, y0 })
    }

    pub fn n(&self) -> usize {
        self.y1.len()
    }
}

/// Realized observational draw from one of the DGPs.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationalSample {
    /// Control variables X, one row per unit.
    pub covariates: Matrix,
    /// Confounders W, one row per unit.
    pub w_confounders: Matrix,
    /// Realized treatments (continuous, or 0/1 for the binary DGP).
    pub t: Vec<f64>,
    /// Realized outcomes.
    pub y: Vec<f64>,
}

impl ObservationalSample {
    pub fn n(&self) -> usize {
        self.t.len()
    }
}

/// Exogenous noise draw for one csuite unit. `z3` is only consumed by
/// `csuite_1` (where it is Laplace-distributed); for the linear suites the
/// z's are standard normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsuiteNoise {
    pub x0: f64,
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
}

impl CsuiteNoise {
    /// All-zero noise; handy for checking the deterministic skeleton of
    /// the structural equations.
    pub fn zero() -> Self {
        Self { x0: 0.0, z1: 0.0, z2: 0.0, z3: 0.0 }
    }
}

fn draw_csuite_noise<R: Rng>(id: DatasetId, rng: &mut R) -> CsuiteNoise {
    let x0: f64 = StandardNormal.sample(rng);
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    let z3 = if id == DatasetId::Csuite1 { standard_laplace(rng) } else { 0.0 };
    CsuiteNoise { x0, z1, z2, z3 }
}

/// Laplace(location 0, scale 1) via inverse CDF.
fn standard_laplace<R: Rng>(rng: &mut R) -> f64 {
    // Reject u == 0 so the log stays finite.
    let mut u: f64 = rng.random();
    while u == 0.0 {
        u = rng.random();
    }
    if u < 0.5 {
        (2.0 * u).ln()
    } else {
        -(2.0 * (1.0 - u)).ln()
    }
}

/// Structural node values of one csuite unit without intervention.
/// Ordered by node index.
pub fn csuite_observational(id: DatasetId, noise: &CsuiteNoise) -> Result<Vec<f64>> {
    let sqrt_1_3 = (1.0_f64 / 3.0).sqrt();
    match id {
        DatasetId::Csuite1 => {
            let x0 = noise.x0;
            let x1 = softplus(1.0 - x0) + (3.0_f64 / 20.0).sqrt() * noise.z1;
            let x2 = (2.0 * x1).tanh() + 1.5 * x0 - 1.0 + noise.z2.tanh();
            let x3 = 5.0 * ((x2 - 4.0) / 5.0).tanh() + 3.0 + noise.z3 / 10.0_f64.sqrt();
            Ok(vec![x0, x1, x2, x3])
        }
        DatasetId::Csuite2 => {
            let x0 = noise.x0;
            // The chain's first coefficient sqrt(2/2) is exactly 1.
            let x1 = x0 + sqrt_1_3 * noise.z1;
            let x2 = (2.0_f64 / 3.0).sqrt() * x1 + sqrt_1_3 * noise.z2;
            Ok(vec![x0, x1, x2])
        }
        DatasetId::Csuite3 => {
            let x0 = noise.x0;
            let x1 = x0 + sqrt_1_3 * noise.z1;
            let x2 = (2.0_f64 / 3.0).sqrt() * x0 + sqrt_1_3 * noise.z2;
            Ok(vec![x0, x1, x2])
        }
        other => Err(Error::config(format!("{other} is not a csuite dataset"))),
    }
}

/// Potential outcomes `(y1, y0)` of one csuite unit: the treatment node is
/// forced to 1 resp. 0 and the downstream equations are propagated with
/// the unit's own noises.
pub fn csuite_potential_outcomes(id: DatasetId, noise: &CsuiteNoise) -> Result<(f64, f64)> {
    let sqrt_1_3 = (1.0_f64 / 3.0).sqrt();
    match id {
        DatasetId::Csuite1 => {
            let y = |t: f64| {
                let x2 = (2.0 * t).tanh() + 1.5 * noise.x0 - 1.0 + noise.z2.tanh();
                5.0 * ((x2 - 4.0) / 5.0).tanh() + 3.0 + noise.z3 / 10.0_f64.sqrt()
            };
            Ok((y(1.0), y(0.0)))
        }
        DatasetId::Csuite2 => {
            let y = |t: f64| (2.0_f64 / 3.0).sqrt() * t + sqrt_1_3 * noise.z2;
            Ok((y(1.0), y(0.0)))
        }
        DatasetId::Csuite3 => {
            // Outcome depends on X0 only; intervening on X1 changes nothing.
            let y = (2.0_f64 / 3.0).sqrt() * noise.x0 + sqrt_1_3 * noise.z2;
            Ok((y, y))
        }
        other => Err(Error::config(format!("{other} is not a csuite dataset"))),
    }
}

/// Generate a csuite unit pool with both potential outcomes per unit.
/// Deterministic given `(spec, n, seed)`.
pub fn generate_csuite(spec: &ScmSpec, n: usize, seed: u64) -> Result<PotentialOutcomeTable> {
    if !spec.id.is_csuite() {
        return Err(Error::config(format!("{} is not a csuite dataset", spec.id)));
    }
    if n < 2 {
        return Err(Error::config("need n >= 2"));
    }
    let mut rng = stream(seed, Domain::CsuitePool);
    let mut cov = Vec::with_capacity(n);
    let mut y1 = Vec::with_capacity(n);
    let mut y0 = Vec::with_capacity(n);
    for _ in 0..n {
        let noise = draw_csuite_noise(spec.id, &mut rng);
        let (a, b) = csuite_potential_outcomes(spec.id, &noise)?;
        cov.push(noise.x0);
        y1.push(a);
        y0.push(b);
    }
    PotentialOutcomeTable::new(Matrix::from_flat(n, 1, cov)?, y1, y0)
}

/// Sparse coefficient vectors of the observational DGPs, derived from the
/// generation seed: the first five coordinates are uniform on (-1, 1), the
/// rest zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpCoefficients {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl DgpCoefficients {
    pub fn from_seed(params: DgpParams, seed: u64) -> Self {
        let mut rng = stream(seed, Domain::DgpCoeffs);
        let mut draw = |dim: usize| -> Vec<f64> {
            let mut v = vec![0.0; dim];
            for slot in v.iter_mut().take(5) {
                *slot = rng.random_range(-1.0..1.0);
            }
            v
        };
        DgpCoefficients { beta: draw(params.n_w), gamma: draw(params.n_w) }
    }
}

/// Heterogeneous treatment effect used by both DGPs: smooth, positive and
/// bounded on the unit cube.
pub fn theta(x: &[f64]) -> f64 {
    let x1 = if x.len() > 1 { x[1] } else { x[0] };
    (2.0 * x[0]).exp() * (x1 + 0.5)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Generate an observational sample and the aligned potential-outcome view
/// from one of the DGPs. The potential outcomes reuse each unit's outcome
/// noise, so `y1 - y0 == theta(X)` exactly per unit. Covariates exported
/// for assignment are X concatenated with W.
pub fn generate_dgp(
    spec: &ScmSpec,
    n: usize,
    seed: u64,
) -> Result<(ObservationalSample, PotentialOutcomeTable)> {
    if !matches!(spec.id, DatasetId::DgpContinuous | DatasetId::DgpBinary) {
        return Err(Error::config(format!("{} is not a dgp dataset", spec.id)));
    }
    if n < 2 {
        return Err(Error::config("need n >= 2"));
    }
    let DgpParams { n_x, n_w } = spec.params;
    if n_x == 0 || n_w == 0 {
        return Err(Error::config("dgp requires n_x >= 1 and n_w >= 1"));
    }
    let coeffs = DgpCoefficients::from_seed(spec.params, seed);
    let mut rng = stream(seed, Domain::DgpPool);

    let mut xs = Vec::with_capacity(n * n_x);
    let mut ws = Vec::with_capacity(n * n_w);
    let mut assign_cov = Vec::with_capacity(n * (n_x + n_w));
    let mut t = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut y1 = Vec::with_capacity(n);
    let mut y0 = Vec::with_capacity(n);

    for _ in 0..n {
        let w: Vec<f64> = (0..n_w).map(|_| StandardNormal.sample(&mut rng)).collect();
        let x: Vec<f64> = (0..n_x).map(|_| rng.random_range(0.0..1.0)).collect();
        let eta: f64 = rng.random_range(-1.0..1.0);
        let eps: f64 = rng.random_range(-1.0..1.0);

        let wb = dot(&w, &coeffs.beta);
        let wg = dot(&w, &coeffs.gamma);
        let th = theta(&x);
        let ti = match spec.id {
            DatasetId::DgpContinuous => wb + eta,
            DatasetId::DgpBinary => {
                let u: f64 = rng.random();
                if u < sigmoid(wb + eta) {
                    1.0
                } else {
                    0.0
                }
            }
            _ => unreachable!(),
        };
        let yi = ti * th + wg + eps;
        y1.push(1.0 * th + wg + eps);
        y0.push(wg + eps);
        t.push(ti);
        y.push(yi);
        assign_cov.extend_from_slice(&x);
        assign_cov.extend_from_slice(&w);
        xs.extend_from_slice(&x);
        ws.extend_from_slice(&w);
    }

    let sample = ObservationalSample {
        covariates: Matrix::from_flat(n, n_x, xs)?,
        w_confounders: Matrix::from_flat(n, n_w, ws)?,
        t,
        y,
    };
    let table = PotentialOutcomeTable::new(
        Matrix::from_flat(n, n_x + n_w, assign_cov)?,
        y1,
        y0,
    )?;
    Ok((sample, table))
}

/// Generate the potential-outcome pool for any dataset id.
pub fn generate(spec: &ScmSpec, n: usize, seed: u64) -> Result<PotentialOutcomeTable> {
    if spec.id.is_csuite() {
        generate_csuite(spec, n, seed)
    } else {
        generate_dgp(spec, n, seed).map(|(_, table)| table)
    }
}

/// Human-readable column labels of a table's assignment covariates.
pub fn covariate_labels(d: usize) -> Vec<String> {
    (0..d).map(|j| format!("x_{j}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csuite_2_zero_noise_effect_is_sqrt_two_thirds() {
        let noise = CsuiteNoise::zero();
        let (y1, y0) = csuite_potential_outcomes(DatasetId::Csuite2, &noise).unwrap();
        assert!((y1 - (2.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(y0, 0.0);
    }

    #[test]
    fn csuite_3_effect_is_structurally_zero() {
        let noise = CsuiteNoise { x0: 0.3, z1: -1.2, z2: 0.8, z3: 0.0 };
        let (y1, y0) = csuite_potential_outcomes(DatasetId::Csuite3, &noise).unwrap();
        assert_eq!(y1, y0);

        let table = generate_csuite(&ScmSpec::csuite_3(), 500, 11).unwrap();
        assert!(table.y1.iter().zip(&table.y0).all(|(a, b)| a == b));
    }

    #[test]
    fn csuite_tables_are_bit_reproducible() {
        for spec in [ScmSpec::csuite_1(), ScmSpec::csuite_2(), ScmSpec::csuite_3()] {
            let a = generate_csuite(&spec, 64, 99).unwrap();
            let b = generate_csuite(&spec, 64, 99).unwrap();
            assert_eq!(a, b);
            let c = generate_csuite(&spec, 64, 100).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn generate_rejects_bad_inputs() {
        assert!(generate_csuite(&ScmSpec::csuite_1(), 1, 0).is_err());
        let dgp = ScmSpec::dgp_continuous(DgpParams::default()).unwrap();
        assert!(generate_csuite(&dgp, 10, 0).is_err());
        assert!(generate_dgp(&ScmSpec::csuite_1(), 10, 0).is_err());
        assert!(ScmSpec::dgp_continuous(DgpParams { n_x: 0, n_w: 3 }).is_err());
    }

    #[test]
    fn dgp_unit_effect_equals_theta_exactly() {
        for id in [DatasetId::DgpContinuous, DatasetId::DgpBinary] {
            let spec = ScmSpec::from_id(id);
            let (sample, table) = generate_dgp(&spec, 200, 5).unwrap();
            assert_eq!(sample.n(), 200);
            for i in 0..table.n() {
                let x = &table.covariates.row(i)[..spec.params.n_x];
                let want = theta(x);
                assert!(
                    (table.y1[i] - table.y0[i] - want).abs() <= 1e-12 * (1.0 + want.abs()),
                    "unit {i}: diff {} vs theta {}",
                    table.y1[i] - table.y0[i],
                    want
                );
            }
        }
    }

    #[test]
    fn dgp_matches_paper_training_shape() {
        let spec = ScmSpec::dgp_continuous(DgpParams { n_x: 30, n_w: 30 }).unwrap();
        let (sample, table) = generate_dgp(&spec, 2000, 1).unwrap();
        assert_eq!(sample.covariates.ncols(), 30);
        assert_eq!(sample.w_confounders.ncols(), 30);
        assert_eq!(sample.n(), 2000);
        assert_eq!(table.covariates.ncols(), 60);
    }

    #[test]
    fn dgp_binary_treatments_are_zero_one() {
        let spec = ScmSpec::dgp_binary(DgpParams { n_x: 3, n_w: 4 }).unwrap();
        let (sample, _) = generate_dgp(&spec, 500, 2).unwrap();
        assert!(sample.t.iter().all(|&t| t == 0.0 || t == 1.0));
        let treated: usize = sample.t.iter().map(|&t| t as usize).sum();
        assert!(treated > 0 && treated < 500, "degenerate binary draw");
    }

    #[test]
    fn theta_with_unit_effect_constant_shifts_outcomes() {
        // theta(x) = c, eps = 0, <w,gamma> = 0  ->  y1 - y0 = c.
        let x = [0.0, 0.25];
        let c = theta(&x);
        let (y1, y0) = (1.0 * c + 0.0 + 0.0, 0.0 * c + 0.0 + 0.0);
        assert_eq!(y1 - y0, c);
    }

    #[test]
    fn laplace_draws_have_unit_scale_shape() {
        let mut rng = stream(17, Domain::CsuitePool);
        let n = 200_000;
        let mut abs_sum = 0.0;
        for _ in 0..n {
            abs_sum += standard_laplace(&mut rng).abs();
        }
        // E|Laplace(0,1)| = 1; MC error well under 1%.
        assert!((abs_sum / n as f64 - 1.0).abs() < 0.02);
    }
}
