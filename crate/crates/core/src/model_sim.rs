//! Model-predicted potential outcomes.
//!
//! Two paths produce a [`ModelOutcomeTable`]: the *hypothetical* model,
//! which perturbs the ground truth with multiplicative noise
//! `ym = y + V(y) * nu` (one zero-mean `nu` per unit, shared across both
//! arms), and a plain OLS T-learner trained on observational draws, which
//! stands in for externally trained models.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::least_squares;
use crate::numeric::{all_finite, mean};
use crate::rng::{stream, Domain};
use crate::scm_data::{ObservationalSample, PotentialOutcomeTable};
use crate::{Error, Result};

/// Shape of the noise-modulation function `V`.
#[derive(Debug, Clone, PartialEq)]
pub enum VKind {
    /// `V(y) = y`: prediction error grows with the outcome magnitude.
    IdentityMultiplicative,
    /// `V(y) = c_0 + c_1 y + ...` with the given coefficients.
    Polynomial(Vec<f64>),
}

impl VKind {
    /// Evaluate `V` at an outcome value.
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            VKind::IdentityMultiplicative => y,
            VKind::Polynomial(coeffs) => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * y + c;
                }
                acc
            }
        }
    }
}

/// Distribution of the per-unit noise `nu` (always zero mean, variance
/// `sigma2_nu`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuDistribution {
    Gaussian,
    Uniform,
}

/// Prediction-noise model of the hypothetical causal model.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub sigma2_nu: f64,
    pub v_kind: VKind,
    pub nu_distribution: NuDistribution,
    /// Draw an independent `nu` per (unit, arm) instead of sharing one per
    /// unit. Sensitivity-analysis knob; the `g` decomposition only applies
    /// to the shared form.
    pub per_arm_noise: bool,
}

impl NoiseModel {
    /// Identity-multiplicative Gaussian noise, shared across arms.
    pub fn identity(sigma2_nu: f64) -> Self {
        Self {
            sigma2_nu,
            v_kind: VKind::IdentityMultiplicative,
            nu_distribution: NuDistribution::Gaussian,
            per_arm_noise: false,
        }
    }

    fn draw_nu<R: Rng>(&self, rng: &mut R) -> f64 {
        let sd = self.sigma2_nu.sqrt();
        match self.nu_distribution {
            NuDistribution::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                sd * z
            }
            // Uniform on (-a, a) with a = sqrt(3) * sd has variance sd^2.
            NuDistribution::Uniform => {
                let a = 3.0_f64.sqrt() * sd;
                rng.random_range(-a..a)
            }
        }
    }
}

/// Model-predicted potential outcomes, aligned 1:1 with the
/// [`PotentialOutcomeTable`] they were derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOutcomeTable {
    pub ym1: Vec<f64>,
    pub ym0: Vec<f64>,
    /// Realized per-unit noise, retained when the table came from the
    /// hypothetical model with shared noise; absent for trained models and
    /// per-arm noise runs.
    pub nu: Option<Vec<f64>>,
}

impl ModelOutcomeTable {
    pub fn n(&self) -> usize {
        self.ym1.len()
    }

    /// Model table equal to the ground truth (a perfect model).
    pub fn perfect(table: &PotentialOutcomeTable) -> Self {
        Self { ym1: table.y1.clone(), ym0: table.y0.clone(), nu: Some(vec![0.0; table.n()]) }
    }
}

/// Apply the hypothetical model: `ym_t = y_t + V(y_t) * nu`, one noise draw
/// per unit shared across both arms (or per arm when configured).
/// Deterministic given `(table, noise, seed)`.
pub fn apply_hypothetical_model(
    table: &PotentialOutcomeTable,
    noise: &NoiseModel,
    seed: u64,
) -> ModelOutcomeTable {
    let mut rng = stream(seed, Domain::ModelNoise);
    let n = table.n();
    let mut ym1 = Vec::with_capacity(n);
    let mut ym0 = Vec::with_capacity(n);
    let mut nus = Vec::with_capacity(n);
    for i in 0..n {
        let (nu1, nu0) = if noise.per_arm_noise {
            (noise.draw_nu(&mut rng), noise.draw_nu(&mut rng))
        } else {
            let nu = noise.draw_nu(&mut rng);
            (nu, nu)
        };
        ym1.push(table.y1[i] + noise.v_kind.eval(table.y1[i]) * nu1);
        ym0.push(table.y0[i] + noise.v_kind.eval(table.y0[i]) * nu0);
        nus.push(nu1);
    }
    let nu = if noise.per_arm_noise { None } else { Some(nus) };
    ModelOutcomeTable { ym1, ym0, nu }
}

/// Apply the noise model with an explicit noise vector (test hook and
/// building block for enumeration oracles).
pub fn apply_model_with_nu(
    table: &PotentialOutcomeTable,
    v_kind: &VKind,
    nu: &[f64],
) -> Result<ModelOutcomeTable> {
    if nu.len() != table.n() {
        return Err(Error::input("noise vector length does not match table"));
    }
    let ym1 = table
        .y1
        .iter()
        .zip(nu)
        .map(|(&y, &v)| y + v_kind.eval(y) * v)
        .collect();
    let ym0 = table
        .y0
        .iter()
        .zip(nu)
        .map(|(&y, &v)| y + v_kind.eval(y) * v)
        .collect();
    Ok(ModelOutcomeTable { ym1, ym0, nu: Some(nu.to_vec()) })
}

/// Empirical check of the reasonable-model magnitude condition
/// `sigma2_nu * E[V(y_t)^2] < E[y_t^2]` on both arms. Callers treat a
/// `false` as a warning, not an error: trained models are allowed to
/// violate it.
pub fn assumption_a_magnitude_ok(table: &PotentialOutcomeTable, noise: &NoiseModel) -> bool {
    let check = |ys: &[f64]| {
        let v2: Vec<f64> = ys.iter().map(|&y| noise.v_kind.eval(y).powi(2)).collect();
        let y2: Vec<f64> = ys.iter().map(|&y| y * y).collect();
        noise.sigma2_nu * mean(&v2) < mean(&y2)
    };
    check(&table.y1) && check(&table.y0)
}

/// OLS regression of `Y` on `[1, T, X, W]`; potential outcomes are
/// predicted by plugging the intervention value into the fitted form.
#[derive(Debug, Clone, PartialEq)]
pub struct TLearner {
    /// `[intercept, t, x_0..x_{n_x-1}, w_0..w_{n_w-1}]`.
    pub coeffs: Vec<f64>,
    /// Covariate dimensionality the model was trained on (`n_x + n_w`).
    pub n_features: usize,
    /// Set when the normal equations were rank deficient and the fit fell
    /// back to ridge regression with `lambda = 1e-6`.
    pub ridge_fallback: bool,
}

impl TLearner {
    /// Predicted outcome for one unit under intervention `t`.
    pub fn predict(&self, covariates: &[f64], t: f64) -> Result<f64> {
        if covariates.len() != self.n_features {
            return Err(Error::input("covariate dimension does not match training"));
        }
        let mut v = self.coeffs[0] + self.coeffs[1] * t;
        for (c, x) in self.coeffs[2..].iter().zip(covariates) {
            v += c * x;
        }
        Ok(v)
    }

    /// Implied constant treatment effect (the fitted T coefficient).
    pub fn t_coefficient(&self) -> f64 {
        self.coeffs[1]
    }
}

/// Fit the T-learner on an observational sample.
pub fn fit_t_learner(sample: &ObservationalSample) -> Result<TLearner> {
    let n = sample.n();
    if n < 2 {
        return Err(Error::input("need at least two observations"));
    }
    if !all_finite(&sample.t) || !all_finite(&sample.y) {
        return Err(Error::input("non-finite observational data"));
    }
    let binary = sample.t.iter().all(|&t| t == 0.0 || t == 1.0);
    if binary {
        let treated = sample.t.iter().filter(|&&t| t == 1.0).count();
        if treated < 2 || n - treated < 2 {
            return Err(Error::fit("need >= 2 units per arm to fit a binary-treatment model"));
        }
    } else if crate::numeric::population_variance(&sample.t) == 0.0 {
        return Err(Error::fit("treatment has no spread"));
    }

    let n_x = sample.covariates.ncols();
    let n_w = sample.w_confounders.ncols();
    let k = 2 + n_x + n_w;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(k);
        row.push(1.0);
        row.push(sample.t[i]);
        row.extend_from_slice(sample.covariates.row(i));
        row.extend_from_slice(sample.w_confounders.row(i));
        rows.push(row);
    }
    let sol = least_squares(rows.iter().map(Vec::as_slice), &sample.y, k)?;
    Ok(TLearner { coeffs: sol.coeffs, n_features: n_x + n_w, ridge_fallback: sol.ridge_fallback })
}

/// Predict both potential outcomes for every unit of a table. The table's
/// covariate layout must match the training layout (`X` then `W`).
pub fn predict_outcomes(
    predictor: &TLearner,
    table: &PotentialOutcomeTable,
) -> Result<ModelOutcomeTable> {
    if table.covariates.ncols() != predictor.n_features {
        return Err(Error::input("covariate dimension does not match training"));
    }
    let n = table.n();
    let mut ym1 = Vec::with_capacity(n);
    let mut ym0 = Vec::with_capacity(n);
    for i in 0..n {
        let row = table.covariates.row(i);
        ym1.push(predictor.predict(row, 1.0)?);
        ym0.push(predictor.predict(row, 0.0)?);
    }
    Ok(ModelOutcomeTable { ym1, ym0, nu: None })
}
