//! Treatment assignment plans and their Bernoulli realizations.
//!
//! A plan is a vector of per-unit treatment probabilities. Three schemes
//! are provided: the fair coin (RCT), logistic propensities driven by the
//! unit covariates, and random subsampling with replacement from a fixed
//! base plan. Probabilities are always clipped into
//! `[eps_clip, 1 - eps_clip]` so that no IPW weight exceeds `1/eps_clip`
//! on either arm.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::Matrix;
use crate::numeric::clip_probability;
use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Default propensity clip bound. Keeps every estimator finite while still
/// admitting three orders of magnitude of weight imbalance.
pub const DEFAULT_EPS_CLIP: f64 = 1e-3;

/// Assignment scheme that produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Rct,
    Logistic,
    Subsample,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Rct => "rct",
            Scheme::Logistic => "logistic",
            Scheme::Subsample => "subsample",
        }
    }
}

impl core::fmt::Display for Scheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-unit treatment probabilities plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentPlan {
    /// Treatment probability per plan row, clipped into
    /// `[eps_clip, 1 - eps_clip]`.
    pub p: Vec<f64>,
    pub scheme: Scheme,
    /// For subsample plans: source-table row backing each plan row, so
    /// outcome vectors can be re-sliced to match.
    pub unit_index: Option<Vec<usize>>,
    pub eps_clip: f64,
}

impl AssignmentPlan {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// IPW weights `1/p` of the treated arm.
    pub fn weights(&self) -> Vec<f64> {
        self.p.iter().map(|p| 1.0 / p).collect()
    }

    /// Gather `values` (one per source-table row) into plan order. For
    /// plans without a unit index this is a plain copy.
    pub fn slice_units(&self, values: &[f64]) -> Result<Vec<f64>> {
        match &self.unit_index {
            None => {
                if values.len() != self.n() {
                    return Err(Error::input("plan/table length mismatch"));
                }
                Ok(values.to_vec())
            }
            Some(idx) => {
                let mut out = Vec::with_capacity(idx.len());
                for &i in idx {
                    let v = values
                        .get(i)
                        .ok_or_else(|| Error::input("unit index out of range"))?;
                    out.push(*v);
                }
                Ok(out)
            }
        }
    }
}

/// One Bernoulli draw per plan row. `b[i]` is true when unit `i` is
/// treated (its `Y^{T=1}` is revealed).
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentRealization<'a> {
    pub b: Vec<bool>,
    pub plan: &'a AssignmentPlan,
}

impl AssignmentRealization<'_> {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn treated_count(&self) -> usize {
        self.b.iter().filter(|&&x| x).count()
    }

    /// True when either arm is empty.
    pub fn is_degenerate(&self) -> bool {
        let t = self.treated_count();
        t == 0 || t == self.n()
    }
}

fn check_eps(eps_clip: f64) -> Result<()> {
    if !(eps_clip > 0.0 && eps_clip < 0.5) {
        return Err(Error::config(format!("eps_clip must lie in (0, 0.5), got {eps_clip}")));
    }
    Ok(())
}

/// Fair-coin plan: `p_i = 1/2` for all units.
pub fn plan_rct(n: usize) -> Result<AssignmentPlan> {
    if n < 2 {
        return Err(Error::config("RCT plan needs n >= 2 so both groups are possible"));
    }
    Ok(AssignmentPlan {
        p: vec![0.5; n],
        scheme: Scheme::Rct,
        unit_index: None,
        eps_clip: DEFAULT_EPS_CLIP,
    })
}

/// Logistic-propensity plan: draw `beta ~ N(0, sigma2_beta * I)` once from
/// the seed, then `p_i = sigmoid(beta . x_i)` clipped.
pub fn plan_logistic(
    covariates: &Matrix,
    sigma2_beta: f64,
    eps_clip: f64,
    seed: u64,
) -> Result<AssignmentPlan> {
    if !(sigma2_beta >= 0.0) {
        return Err(Error::config("sigma2_beta must be >= 0"));
    }
    let sd = sigma2_beta.sqrt();
    let mut rng = stream(seed, Domain::LogisticBeta);
    let beta: Vec<f64> = (0..covariates.ncols())
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        })
        .collect();
    plan_logistic_with_beta(covariates, &beta, eps_clip)
}

/// Deterministic logistic plan for a given weight vector. Exposed so tests
/// can force `beta`.
pub fn plan_logistic_with_beta(
    covariates: &Matrix,
    beta: &[f64],
    eps_clip: f64,
) -> Result<AssignmentPlan> {
    check_eps(eps_clip)?;
    if covariates.nrows() < 2 {
        return Err(Error::config("logistic plan needs n >= 2"));
    }
    if beta.len() != covariates.ncols() {
        return Err(Error::input("beta dimension does not match covariates"));
    }
    if !covariates.is_finite() {
        return Err(Error::input("non-finite covariates"));
    }
    let p = covariates
        .rows_iter()
        .map(|row| {
            let logit: f64 = row.iter().zip(beta).map(|(x, b)| x * b).sum();
            clip_probability(crate::numeric::sigmoid(logit), eps_clip)
        })
        .collect();
    Ok(AssignmentPlan { p, scheme: Scheme::Logistic, unit_index: None, eps_clip })
}

/// Random-subsampling plan: draw `m` unit indices with replacement and
/// carry over the base probabilities at those indices.
pub fn plan_subsample(base_p: &[f64], m: usize, seed: u64) -> Result<AssignmentPlan> {
    let n = base_p.len();
    if n == 0 {
        return Err(Error::config("subsample needs a nonempty base plan"));
    }
    let mut rng = stream(seed, Domain::SubsampleIndices);
    let indices: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
    plan_subsample_with_indices(base_p, &indices)
}

/// Deterministic subsample plan for given indices. Exposed so tests can
/// force the draw.
pub fn plan_subsample_with_indices(base_p: &[f64], indices: &[usize]) -> Result<AssignmentPlan> {
    if indices.len() < 2 {
        return Err(Error::config("subsample size m must be >= 2"));
    }
    if !base_p.iter().all(|p| p.is_finite() && *p > 0.0 && *p < 1.0) {
        return Err(Error::input("base probabilities must lie strictly in (0, 1)"));
    }
    let mut p = Vec::with_capacity(indices.len());
    for &i in indices {
        let base = base_p
            .get(i)
            .ok_or_else(|| Error::input("subsample index out of range"))?;
        p.push(clip_probability(*base, DEFAULT_EPS_CLIP));
    }
    Ok(AssignmentPlan {
        p,
        scheme: Scheme::Subsample,
        unit_index: Some(indices.to_vec()),
        eps_clip: DEFAULT_EPS_CLIP,
    })
}

/// Independent Bernoulli draw per plan row; deterministic given
/// `(plan, seed)`.
pub fn sample_realization(plan: &AssignmentPlan, seed: u64) -> AssignmentRealization<'_> {
    let mut rng = stream(seed, Domain::Realization);
    let b = plan.p.iter().map(|&p| rng.random::<f64>() < p).collect();
    AssignmentRealization { b, plan }
}
