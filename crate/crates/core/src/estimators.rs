//! Treatment-effect and causal-error estimators.
//!
//! Notation used throughout: a pool of `N` units with both potential
//! outcomes known to the simulator (`y1`, `y0`), model predictions
//! (`ym1`, `ym0`), and an assignment realization that reveals `y1` on the
//! treated set `B` and `y0` on its complement. IPW weights are `1/p` on
//! the treated arm and `1/(1-p)` on the control arm.
//!
//! The estimators decompose exactly: with
//! `f(B)` the assignment-noise term and `g(nu, B)` the model-noise term,
//!
//! ```text
//! ipw(y)  = mean(y1 - y0) + f(B)
//! ipw(ym) = mean(ym1 - ym0) + f(B) + g(nu, B)
//! ```
//!
//! so the pairs error `ipw(ym) - ipw(y)` drops `f` entirely, which is the
//! whole point: only the model-noise component survives. Both identities
//! hold per realization to floating-point accuracy and are enforced in
//! tests; `f`/`g` and their closed-form variances live here so they can
//! serve as oracles for the Monte-Carlo harness.

use alloc::vec::Vec;

use crate::assignment::{AssignmentPlan, AssignmentRealization};
use crate::model_sim::{ModelOutcomeTable, NoiseModel};
use crate::numeric::{mean, CompensatedSum};
use crate::scm_data::PotentialOutcomeTable;
use crate::{Error, Result};

/// Which effect estimator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorId {
    SampleMeanModel,
    PopulationTrue,
    Rct,
    Ipw,
    IpwSelfNorm,
}

/// A treatment-effect estimate. `degenerate_group` is set when a group was
/// empty; RCT estimates are then NaN while IPW estimates stay defined
/// through the empty-sum convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectEstimate {
    pub value: f64,
    pub estimator_id: EstimatorId,
    pub degenerate_group: bool,
}

/// Causal-error estimation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorMethod {
    /// Model sample mean minus IPW ground-truth estimate.
    Naive,
    /// IPW applied to both model and truth on the same realization.
    Pairs,
    /// Model sample mean minus fair-coin difference of group means.
    RctBased,
    /// Model sample mean minus self-normalized (Hajek) IPW estimate.
    SelfNormBased,
}

impl ErrorMethod {
    pub const ALL: [ErrorMethod; 4] =
        [ErrorMethod::Naive, ErrorMethod::Pairs, ErrorMethod::RctBased, ErrorMethod::SelfNormBased];

    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorMethod::Naive => "naive",
            ErrorMethod::Pairs => "pairs",
            ErrorMethod::RctBased => "rct",
            ErrorMethod::SelfNormBased => "selfnorm",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(ErrorMethod::Naive),
            "pairs" => Ok(ErrorMethod::Pairs),
            "rct" => Ok(ErrorMethod::RctBased),
            "selfnorm" => Ok(ErrorMethod::SelfNormBased),
            other => Err(Error::config(alloc::format!(
                "unknown estimator `{other}`; valid: naive, pairs, rct, selfnorm"
            ))),
        }
    }
}

impl core::fmt::Display for ErrorMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A causal-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalErrorEstimate {
    pub value: f64,
    pub method: ErrorMethod,
    pub degenerate_group: bool,
}

/// Model treatment effect by simple averaging: `mean(ym1 - ym0)`.
pub fn sample_mean_effect(model: &ModelOutcomeTable) -> EffectEstimate {
    EffectEstimate {
        value: mean_difference(&model.ym1, &model.ym0),
        estimator_id: EstimatorId::SampleMeanModel,
        degenerate_group: false,
    }
}

/// Pool-level true effect: `mean(y1 - y0)`, the simulator-only quantity
/// every experiment tries to recover.
pub fn population_true_effect(table: &PotentialOutcomeTable) -> EffectEstimate {
    EffectEstimate {
        value: mean_difference(&table.y1, &table.y0),
        estimator_id: EstimatorId::PopulationTrue,
        degenerate_group: false,
    }
}

fn mean_difference(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for (x, y) in a.iter().zip(b) {
        acc.add(x - y);
    }
    acc.total() / a.len() as f64
}

/// Difference of group means under a fair-coin realization: mean of `y1`
/// over the treated group minus mean of `y0` over the control group. An
/// empty group sets the degenerate flag and yields NaN.
pub fn rct_effect(y1: &[f64], y0: &[f64], r: &AssignmentRealization<'_>) -> EffectEstimate {
    debug_assert_eq!(y1.len(), r.n());
    debug_assert_eq!(y0.len(), r.n());
    let mut treated = CompensatedSum::new();
    let mut control = CompensatedSum::new();
    let mut n_t = 0usize;
    for i in 0..r.n() {
        if r.b[i] {
            treated.add(y1[i]);
            n_t += 1;
        } else {
            control.add(y0[i]);
        }
    }
    let n_c = r.n() - n_t;
    if n_t == 0 || n_c == 0 {
        return EffectEstimate {
            value: f64::NAN,
            estimator_id: EstimatorId::Rct,
            degenerate_group: true,
        };
    }
    EffectEstimate {
        value: treated.total() / n_t as f64 - control.total() / n_c as f64,
        estimator_id: EstimatorId::Rct,
        degenerate_group: false,
    }
}

/// IPW treatment-effect estimate:
/// `(1/N) sum_{i in B} y1_i / p_i  -  (1/N) sum_{i not in B} y0_i / (1 - p_i)`.
///
/// Empty groups contribute zero to their sum; the estimate stays defined
/// but the degenerate flag is set.
pub fn ipw_effect(y1: &[f64], y0: &[f64], r: &AssignmentRealization<'_>) -> EffectEstimate {
    debug_assert_eq!(y1.len(), r.n());
    debug_assert_eq!(y0.len(), r.n());
    let n = r.n() as f64;
    let p = &r.plan.p;
    let mut acc = CompensatedSum::new();
    let mut n_t = 0usize;
    for i in 0..r.n() {
        if r.b[i] {
            acc.add(y1[i] / p[i]);
            n_t += 1;
        } else {
            acc.add(-y0[i] / (1.0 - p[i]));
        }
    }
    EffectEstimate {
        value: acc.total() / n,
        estimator_id: EstimatorId::Ipw,
        degenerate_group: n_t == 0 || n_t == r.n(),
    }
}

/// Self-normalized (Hajek) IPW estimate: within-arm weights renormalized
/// to sum to one, which removes the weight-noise at the cost of a small
/// finite-sample bias.
pub fn ipw_effect_selfnorm(
    y1: &[f64],
    y0: &[f64],
    r: &AssignmentRealization<'_>,
) -> EffectEstimate {
    debug_assert_eq!(y1.len(), r.n());
    debug_assert_eq!(y0.len(), r.n());
    let p = &r.plan.p;
    let mut num_t = CompensatedSum::new();
    let mut den_t = CompensatedSum::new();
    let mut num_c = CompensatedSum::new();
    let mut den_c = CompensatedSum::new();
    let mut n_t = 0usize;
    for i in 0..r.n() {
        if r.b[i] {
            let w = 1.0 / p[i];
            num_t.add(w * y1[i]);
            den_t.add(w);
            n_t += 1;
        } else {
            let w = 1.0 / (1.0 - p[i]);
            num_c.add(w * y0[i]);
            den_c.add(w);
        }
    }
    if n_t == 0 || n_t == r.n() {
        return EffectEstimate {
            value: f64::NAN,
            estimator_id: EstimatorId::IpwSelfNorm,
            degenerate_group: true,
        };
    }
    EffectEstimate {
        value: num_t.total() / den_t.total() - num_c.total() / den_c.total(),
        estimator_id: EstimatorId::IpwSelfNorm,
        degenerate_group: false,
    }
}

/// Naive causal error: model sample-mean effect minus the IPW estimate of
/// the true effect. Inherits the full IPW assignment variance.
pub fn naive_causal_error(
    ym1: &[f64],
    ym0: &[f64],
    y1: &[f64],
    y0: &[f64],
    r: &AssignmentRealization<'_>,
) -> CausalErrorEstimate {
    let ipw = ipw_effect(y1, y0, r);
    CausalErrorEstimate {
        value: mean_difference(ym1, ym0) - ipw.value,
        method: ErrorMethod::Naive,
        degenerate_group: ipw.degenerate_group,
    }
}

/// Pairs causal error: the same IPW functional applied to the model
/// predictions and the ground truth on one shared realization, so the
/// assignment-noise term cancels exactly.
pub fn pairs_causal_error(
    ym1: &[f64],
    ym0: &[f64],
    y1: &[f64],
    y0: &[f64],
    r: &AssignmentRealization<'_>,
) -> CausalErrorEstimate {
    let model = ipw_effect(ym1, ym0, r);
    let truth = ipw_effect(y1, y0, r);
    CausalErrorEstimate {
        value: model.value - truth.value,
        method: ErrorMethod::Pairs,
        degenerate_group: model.degenerate_group || truth.degenerate_group,
    }
}

/// RCT-benchmark causal error: model sample-mean effect minus the
/// difference of group means under a fair coin.
pub fn rct_causal_error(
    ym1: &[f64],
    ym0: &[f64],
    y1: &[f64],
    y0: &[f64],
    r: &AssignmentRealization<'_>,
) -> CausalErrorEstimate {
    let rct = rct_effect(y1, y0, r);
    CausalErrorEstimate {
        value: mean_difference(ym1, ym0) - rct.value,
        method: ErrorMethod::RctBased,
        degenerate_group: rct.degenerate_group,
    }
}

/// Self-normalized causal error: the naive estimator with its IPW
/// component replaced by the Hajek estimate.
pub fn selfnorm_causal_error(
    ym1: &[f64],
    ym0: &[f64],
    y1: &[f64],
    y0: &[f64],
    r: &AssignmentRealization<'_>,
) -> CausalErrorEstimate {
    let hajek = ipw_effect_selfnorm(y1, y0, r);
    CausalErrorEstimate {
        value: mean_difference(ym1, ym0) - hajek.value,
        method: ErrorMethod::SelfNormBased,
        degenerate_group: hajek.degenerate_group,
    }
}

/// Assignment-noise term of the IPW decomposition:
///
/// ```text
/// f(B) = (1/N) [ <y1(B), w(B)-1> + <y0(B), 1>
///              - <y0(D\B), 1/(w-1)> - <y1(D\B), 1> ]
/// ```
///
/// satisfying `ipw(y) = mean(y1 - y0) + f(B)` exactly for every
/// realization, and `E_B[f] = 0`.
pub fn decomposition_f(y1: &[f64], y0: &[f64], r: &AssignmentRealization<'_>) -> f64 {
    debug_assert_eq!(y1.len(), r.n());
    let p = &r.plan.p;
    let mut acc = CompensatedSum::new();
    for i in 0..r.n() {
        if r.b[i] {
            // w - 1 = (1 - p) / p
            acc.add(y1[i] * (1.0 - p[i]) / p[i]);
            acc.add(y0[i]);
        } else {
            // 1 / (w - 1) = p / (1 - p)
            acc.add(-y0[i] * p[i] / (1.0 - p[i]));
            acc.add(-y1[i]);
        }
    }
    acc.total() / r.n() as f64
}

/// Model-noise term of the IPW decomposition: `f` with the outcomes
/// replaced by `nu * V(y)`, so that
/// `ipw(ym) = mean(ym1 - ym0) + f(B) + g(nu, B)` exactly.
///
/// Requires a model table produced with shared per-unit noise (the `nu`
/// record must be present).
pub fn decomposition_g(
    model: &ModelOutcomeTable,
    table: &PotentialOutcomeTable,
    noise: &NoiseModel,
    r: &AssignmentRealization<'_>,
) -> Result<f64> {
    let nu = model
        .nu
        .as_ref()
        .ok_or_else(|| Error::input("model table has no retained noise vector"))?;
    if nu.len() != r.n() {
        return Err(Error::input("noise vector length does not match realization"));
    }
    let p = &r.plan.p;
    let mut acc = CompensatedSum::new();
    for i in 0..r.n() {
        let v1 = noise.v_kind.eval(table.y1[i]) * nu[i];
        let v0 = noise.v_kind.eval(table.y0[i]) * nu[i];
        if r.b[i] {
            acc.add(v1 * (1.0 - p[i]) / p[i]);
            acc.add(v0);
        } else {
            acc.add(-v0 * p[i] / (1.0 - p[i]));
            acc.add(-v1);
        }
    }
    Ok(acc.total() / r.n() as f64)
}

/// Closed-form variance of `g` over `(nu, B)`, conditional on the realized
/// outcomes:
///
/// ```text
/// Var[g] = (sigma2_nu / N^2) * sum_i [ (1-p)/p * V(y1)^2
///                                    + p/(1-p) * V(y0)^2
///                                    + 2 V(y1) V(y0) ]
/// ```
///
/// Derivation: `g = (1/N) sum_i nu_i h_i` with
/// `h_i = b_i (V1 (w-1) + V0) - (1-b_i) (V0/(w-1) + V1)`; the summands are
/// independent across units and zero-mean, so
/// `Var[g] = (sigma2_nu/N^2) sum_i E[h_i^2]`, and expanding
/// `E[h_i^2] = p (V1 (w-1) + V0)^2 + (1-p) (V0/(w-1) + V1)^2` gives the
/// bracket above (the cross products contribute `2 V1 V0` because
/// `p(w-1) = 1-p` and `(1-p)/(w-1) = p`).
pub fn var_g_closed_form(table: &PotentialOutcomeTable, plan: &AssignmentPlan, noise: &NoiseModel) -> f64 {
    let v1: Vec<f64> = table.y1.iter().map(|&y| noise.v_kind.eval(y)).collect();
    let v0: Vec<f64> = table.y0.iter().map(|&y| noise.v_kind.eval(y)).collect();
    noise.sigma2_nu * weighted_quadratic(&v1, &v0, plan)
}

/// The same quadratic with `V(y)` replaced by `y` itself: the exact
/// variance of the assignment-noise term `f` over realizations of the
/// plan, conditional on the outcomes.
pub fn var_f_closed_form(table: &PotentialOutcomeTable, plan: &AssignmentPlan) -> f64 {
    weighted_quadratic(&table.y1, &table.y0, plan)
}

fn weighted_quadratic(v1: &[f64], v0: &[f64], plan: &AssignmentPlan) -> f64 {
    let n = plan.n() as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..plan.n() {
        let p = plan.p[i];
        acc.add((1.0 - p) / p * v1[i] * v1[i]);
        acc.add(p / (1.0 - p) * v0[i] * v0[i]);
        acc.add(2.0 * v1[i] * v0[i]);
    }
    acc.total() / (n * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{
        plan_logistic_with_beta, plan_rct, sample_realization, AssignmentPlan, Scheme,
    };
    use crate::matrix::Matrix;
    use crate::model_sim::{apply_model_with_nu, VKind};
    use crate::scm_data::{generate_csuite, ScmSpec};
    use alloc::vec;
    use proptest::prelude::*;

    fn table(y1: Vec<f64>, y0: Vec<f64>) -> PotentialOutcomeTable {
        let n = y1.len();
        PotentialOutcomeTable::new(Matrix::from_flat(n, 1, vec![0.0; n]).unwrap(), y1, y0)
            .unwrap()
    }

    fn plan_with_p(p: Vec<f64>) -> AssignmentPlan {
        AssignmentPlan { p, scheme: Scheme::Logistic, unit_index: None, eps_clip: 1e-3 }
    }

    fn realization<'a>(plan: &'a AssignmentPlan, bits: &[bool]) -> AssignmentRealization<'a> {
        AssignmentRealization { b: bits.to_vec(), plan }
    }

    #[test]
    fn sample_mean_effect_is_mean_of_differences() {
        let model = ModelOutcomeTable { ym1: vec![3.0, 5.0], ym0: vec![1.0, 1.0], nu: None };
        assert_eq!(sample_mean_effect(&model).value, 3.0);
    }

    #[test]
    fn population_true_effect_examples() {
        let t = table(vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 0.0]);
        assert_eq!(population_true_effect(&t).value, 2.0);
        let c3 = generate_csuite(&ScmSpec::csuite_3(), 100, 4).unwrap();
        assert_eq!(population_true_effect(&c3).value, 0.0);
    }

    #[test]
    fn perfect_model_matches_population_effect() {
        let t = generate_csuite(&ScmSpec::csuite_1(), 50, 6).unwrap();
        let model = ModelOutcomeTable::perfect(&t);
        assert_eq!(sample_mean_effect(&model).value, population_true_effect(&t).value);
    }

    #[test]
    fn rct_effect_two_unit_hand_case() {
        let plan = plan_rct(2).unwrap();
        let r = realization(&plan, &[true, false]);
        let e = rct_effect(&[2.0, 4.0], &[1.0, 3.0], &r);
        assert_eq!(e.value, 2.0 - 3.0);
        assert!(!e.degenerate_group);

        let all = realization(&plan, &[true, true]);
        let e = rct_effect(&[2.0, 4.0], &[1.0, 3.0], &all);
        assert!(e.degenerate_group);
        assert!(e.value.is_nan());
    }

    #[test]
    fn ipw_effect_two_unit_hand_case() {
        // N=2, p=0.5, B={0}: (1/2)(2*2) - (1/2)(3*2) = -1.
        let plan = plan_with_p(vec![0.5, 0.5]);
        let r = realization(&plan, &[true, false]);
        let e = ipw_effect(&[2.0, 4.0], &[1.0, 3.0], &r);
        assert_eq!(e.value, -1.0);
        assert!(!e.degenerate_group);
    }

    #[test]
    fn ipw_effect_with_empty_control_keeps_empty_sum() {
        let plan = plan_with_p(vec![0.5, 0.5, 0.5]);
        let r = realization(&plan, &[true, true, true]);
        let y1 = [1.0, 2.0, 3.0];
        let e = ipw_effect(&y1, &[9.0, 9.0, 9.0], &r);
        assert!(e.degenerate_group);
        // First term only: (1/N) sum 2 y1 = 2 * mean(y1).
        assert!((e.value - 2.0 * 2.0).abs() < 1e-15);
    }

    #[test]
    fn selfnorm_is_exact_on_constant_outcomes() {
        let plan = plan_with_p(vec![0.2, 0.9, 0.5, 0.7]);
        for bits in [[true, false, true, false], [true, true, true, false], [false, false, true, true]] {
            let r = realization(&plan, &bits);
            let e = ipw_effect_selfnorm(&[5.0; 4], &[2.0; 4], &r);
            assert!((e.value - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn selfnorm_reduces_to_group_means_for_equal_p() {
        let plan = plan_with_p(vec![0.5; 5]);
        let r = realization(&plan, &[true, false, true, false, false]);
        let y1 = [2.0, 4.0, 6.0, 8.0, 10.0];
        let y0 = [1.0, 3.0, 5.0, 7.0, 9.0];
        let hajek = ipw_effect_selfnorm(&y1, &y0, &r);
        let rct = rct_effect(&y1, &y0, &r);
        assert!((hajek.value - rct.value).abs() < 1e-12);
    }

    #[test]
    fn naive_error_on_perfect_model_is_nonzero_single_realization() {
        // The motivating pathology: a perfect model scored against one IPW
        // realization looks wrong.
        let t = table(vec![2.0, 4.0], vec![1.0, 3.0]);
        let model = ModelOutcomeTable::perfect(&t);
        let plan = plan_with_p(vec![0.5, 0.5]);
        let r = realization(&plan, &[true, false]);
        let e = naive_causal_error(&model.ym1, &model.ym0, &t.y1, &t.y0, &r);
        // delta_m = ((2-1)+(4-3))/2 = 1; ipw = -1; naive error = 2.
        assert_eq!(e.value, 2.0);
    }

    #[test]
    fn pairs_error_is_exactly_zero_for_perfect_model() {
        let t = generate_csuite(&ScmSpec::csuite_1(), 40, 9).unwrap();
        let model = ModelOutcomeTable::perfect(&t);
        let cov = t.covariates.clone();
        let plan = plan_logistic_with_beta(&cov, &[4.0], 1e-3).unwrap();
        for seed in 0..50 {
            let r = sample_realization(&plan, seed);
            let e = pairs_causal_error(&model.ym1, &model.ym0, &t.y1, &t.y0, &r);
            assert_eq!(e.value, 0.0);
        }
    }

    #[test]
    fn pairs_error_two_unit_hand_case() {
        // ym = y * 1.5 with nu = 0.5 shared: ipw(ym) = 1.5 * ipw(y), so the
        // pairs error is 0.5 * ipw(y) = -0.5 on the hand fixture.
        let t = table(vec![2.0, 4.0], vec![1.0, 3.0]);
        let model = apply_model_with_nu(&t, &VKind::IdentityMultiplicative, &[0.5, 0.5]).unwrap();
        let plan = plan_with_p(vec![0.5, 0.5]);
        let r = realization(&plan, &[true, false]);
        let e = pairs_causal_error(&model.ym1, &model.ym0, &t.y1, &t.y0, &r);
        assert!((e.value - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn rct_error_propagates_the_degenerate_flag() {
        let t = table(vec![2.0, 4.0], vec![1.0, 3.0]);
        let model = ModelOutcomeTable::perfect(&t);
        let plan = plan_rct(2).unwrap();
        let r = realization(&plan, &[false, false]);
        let e = rct_causal_error(&model.ym1, &model.ym0, &t.y1, &t.y0, &r);
        assert!(e.degenerate_group);
        let ok = realization(&plan, &[true, false]);
        let e = rct_causal_error(&model.ym1, &model.ym0, &t.y1, &t.y0, &ok);
        assert_eq!(e.value, 1.0 - (2.0 - 3.0));
    }

    #[test]
    fn decomposition_f_single_treated_unit_slice() {
        // p = 0.5 everywhere, both units treated:
        // f = (1/N) sum_B [y1 (w-1) + y0] with w = 2.
        let t = table(vec![3.0, 5.0], vec![1.5, 2.5]);
        let plan = plan_with_p(vec![0.5, 0.5]);
        let r = realization(&plan, &[true, true]);
        let f = decomposition_f(&t.y1, &t.y0, &r);
        assert!((f - 0.5 * ((3.0 + 1.5) + (5.0 + 2.5))).abs() < 1e-15);
    }

    #[test]
    fn ipw_identity_holds_for_every_realization() {
        let t = generate_csuite(&ScmSpec::csuite_1(), 50, 12).unwrap();
        let plan = plan_logistic_with_beta(&t.covariates, &[2.5], 1e-3).unwrap();
        let delta = population_true_effect(&t).value;
        for seed in 0..200 {
            let r = sample_realization(&plan, seed);
            let lhs = ipw_effect(&t.y1, &t.y0, &r).value;
            let rhs = delta + decomposition_f(&t.y1, &t.y0, &r);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * (1.0 + delta.abs()),
                "seed {seed}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn model_ipw_identity_holds_with_g() {
        let t = generate_csuite(&ScmSpec::csuite_1(), 50, 13).unwrap();
        let noise = NoiseModel::identity(0.2);
        let model = crate::model_sim::apply_hypothetical_model(&t, &noise, 31);
        let plan = plan_logistic_with_beta(&t.covariates, &[-3.0], 1e-3).unwrap();
        let delta_m = sample_mean_effect(&model).value;
        for seed in 0..200 {
            let r = sample_realization(&plan, seed);
            let lhs = ipw_effect(&model.ym1, &model.ym0, &r).value;
            let rhs = delta_m
                + decomposition_f(&t.y1, &t.y0, &r)
                + decomposition_g(&model, &t, &noise, &r).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * (1.0 + delta_m.abs()),
                "seed {seed}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn g_is_zero_for_zero_noise() {
        let t = generate_csuite(&ScmSpec::csuite_2(), 20, 2).unwrap();
        let noise = NoiseModel::identity(0.0);
        let model = crate::model_sim::apply_hypothetical_model(&t, &noise, 1);
        let plan = plan_rct(20).unwrap();
        let r = sample_realization(&plan, 3);
        assert_eq!(decomposition_g(&model, &t, &noise, &r).unwrap(), 0.0);
    }

    #[test]
    fn var_g_closed_form_trivial_cases() {
        let t = generate_csuite(&ScmSpec::csuite_2(), 30, 5).unwrap();
        let plan = plan_rct(30).unwrap();
        assert_eq!(var_g_closed_form(&t, &plan, &NoiseModel::identity(0.0)), 0.0);
        // Identity V scales the f-variance by sigma2_nu.
        let vg = var_g_closed_form(&t, &plan, &NoiseModel::identity(0.3));
        let vf = var_f_closed_form(&t, &plan);
        assert!((vg - 0.3 * vf).abs() <= 1e-12 * vf.abs());
    }

    #[test]
    fn var_g_below_var_f_under_magnitude_condition() {
        // Positive-outcome fixture with a polynomial V satisfying
        // sigma2_nu * V(y)^2 < y^2 pointwise.
        let t = table(vec![2.0, 3.0, 4.0, 5.0], vec![1.5, 2.5, 3.5, 4.5]);
        let plan = plan_with_p(vec![0.3, 0.6, 0.8, 0.45]);
        let noise = NoiseModel {
            sigma2_nu: 0.5,
            v_kind: VKind::Polynomial(vec![0.0, 0.9]),
            nu_distribution: crate::model_sim::NuDistribution::Gaussian,
            per_arm_noise: false,
        };
        for i in 0..t.n() {
            assert!(noise.sigma2_nu * noise.v_kind.eval(t.y1[i]).powi(2) < t.y1[i] * t.y1[i]);
            assert!(noise.sigma2_nu * noise.v_kind.eval(t.y0[i]).powi(2) < t.y0[i] * t.y0[i]);
        }
        assert!(var_g_closed_form(&t, &plan, &noise) < var_f_closed_form(&t, &plan));
    }

    proptest! {
        // Every effect estimator is linear in (y1, y0).
        #[test]
        fn ipw_is_linear_in_outcomes(
            y1 in proptest::collection::vec(-5.0_f64..5.0, 6),
            z1 in proptest::collection::vec(-5.0_f64..5.0, 6),
            y0 in proptest::collection::vec(-5.0_f64..5.0, 6),
            z0 in proptest::collection::vec(-5.0_f64..5.0, 6),
            a in -3.0_f64..3.0,
            bscale in -3.0_f64..3.0,
            seed in 0u64..50,
        ) {
            let plan = plan_with_p(vec![0.3, 0.7, 0.5, 0.2, 0.9, 0.6]);
            let r = sample_realization(&plan, seed);
            let mixed1: Vec<f64> = y1.iter().zip(&z1).map(|(u, v)| a * u + bscale * v).collect();
            let mixed0: Vec<f64> = y0.iter().zip(&z0).map(|(u, v)| a * u + bscale * v).collect();
            let lhs = ipw_effect(&mixed1, &mixed0, &r).value;
            let rhs = a * ipw_effect(&y1, &y0, &r).value + bscale * ipw_effect(&z1, &z0, &r).value;
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs().max(rhs.abs())));
        }

        // Pairs error vanishes whenever model equals truth, for any plan.
        #[test]
        fn pairs_cancels_for_identical_tables(
            y1 in proptest::collection::vec(-10.0_f64..10.0, 8),
            y0 in proptest::collection::vec(-10.0_f64..10.0, 8),
            p in proptest::collection::vec(0.05_f64..0.95, 8),
            seed in 0u64..20,
        ) {
            let plan = plan_with_p(p);
            let r = sample_realization(&plan, seed);
            let e = pairs_causal_error(&y1, &y0, &y1, &y0, &r);
            prop_assert!(e.value.abs() <= 1e-12);
        }
    }
}
