//! Exhaustive enumeration over all `2^n` assignment realizations of a
//! plan, with exact probability weights. The workhorse behind the
//! small-N unbiasedness and variance oracles: expectations computed here
//! involve no sampling error at all.

use alloc::vec::Vec;

use crate::assignment::{AssignmentPlan, AssignmentRealization};
use crate::numeric::CompensatedSum;
use crate::{Error, Result};

/// Largest pool size accepted for enumeration (2^24 realizations).
pub const MAX_ENUMERATION_UNITS: usize = 24;

/// Visit every realization of `plan` together with its probability
/// `prod_i p_i^{b_i} (1-p_i)^{1-b_i}`.
pub fn for_each_realization<F>(plan: &AssignmentPlan, mut visit: F) -> Result<()>
where
    F: FnMut(&AssignmentRealization<'_>, f64),
{
    let n = plan.n();
    if n == 0 || n > MAX_ENUMERATION_UNITS {
        return Err(Error::config(alloc::format!(
            "enumeration supports 1..={MAX_ENUMERATION_UNITS} units, got {n}"
        )));
    }
    let mut bits = alloc::vec![false; n];
    for mask in 0u64..(1u64 << n) {
        let mut weight = 1.0;
        for (i, bit) in bits.iter_mut().enumerate() {
            let treated = (mask >> i) & 1 == 1;
            *bit = treated;
            weight *= if treated { plan.p[i] } else { 1.0 - plan.p[i] };
        }
        let r = AssignmentRealization { b: bits.clone(), plan };
        visit(&r, weight);
    }
    Ok(())
}

/// Probability-weighted mean and variance of a statistic over all
/// realizations of the plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationMoments {
    pub mean: f64,
    pub variance: f64,
    /// Total probability mass visited; 1 up to rounding, returned so
    /// callers can assert nothing was skipped.
    pub total_weight: f64,
}

/// Exact first two moments of `statistic` under the plan's assignment
/// distribution.
pub fn enumerate_moments<F>(plan: &AssignmentPlan, mut statistic: F) -> Result<EnumerationMoments>
where
    F: FnMut(&AssignmentRealization<'_>) -> f64,
{
    let mut values = Vec::with_capacity(1usize << plan.n().min(MAX_ENUMERATION_UNITS));
    let mut weights = Vec::with_capacity(values.capacity());
    for_each_realization(plan, |r, w| {
        values.push(statistic(r));
        weights.push(w);
    })?;

    let mut wsum = CompensatedSum::new();
    let mut vsum = CompensatedSum::new();
    for (v, w) in values.iter().zip(&weights) {
        wsum.add(*w);
        vsum.add(v * w);
    }
    let total_weight = wsum.total();
    let mean = vsum.total() / total_weight;
    let mut var = CompensatedSum::new();
    for (v, w) in values.iter().zip(&weights) {
        let d = v - mean;
        var.add(w * d * d);
    }
    Ok(EnumerationMoments { mean, variance: var.total() / total_weight, total_weight })
}
