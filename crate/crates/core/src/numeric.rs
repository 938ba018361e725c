//! Low-level numeric helpers: compensated summation, plug-in moments and
//! a handful of stable scalar functions.

use num_traits::Float;

/// Neumaier-compensated accumulator.
///
/// Summation order is fixed by the caller; the compensation term keeps the
/// result within a few ulps of the exactly rounded sum, so serial and
/// parallel-then-merged aggregation agree far below the 1e-12 relative
/// tolerances used throughout the crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn sum(xs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.total()
}

/// Compensated arithmetic mean. Empty input yields NaN.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    sum(xs) / xs.len() as f64
}

/// Plug-in (population) variance, two-pass. Empty input yields NaN.
pub fn population_variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let m = mean(xs);
    let mut acc = CompensatedSum::new();
    for &x in xs {
        let d = x - m;
        acc.add(d * d);
    }
    acc.total() / xs.len() as f64
}

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable softplus `ln(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Clamp a probability to `[eps, 1 - eps]`.
pub fn clip_probability(p: f64, eps: f64) -> f64 {
    p.max(eps).min(1.0 - eps)
}

/// True when every entry is finite.
pub fn all_finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}
