//! Evaluation of the discrete Lehmer transform `L(s) = Σ hᵢˢ / Σ hᵢˢ⁻¹` and
//! its derivatives.
//!
//! Every finite evaluation is carried out as a softmax-weighted average
//! around a pivot: with `yᵢ = ln hᵢ` and the pivot chosen as the element with
//! the largest exponent `(s−1)·yᵢ` (the maximum for `s > 1`, the minimum
//! otherwise), the weights `exp((s−1)(yᵢ − y_pivot))` lie in `(0, 1]`, so no
//! intermediate quantity can overflow and the distance to the pivot endpoint
//! keeps full relative precision even when it is tiny.

use crate::error::{Error, Result};
use crate::moment::BreveMoment;
use crate::normalize::PositiveSample;

/// Samples above this size use the centered covariance form of the first
/// derivative instead of the pairwise double sum.
const PAIRWISE_LIMIT: usize = 512;

/// Transform value together with its distances to both endpoints.
///
/// The distance to the endpoint the evaluation pivoted on is accurate to a
/// few ulps of itself, which the plain difference `max − value` is not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LehmerValue {
    pub value: f64,
    pub above_min: f64,
    pub below_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotonicityClass {
    Constant,
    StrictlyIncreasing,
}

fn pivot_is_max(s: f64) -> bool {
    s > 1.0
}

/// Normalized weights `pᵢ ∝ hᵢ^{s−1}`.
fn softmax_weights(h: &PositiveSample, s: f64) -> Vec<f64> {
    let t = s - 1.0;
    let y_piv = if pivot_is_max(s) { h.max() } else { h.min() }.ln();
    let mut w: Vec<f64> = h
        .log_values()
        .iter()
        .map(|&y| (t * (y - y_piv)).exp())
        .collect();
    let total: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= total;
    }
    w
}

/// Evaluates the transform with endpoint gaps.
pub fn lehmer_value(h: &PositiveSample, s: BreveMoment) -> LehmerValue {
    let (min, max) = (h.min(), h.max());
    let s = match s {
        BreveMoment::PosInfinity => {
            return LehmerValue {
                value: max,
                above_min: max - min,
                below_max: 0.0,
            }
        }
        BreveMoment::NegInfinity => {
            return LehmerValue {
                value: min,
                above_min: 0.0,
                below_max: max - min,
            }
        }
        BreveMoment::Finite(s) => s,
    };
    if h.is_constant() {
        return LehmerValue {
            value: min,
            above_min: 0.0,
            below_max: 0.0,
        };
    }
    let t = s - 1.0;
    let upper = pivot_is_max(s);
    let pivot = if upper { max } else { min };
    let y_piv = pivot.ln();
    let mut sum_w = 0.0;
    let mut sum_wd = 0.0;
    let mut sum_wh = 0.0;
    for (&v, &y) in h.values().iter().zip(h.log_values()) {
        let w = (t * (y - y_piv)).exp();
        sum_w += w;
        sum_wd += w * (v - pivot).abs();
        sum_wh += w * v;
    }
    let span = max - min;
    let gap = (sum_wd / sum_w).min(span);
    // The direct ratio rounds better than pivot +/- gap; the gap form is the
    // fallback when the weighted sum overflows.
    let direct = sum_wh / sum_w;
    if upper {
        let value = if direct.is_finite() { direct } else { max - gap };
        LehmerValue {
            value: value.clamp(min, max),
            above_min: span - gap,
            below_max: gap,
        }
    } else {
        let value = if direct.is_finite() { direct } else { min + gap };
        LehmerValue {
            value: value.clamp(min, max),
            above_min: gap,
            below_max: span - gap,
        }
    }
}

/// The discrete Lehmer transform at a breve moment. `±∞` return the exact
/// sample extremes.
pub fn lehmer(h: &PositiveSample, s: BreveMoment) -> f64 {
    lehmer_value(h, s).value
}

/// Convenience for finite moments.
pub fn lehmer_at(h: &PositiveSample, s: f64) -> f64 {
    lehmer(h, BreveMoment::Finite(s))
}

/// Batch evaluation over an ascending grid.
pub fn lehmer_spectrum(
    h: &PositiveSample,
    grid: &[BreveMoment],
) -> Result<Vec<(BreveMoment, f64)>> {
    check_sorted(grid)?;
    Ok(grid.iter().map(|&s| (s, lehmer(h, s))).collect())
}

pub(crate) fn check_sorted(grid: &[BreveMoment]) -> Result<()> {
    for (i, pair) in grid.windows(2).enumerate() {
        if pair[0].to_f64().is_nan() || pair[0] > pair[1] {
            return Err(Error::GridNotSorted { position: i + 1 });
        }
    }
    Ok(())
}

/// First derivative `∂L/∂s`, always `≥ 0`.
///
/// Uses the pairwise form
/// `Σ_{i<k} (hᵢ−hₖ)(ln hᵢ−ln hₖ) pᵢ pₖ` with `pᵢ ∝ hᵢ^{s−1}`, in which every
/// term is non-negative.
pub fn lehmer_derivative(h: &PositiveSample, s: f64) -> f64 {
    if h.is_constant() || !s.is_finite() {
        return 0.0;
    }
    let p = softmax_weights(h, s);
    if h.len() <= PAIRWISE_LIMIT {
        derivative_pairwise(&p, h.values(), h.log_values())
    } else {
        derivative_covariance(&p, h.values(), h.log_values())
    }
}

fn derivative_pairwise(p: &[f64], v: &[f64], y: &[f64]) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        if p[i] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for k in (i + 1)..n {
            row += (v[i] - v[k]) * (y[i] - y[k]) * p[k];
        }
        acc += p[i] * row;
    }
    acc
}

fn derivative_covariance(p: &[f64], v: &[f64], y: &[f64]) -> f64 {
    let mean_v: f64 = p.iter().zip(v).map(|(a, b)| a * b).sum();
    let mean_y: f64 = p.iter().zip(y).map(|(a, b)| a * b).sum();
    let cov: f64 = p
        .iter()
        .zip(v.iter().zip(y))
        .map(|(w, (a, b))| w * (a - mean_v) * (b - mean_y))
        .sum();
    cov.max(0.0)
}

/// Derivative from `L · d(ln L)/ds`, where
/// `d(ln L)/ds = E_{softmax(s·y)}[y] − E_{softmax((s−1)·y)}[y]`.
///
/// Independent of the pairwise route; kept as a diagnostic cross-check.
pub fn lehmer_derivative_log_route(h: &PositiveSample, s: f64) -> f64 {
    if h.is_constant() {
        return 0.0;
    }
    let mean_log = |exponent: f64| {
        let y = h.log_values();
        let top = y
            .iter()
            .map(|&v| exponent * v)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut num, mut den) = (0.0, 0.0);
        for &v in y {
            let w = (exponent * v - top).exp();
            num += w * v;
            den += w;
        }
        num / den
    };
    lehmer_at(h, s) * (mean_log(s) - mean_log(s - 1.0))
}

/// Derivative of order `order ≥ 1`.
///
/// Order 1 is analytic. Higher orders apply a centered finite difference of
/// order `order − 1` to the analytic first derivative, with step `1e-3`
/// refined twice by Richardson extrapolation.
pub fn lehmer_nth_derivative(h: &PositiveSample, s: f64, order: u32) -> Result<f64> {
    match order {
        0 => Err(Error::OrderZero),
        1 => Ok(lehmer_derivative(h, s)),
        _ if h.is_constant() => Ok(0.0),
        _ => {
            let q = order - 1;
            let f = |x: f64| lehmer_derivative(h, x);
            Ok(richardson(|step| central_difference(&f, s, q, step), 1e-3, 2))
        }
    }
}

/// `Σ_j (−1)^j C(q,j) f(s + (q/2 − j)·step) / step^q`, error `O(step²)`.
pub(crate) fn central_difference(f: &impl Fn(f64) -> f64, s: f64, q: u32, step: f64) -> f64 {
    let half = q as f64 / 2.0;
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=q {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f(s + (half - j as f64) * step);
        binom = binom * (q - j) as f64 / (j + 1) as f64;
    }
    acc / step.powi(q as i32)
}

/// Richardson extrapolation of an estimator with an even-power error series.
pub(crate) fn richardson(estimate: impl Fn(f64) -> f64, step: f64, levels: usize) -> f64 {
    let mut table: Vec<f64> = (0..=levels)
        .map(|i| estimate(step / 2f64.powi(i as i32)))
        .collect();
    for level in 1..=levels {
        let factor = 4f64.powi(level as i32);
        for i in 0..table.len() - 1 {
            table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
        }
        table.pop();
    }
    table[0]
}

/// Constant iff all normalized values are exactly equal. Any distinct pair
/// contributes a strictly positive term to the first derivative, so every
/// other sample is strictly increasing in `s`.
pub fn monotonicity_class(h: &PositiveSample) -> MonotonicityClass {
    if h.is_constant() {
        MonotonicityClass::Constant
    } else {
        MonotonicityClass::StrictlyIncreasing
    }
}
