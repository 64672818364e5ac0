//! Inverse transform: recover the breve moment at which the transform of a
//! sample takes a given value.
//!
//! The primary route is a bracketed root-find (doubling bracket, bisection,
//! Newton polish). The Lagrange inversion series around an expansion point is
//! provided as a secondary route for cross-checking.

use crate::error::{Error, Result};
use crate::moment::BreveMoment;
use crate::normalize::PositiveSample;
use crate::transform::{lehmer_at, lehmer_derivative};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Largest |s| the doubling bracket may reach.
pub const BRACKET_LIMIT: f64 = 512.0;
/// Relative distance under which a target is snapped onto an endpoint.
pub const ENDPOINT_SNAP: f64 = 1e-15;
pub const MAX_SERIES_TERMS: usize = 6;

const BISECTION_WIDTH: f64 = 1e-3;
const MAX_NEWTON_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    BisectionNewton,
    LagrangeSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResult {
    pub moment: BreveMoment,
    /// `|L(ŝ) − T|`
    pub residual: f64,
    pub iterations: usize,
    pub method: InversionMethod,
}

/// Finds `ŝ` with `L(ŝ) = target`.
///
/// Convergence is declared when `|L(ŝ) − T| ≤ tol · max(1, T)`. Targets equal
/// to the sample extremes (within [`ENDPOINT_SNAP`] relative) map to `±∞`.
pub fn invert(h: &PositiveSample, target: f64, tol: f64) -> Result<InversionResult> {
    if h.is_constant() {
        return Err(Error::ConstantSample);
    }
    let (min, max) = (h.min(), h.max());
    let out_of_range = |residual: f64| Error::TargetOutOfRange {
        target,
        min,
        max,
        residual,
    };
    if !target.is_finite() {
        return Err(out_of_range(f64::INFINITY));
    }
    let endpoint = |moment| InversionResult {
        moment,
        residual: 0.0,
        iterations: 0,
        method: InversionMethod::BisectionNewton,
    };
    if target == max || (target - max).abs() <= ENDPOINT_SNAP * max {
        return Ok(endpoint(BreveMoment::PosInfinity));
    }
    if target == min || (target - min).abs() <= ENDPOINT_SNAP * min {
        return Ok(endpoint(BreveMoment::NegInfinity));
    }
    if target > max {
        return Err(out_of_range(target - max));
    }
    if target < min {
        return Err(out_of_range(min - target));
    }

    let excess = |s: f64| lehmer_at(h, s) - target;
    let mut iterations = 0;

    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let mut f_lo = excess(lo);
    while f_lo > 0.0 {
        lo *= 2.0;
        iterations += 1;
        if lo.abs() > BRACKET_LIMIT {
            return Err(out_of_range(f_lo));
        }
        f_lo = excess(lo);
    }
    let mut f_hi = excess(hi);
    while f_hi < 0.0 {
        hi *= 2.0;
        iterations += 1;
        if hi > BRACKET_LIMIT {
            return Err(out_of_range(-f_hi));
        }
        f_hi = excess(hi);
    }
    if f_lo == 0.0 {
        return Ok(finite_result(lo, 0.0, iterations));
    }
    if f_hi == 0.0 {
        return Ok(finite_result(hi, 0.0, iterations));
    }

    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = excess(mid);
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(finite_result(mid, 0.0, iterations));
        }
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut s = 0.5 * (lo + hi);
    let mut f_s = excess(s);
    let mut best = (s, f_s.abs());
    for _ in 0..MAX_NEWTON_STEPS {
        if f_s == 0.0 {
            break;
        }
        if f_s < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let slope = lehmer_derivative(h, s);
        let newton = s - f_s / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        iterations += 1;
        let step = (next - s).abs();
        s = next;
        f_s = excess(s);
        if f_s.abs() < best.1 {
            best = (s, f_s.abs());
        }
        if step <= 4.0 * f64::EPSILON * s.abs().max(1.0) || next <= lo || next >= hi {
            break;
        }
    }

    let (s, residual) = best;
    if residual <= tol * target.max(1.0) {
        Ok(finite_result(s, residual, iterations))
    } else {
        Err(Error::InversionStalled { moment: s, residual })
    }
}

fn finite_result(s: f64, residual: f64, iterations: usize) -> InversionResult {
    InversionResult {
        moment: BreveMoment::Finite(s),
        residual,
        iterations,
        method: InversionMethod::BisectionNewton,
    }
}

/// How the limit coefficients of the inversion series are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesCoefficients {
    /// 6-point central stencil around the removable singularity, step scaled
    /// to the sample's log-spread.
    #[default]
    FiniteDifference,
    /// Exact Taylor coefficients of the transform, reverted as power series.
    Analytic,
}

/// Truncated Lagrange inversion series around `s0`:
///
/// `s0 + Σ_{k=1}^{terms} (T − L(s0))^k / k! · lim_{s→s0} ∂^{k−1}/∂s^{k−1} [((s − s0)/(L(s) − L(s0)))^k]`
///
/// Only meaningful close to `s0`.
pub fn invert_series(h: &PositiveSample, target: f64, s0: f64, terms: usize) -> Result<f64> {
    invert_series_with(h, target, s0, terms, SeriesCoefficients::FiniteDifference)
}

pub fn invert_series_with(
    h: &PositiveSample,
    target: f64,
    s0: f64,
    terms: usize,
    coefficients: SeriesCoefficients,
) -> Result<f64> {
    if h.is_constant() {
        return Err(Error::ConstantSample);
    }
    if terms == 0 || terms > MAX_SERIES_TERMS {
        return Err(Error::InvalidTermCount {
            requested: terms,
            max: MAX_SERIES_TERMS,
        });
    }
    if !(target > h.min() && target < h.max()) {
        return Err(Error::TargetOutOfRange {
            target,
            min: h.min(),
            max: h.max(),
            residual: if target > h.max() {
                target - h.max()
            } else {
                h.min() - target
            },
        });
    }
    let l0 = lehmer_at(h, s0);
    let offset = target - l0;
    if offset == 0.0 {
        return Ok(s0);
    }
    let limits = match coefficients {
        SeriesCoefficients::FiniteDifference => fd_limit_coefficients(h, s0, terms),
        SeriesCoefficients::Analytic => analytic_limit_coefficients(h, s0, terms),
    };
    let mut sum = s0;
    let mut power_over_factorial = 1.0;
    let mut previous = f64::INFINITY;
    let mut growth = 0;
    for (k, limit) in limits.iter().enumerate().map(|(i, c)| (i + 1, c)) {
        power_over_factorial *= offset / k as f64;
        let term = power_over_factorial * limit;
        if !term.is_finite() {
            return Err(Error::SeriesDiverging { terms: k });
        }
        if term.abs() > previous {
            growth += 1;
            if growth >= 3 {
                return Err(Error::SeriesDiverging { terms: k });
            }
        } else {
            growth = 0;
        }
        previous = term.abs();
        sum += term;
    }
    Ok(sum)
}

/// Stencil step in units of the sample's log-spread `ln(max/min)`. Rounding
/// noise in the order-`(k−1)` difference grows like `ε/(step·spread)^{k−1}`
/// and the stencil's truncation error like `(step·spread)²`; this balances the
/// two for six terms.
const STENCIL_SCALE: f64 = 2e-2;
const STENCIL_NODES: [f64; 6] = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];

/// `lim_{s→s0} ∂^{k−1}/∂s^{k−1} φ(s)^k`, `φ(s) = (s − s0)/(L(s) − L(s0))`,
/// for `k = 1..=terms`, from a stencil that never touches `s0` itself.
fn fd_limit_coefficients(h: &PositiveSample, s0: f64, terms: usize) -> Vec<f64> {
    let step = STENCIL_SCALE / (h.max() / h.min()).ln();
    let nodes: Vec<f64> = STENCIL_NODES.iter().map(|j| j * step).collect();
    let phi: Vec<f64> = nodes
        .iter()
        .map(|&dx| 1.0 / divided_difference(h, s0, dx))
        .collect();
    let weights = fornberg_weights(&nodes, 0.0, terms - 1);
    (1..=terms)
        .map(|k| {
            weights[k - 1]
                .iter()
                .zip(&phi)
                .map(|(w, p)| w * p.powi(k as i32))
                .sum()
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, 8 points.
const GAUSS_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `(L(s0 + dx) − L(s0))/dx` as the mean of the analytic derivative over
/// the interval. Subtracting two transform values would leave a relative
/// error near `ε·L/(L'·dx)`, which the high-order stencil then amplifies.
fn divided_difference(h: &PositiveSample, s0: f64, dx: f64) -> f64 {
    let mid = s0 + 0.5 * dx;
    let half = 0.5 * dx;
    let mut acc = 0.0;
    for (x, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
        acc += w * (lehmer_derivative(h, mid - half * x) + lehmer_derivative(h, mid + half * x));
    }
    0.5 * acc
}

/// Finite-difference weights for derivatives `0..=max_order` at `x0` over
/// arbitrary `nodes` (Fornberg's recursion).
pub(crate) fn fornberg_weights(nodes: &[f64], x0: f64, max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Same limits as [`fd_limit_coefficients`], from the exact Taylor expansion
/// `L(s0 + t) = Σ lⱼ tʲ`: with `a(t) = (L(s0 + t) − L(s0))/t` the limit for
/// index `k` is `(k−1)! · [t^{k−1}] a(t)^{−k}`.
fn analytic_limit_coefficients(h: &PositiveSample, s0: f64, terms: usize) -> Vec<f64> {
    let order = terms + 1;
    let taylor = taylor_coefficients(h, s0, order);
    let a: Vec<f64> = taylor[1..].to_vec();
    let phi = series_reciprocal(&a, terms);
    let mut power = vec![1.0; 1];
    power.resize(terms, 0.0);
    let mut factorial = 1.0;
    (1..=terms)
        .map(|k| {
            power = series_mul(&power, &phi, terms);
            if k > 1 {
                factorial *= (k - 1) as f64;
            }
            factorial * power[k - 1]
        })
        .collect()
}

/// Taylor coefficients `l₀..l_order` of `L(s0 + t)` in `t`.
fn taylor_coefficients(h: &PositiveSample, s0: f64, order: usize) -> Vec<f64> {
    let t = s0 - 1.0;
    let c = if t > 0.0 { h.max() } else { h.min() }.ln();
    let mut num = vec![0.0; order + 1];
    let mut den = vec![0.0; order + 1];
    for (&v, &y) in h.values().iter().zip(h.log_values()) {
        let d = y - c;
        let w = (t * d).exp();
        let mut term = w;
        for j in 0..=order {
            num[j] += term * v;
            den[j] += term;
            term *= d / (j + 1) as f64;
        }
    }
    let inv = series_reciprocal(&den, order + 1);
    series_mul(&num, &inv, order + 1)
}

fn series_mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_reciprocal(a: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    out[0] = 1.0 / a[0];
    for n in 1..len {
        let mut acc = 0.0;
        for k in 1..=n.min(a.len() - 1) {
            acc += a[k] * out[n - k];
        }
        out[n] = -acc / a[0];
    }
    out
}
