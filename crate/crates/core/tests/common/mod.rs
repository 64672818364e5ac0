//! Reference computations for the integration and acceptance tests. Nothing
//! here calls into the library's numerical kernels; every quantity is
//! recomputed from its defining formula with plain `powf` arithmetic.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_sample(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

pub fn harmonic_mean(h: &[f64]) -> f64 {
    h.len() as f64 / h.iter().map(|v| 1.0 / v).sum::<f64>()
}

pub fn arithmetic_mean(h: &[f64]) -> f64 {
    h.iter().sum::<f64>() / h.len() as f64
}

pub fn contraharmonic_mean(h: &[f64]) -> f64 {
    h.iter().map(|v| v * v).sum::<f64>() / h.iter().sum::<f64>()
}

pub fn extremes(h: &[f64]) -> (f64, f64) {
    let min = h.iter().copied().fold(f64::INFINITY, f64::min);
    let max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

/// `Σ hˢ / Σ h^{s−1}` with every power taken relative to `scale` so the
/// sums stay finite.
pub fn lehmer_direct(h: &[f64], s: f64) -> f64 {
    let (_, max) = extremes(h);
    let num: f64 = h.iter().map(|v| (v / max).powf(s)).sum();
    let den: f64 = h.iter().map(|v| (v / max).powf(s - 1.0)).sum();
    max * num / den
}

/// Gaps `(L − min, max − L)` computed as weighted averages of the distances
/// to each endpoint, which keeps both accurate when `L` sits at an endpoint.
pub fn gaps(h: &[f64], s: f64) -> (f64, f64) {
    let (min, max) = extremes(h);
    let pivot = if s > 1.0 { max } else { min };
    let w: Vec<f64> = h.iter().map(|v| (v / pivot).powf(s - 1.0)).collect();
    let total: f64 = w.iter().sum();
    let above: f64 = h.iter().zip(&w).map(|(v, w)| (v - min) * w).sum::<f64>() / total;
    let below: f64 = h.iter().zip(&w).map(|(v, w)| (max - v) * w).sum::<f64>() / total;
    (above, below)
}

/// Five-point central difference, error `O(δ⁴)`.
pub fn derivative_fd(f: impl Fn(f64) -> f64, x: f64, delta: f64) -> f64 {
    let d1 = f(x + delta) - f(x - delta);
    let d2 = f(x + 2.0 * delta) - f(x - 2.0 * delta);
    (8.0 * d1 - d2) / (12.0 * delta)
}

/// Five-point difference of a positive, exponentially varying `f`, with the
/// step shrunk so that `δ·|d ln f/ds| ≤ 0.01`.
pub fn derivative_fd_scaled(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let probe = 1e-3;
    let k = ((f(x + probe) / f(x - probe)).ln() / (2.0 * probe)).abs();
    let delta = if k.is_finite() && k > 10.0 { 1e-2 / k } else { 1e-3 };
    derivative_fd(f, x, delta)
}

/// `dL/ds` by differencing whichever endpoint gap is smaller.
pub fn lehmer_derivative_fd(h: &[f64], s: f64) -> f64 {
    let (above, below) = gaps(h, s);
    if above <= below {
        derivative_fd(|x| gaps(h, x).0, s, 1e-3)
    } else {
        -derivative_fd(|x| gaps(h, x).1, s, 1e-3)
    }
}

/// Bisection on `w·eʷ = x` (in the form `w + ln w = ln x` for large `x`).
pub fn lambert_reference(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (-1.0, x.ln().max(1.0) + 1.0);
    let excess = |w: f64| {
        if x > 1.0 {
            w + w.ln() - x.ln()
        } else {
            w * w.exp() - x
        }
    };
    if x > 1.0 {
        lo = 1e-300;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `ln G(x) = ln(x)/α + βx`
pub fn log_g(alpha: f64, beta: f64, x: f64) -> f64 {
    x.ln() / alpha + beta * x
}

/// `G(min + e) − G(min)` and `G(max) − G(max − d)` without cancellation.
pub fn g_rise(alpha: f64, beta: f64, base: f64, delta: f64) -> f64 {
    let lg = log_g(alpha, beta, base);
    lg.exp() * ((delta / base).ln_1p() / alpha + beta * delta).exp_m1()
}

pub fn g_fall(alpha: f64, beta: f64, top: f64, delta: f64) -> f64 {
    let lg = log_g(alpha, beta, top);
    -lg.exp() * ((-delta / top).ln_1p() / alpha - beta * delta).exp_m1()
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    // the mid-point check keeps narrow peaks from being stepped over
    if depth == 0 || (diff.abs() <= 15.0 * tol && (b - a) < 1.0) {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Relative difference with an absolute floor for values that underflow.
pub fn rel_err(actual: f64, expected: f64) -> f64 {
    if actual == expected {
        return 0.0;
    }
    (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}
