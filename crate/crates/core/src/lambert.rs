use std::f64::consts::E;

use crate::error::{Error, Result};

/// `-1/e`, the branch point of W.
pub const BRANCH_POINT: f64 = -1.0 / E;

/// Principal branch `W₀(x)` of the Lambert W function, `w·eʷ = x`, `w ≥ −1`.
///
/// Halley iteration from `ln(1 + x)` (`x ≥ 0`) or the branch-point series
/// (`x < 0`).
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::BelowBranchPoint(x));
    }
    // −1/e is not representable; anything that rounds onto it maps to −1.
    if x <= BRANCH_POINT {
        if x >= BRANCH_POINT - 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(Error::BelowBranchPoint(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == E {
        return Ok(1.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    let mut w = if x < 0.0 {
        // p = sqrt(2(e·x + 1)); W = −1 + p − p²/3 + 11p³/72 − …
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    } else if x < 3.0 {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    if w <= -1.0 {
        w = -1.0 + 1e-12;
    }

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let fp = ew * wp1;
        let step = f / (fp - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        let next = if next <= -1.0 { 0.5 * (w - 1.0) } else { next };
        let done = (next - w).abs() <= 2.0 * f64::EPSILON * w.abs().max(1e-300);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}
