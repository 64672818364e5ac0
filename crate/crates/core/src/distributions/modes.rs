use crate::distributions::{Breve, BreveParams};
use crate::error::{Error, Result};
use crate::normalize::PositiveSample;

const DERIVATIVE_STEP: f64 = 1e-5;
const BISECTION_WIDTH: f64 = 1e-8;
/// Brackets whose density is below this fraction of the peak are tail noise.
const NOISE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Maximum,
    Minimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub s: f64,
    pub density: f64,
    pub kind: ModeKind,
}

/// Extreme points of the Breve density on an ascending finite grid.
///
/// A mode is reported wherever the central-difference derivative of the
/// density changes sign between neighbouring grid points; each bracket is
/// refined by bisection to width `1e-8`.
pub fn find_modes(h: &PositiveSample, p: &BreveParams, grid: &[f64]) -> Result<Vec<Mode>> {
    let dist = Breve::new(h.clone(), *p)?;
    for (i, pair) in grid.windows(2).enumerate() {
        if !pair[0].is_finite() || !pair[1].is_finite() || pair[0] >= pair[1] {
            return Err(Error::GridNotSorted { position: i + 1 });
        }
    }
    Ok(density_extrema(&|s| dist.pdf(s), grid))
}

pub(crate) fn density_extrema(pdf: &impl Fn(f64) -> f64, grid: &[f64]) -> Vec<Mode> {
    let slope = |s: f64| (pdf(s + DERIVATIVE_STEP) - pdf(s - DERIVATIVE_STEP)) / (2.0 * DERIVATIVE_STEP);
    let density: Vec<f64> = grid.iter().map(|&s| pdf(s)).collect();
    let peak = density.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Vec::new();
    }
    let slopes: Vec<f64> = grid.iter().map(|&s| slope(s)).collect();
    let mut modes = Vec::new();
    let mut last: Option<usize> = None;
    for i in 0..grid.len() {
        let d1 = slopes[i];
        if d1 == 0.0 {
            continue;
        }
        let Some(j) = last.replace(i) else {
            continue;
        };
        let d0 = slopes[j];
        let kind = match (d0 > 0.0, d1 > 0.0) {
            (true, false) => ModeKind::Maximum,
            (false, true) => ModeKind::Minimum,
            _ => continue,
        };
        if density[j..=i].iter().copied().fold(0.0, f64::max) < NOISE_FLOOR * peak {
            continue;
        }
        let (mut lo, mut hi) = (grid[j], grid[i]);
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            let d = slope(mid);
            if d == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (d > 0.0) == (d0 > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        modes.push(Mode {
            s,
            density: pdf(s),
            kind,
        });
    }
    modes
}
