//! Distribution families built on the transform: the linear family
//! `a + b·L`, the nonlinear family `a + b·L^{1/α}·e^{βL}`, and the Breve and
//! Log-Breve densities obtained from it under Lambert-W endpoint conditions.

mod breve;
mod linear;
mod log_breve;
mod modes;

pub use breve::{breve_cdf, breve_normalize, breve_pdf, Breve, DEFAULT_BREVE_EPS};
pub use linear::{
    empirical_cdf, empirical_pdf, linear_cdf_coeffs, nonlinear_cdf, nonlinear_coeffs,
    CdfCoeffs, LinearFamilyCoeffs,
};
pub use log_breve::{log_breve_normalize, log_breve_pdf, LogBreve};
pub use modes::{find_modes, Mode, ModeKind};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lambert::lambert_w0;

/// Parameters of the Breve and Log-Breve families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreveParams {
    alpha: f64,
    beta: f64,
}

impl BreveParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta.is_finite() {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidBreveParams { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `W₀(αβ)`
    pub fn lambert(&self) -> f64 {
        lambert_w0(self.alpha * self.beta).expect("αβ > 0 lies above the branch point")
    }

    /// `W₀(αβ)/(αβ)`, the upper endpoint the Breve family needs.
    pub fn breve_upper(&self) -> f64 {
        self.lambert() / (self.alpha * self.beta)
    }

    /// `ln G(x) = (1/α)·ln x + β·x`.
    pub fn log_g(&self, x: f64) -> f64 {
        x.ln() / self.alpha + self.beta * x
    }

    /// `ln G(x + dx) − ln G(x)`, accurate when `dx` is small relative to `x`.
    pub(crate) fn log_g_increment(&self, x: f64, dx: f64) -> f64 {
        (dx / x).ln_1p() / self.alpha + self.beta * dx
    }

    /// `ln[(1/α)·e^{βL}·(1 + αβL)·L^{1/α − 1}]`, the factor multiplying `L'`
    /// in the nonlinear densities.
    pub(crate) fn log_density_factor(&self, l: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        -a.ln() + b * l + (a * b * l).ln_1p() + (1.0 / a - 1.0) * l.ln()
    }
}

/// Density values over an ordered grid with their trapezoid mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub mass: f64,
}

impl DensityCurve {
    /// Evaluates `pdf` on `grid` (ascending, finite). Evaluation runs in
    /// parallel; the result does not depend on scheduling.
    pub fn evaluate(grid: &[f64], pdf: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        for (i, pair) in grid.windows(2).enumerate() {
            if pair[0] > pair[1] {
                return Err(Error::GridNotSorted { position: i + 1 });
            }
        }
        if let Some(position) = grid.iter().position(|s| !s.is_finite()) {
            return Err(Error::GridNotSorted { position });
        }
        let density: Vec<f64> = grid.par_iter().map(|&s| pdf(s)).collect();
        let mass = trapezoid(grid, &density);
        Ok(Self {
            grid: grid.to_vec(),
            density,
            mass,
        })
    }
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `ln(eᵃ − eᵇ)` for `a > b`.
pub(crate) fn log_diff_exp(a: f64, b: f64) -> f64 {
    a + (-(b - a).exp()).ln_1p()
}

pub(crate) fn require_strict(h: &crate::normalize::PositiveSample) -> Result<()> {
    if h.is_constant() {
        Err(Error::ConstantSample)
    } else {
        Ok(())
    }
}
