use crate::distributions::{require_strict, BreveParams};
use crate::error::{Error, Result};
use crate::moment::BreveMoment;
use crate::normalize::PositiveSample;
use crate::transform::{lehmer_derivative, lehmer_value};

/// Relative floor for the lower endpoint: `min(h') = eps · W₀(αβ)/(αβ)`.
pub const DEFAULT_BREVE_EPS: f64 = 1e-9;

const MATCH_TOLERANCE: f64 = 1e-9;

/// Affine map sending `max(h)` to `W₀(αβ)/(αβ)` and `min(h)` to `eps` times
/// that value.
///
/// The lower condition `L(−∞) = W₀(0) = 0` cannot be met by a strictly
/// positive sample; the `eps` floor leaves a lower-tail mass of
/// [`Breve::lower_tail_mass`].
pub fn breve_normalize(h: &PositiveSample, p: &BreveParams, eps: f64) -> Result<PositiveSample> {
    require_strict(h)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidStepParameter {
            step: "breve-normalize",
            reason: format!("eps must lie in (0, 1), got {eps}"),
        });
    }
    let upper = p.breve_upper();
    h.affine_rescale(eps * upper, upper)
}

/// Breve distribution over a sample normalized by [`breve_normalize`].
///
/// `F(s) = L^{1/α}·e^{βL}`,
/// `f(s) = L'·(1/α)·e^{βL}·(1 + αβL)·L^{1/α − 1}`.
#[derive(Debug, Clone)]
pub struct Breve {
    h: PositiveSample,
    params: BreveParams,
}

impl Breve {
    pub fn new(h: PositiveSample, params: BreveParams) -> Result<Self> {
        let upper = params.breve_upper();
        if (h.max() - upper).abs() > MATCH_TOLERANCE * upper {
            return Err(Error::NormalizationMismatch {
                quantity: "max(h')",
                actual: h.max(),
                expected: upper,
            });
        }
        Ok(Self { h, params })
    }

    /// Normalizes `h` and builds the distribution in one go.
    pub fn from_sample(h: &PositiveSample, params: BreveParams, eps: f64) -> Result<Self> {
        Self::new(breve_normalize(h, &params, eps)?, params)
    }

    pub fn sample(&self) -> &PositiveSample {
        &self.h
    }

    pub fn params(&self) -> &BreveParams {
        &self.params
    }

    pub fn cdf(&self, s: BreveMoment) -> f64 {
        let l = lehmer_value(&self.h, s).value;
        self.params.log_g(l).exp().min(1.0)
    }

    /// `G(max) − G(L(s))`, accurate in the upper tail. `G(max) = 1` up to
    /// rounding.
    pub fn survival(&self, s: BreveMoment) -> f64 {
        let v = lehmer_value(&self.h, s);
        let max = self.h.max();
        let log_top = self.params.log_g(max);
        -log_top.exp() * self.params.log_g_increment(max, -v.below_max).exp_m1()
    }

    pub fn pdf(&self, s: f64) -> f64 {
        let slope = lehmer_derivative(&self.h, s);
        if slope == 0.0 {
            return 0.0;
        }
        let l = lehmer_value(&self.h, BreveMoment::Finite(s)).value;
        (slope.ln() + self.params.log_density_factor(l)).exp()
    }

    /// `F(−∞) = G(min(h'))`, the mass the `eps` floor leaves at `s = −∞`.
    pub fn lower_tail_mass(&self) -> f64 {
        self.params.log_g(self.h.min()).exp()
    }
}

/// Requires `h'` from [`breve_normalize`] with the same parameters.
pub fn breve_cdf(h: &PositiveSample, p: &BreveParams, s: BreveMoment) -> Result<f64> {
    Ok(Breve::new(h.clone(), *p)?.cdf(s))
}

pub fn breve_pdf(h: &PositiveSample, p: &BreveParams, s: f64) -> Result<f64> {
    Ok(Breve::new(h.clone(), *p)?.pdf(s))
}
