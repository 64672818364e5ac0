use crate::distributions::{log_diff_exp, require_strict, BreveParams};
use crate::error::{Error, Result};
use crate::moment::BreveMoment;
use crate::normalize::PositiveSample;
use crate::transform::{lehmer_derivative, lehmer_value};

const MATCH_TOLERANCE: f64 = 1e-9;

/// Affine map sending `min(h)` to exactly 1 and `max(h)` to
/// `exp{W₀(αβ)/(αβ)}`.
pub fn log_breve_normalize(h: &PositiveSample, p: &BreveParams) -> Result<PositiveSample> {
    require_strict(h)?;
    h.affine_rescale(1.0, p.breve_upper().exp())
}

/// Log-Breve distribution over a sample normalized by
/// [`log_breve_normalize`].
///
/// The density is the Breve density divided by
/// `C(α, β) = exp{W₀(αβ)/(α²β) + β·exp{W₀(αβ)/(αβ)}} − e^β`, which equals
/// `G(max) − G(min)` for `G(x) = x^{1/α}·e^{βx}`. Both forms are evaluated
/// in the log domain at construction and must agree.
#[derive(Debug, Clone)]
pub struct LogBreve {
    h: PositiveSample,
    params: BreveParams,
    log_normalizer: f64,
}

impl LogBreve {
    pub fn new(h: PositiveSample, params: BreveParams) -> Result<Self> {
        let upper = params.breve_upper().exp();
        if (h.max() - upper).abs() > MATCH_TOLERANCE * upper {
            return Err(Error::NormalizationMismatch {
                quantity: "max(h')",
                actual: h.max(),
                expected: upper,
            });
        }
        if (h.min() - 1.0).abs() > MATCH_TOLERANCE {
            return Err(Error::NormalizationMismatch {
                quantity: "min(h')",
                actual: h.min(),
                expected: 1.0,
            });
        }
        let closed = log_normalizer_closed_form(&params);
        let from_sample = log_diff_exp(params.log_g(h.max()), params.log_g(h.min()));
        if (closed - from_sample).abs() > MATCH_TOLERANCE {
            return Err(Error::NormalizationMismatch {
                quantity: "ln C(alpha, beta)",
                actual: from_sample,
                expected: closed,
            });
        }
        Ok(Self {
            h,
            params,
            log_normalizer: closed,
        })
    }

    pub fn from_sample(h: &PositiveSample, params: BreveParams) -> Result<Self> {
        Self::new(log_breve_normalize(h, &params)?, params)
    }

    pub fn sample(&self) -> &PositiveSample {
        &self.h
    }

    /// `C(α, β)`; overflows to `+∞` for large `β`, see [`Self::log_normalizer`].
    pub fn normalizer(&self) -> f64 {
        self.log_normalizer.exp()
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn pdf(&self, s: f64) -> f64 {
        let slope = lehmer_derivative(&self.h, s);
        if slope == 0.0 {
            return 0.0;
        }
        let l = lehmer_value(&self.h, BreveMoment::Finite(s)).value;
        (slope.ln() + self.params.log_density_factor(l) - self.log_normalizer).exp()
    }

    /// `(G(L(s)) − G(min))/C`
    pub fn cdf(&self, s: BreveMoment) -> f64 {
        let v = lehmer_value(&self.h, s);
        let min = self.h.min();
        let rise = self.params.log_g_increment(min, v.above_min).exp_m1();
        ((self.params.log_g(min) - self.log_normalizer).exp() * rise).clamp(0.0, 1.0)
    }

    /// `(G(max) − G(L(s)))/C`
    pub fn survival(&self, s: BreveMoment) -> f64 {
        let v = lehmer_value(&self.h, s);
        let max = self.h.max();
        let fall = -self.params.log_g_increment(max, -v.below_max).exp_m1();
        ((self.params.log_g(max) - self.log_normalizer).exp() * fall).clamp(0.0, 1.0)
    }
}

/// `ln C(α, β)` from the closed form.
pub(crate) fn log_normalizer_closed_form(p: &BreveParams) -> f64 {
    let (a, b) = (p.alpha(), p.beta());
    let w = p.lambert();
    let top = w / (a * a * b) + b * (w / (a * b)).exp();
    log_diff_exp(top, b)
}

pub fn log_breve_pdf(h: &PositiveSample, p: &BreveParams, s: f64) -> Result<f64> {
    Ok(LogBreve::new(h.clone(), *p)?.pdf(s))
}
