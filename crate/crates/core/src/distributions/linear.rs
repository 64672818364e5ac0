use crate::distributions::{require_strict, BreveParams};
use crate::error::Result;
use crate::moment::BreveMoment;
use crate::normalize::PositiveSample;
use crate::transform::{lehmer, lehmer_at, lehmer_derivative};

/// Coefficients `(a, b)` of a CDF of the form `a + b·T(L(s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfCoeffs {
    pub a: f64,
    pub b: f64,
}

pub type LinearFamilyCoeffs = CdfCoeffs;

/// Maps `[low, high]` onto `[0, 1]`: `b = 1/(high − low)`, `a = −low·b`.
fn unit_coeffs(low: f64, high: f64) -> CdfCoeffs {
    let b = 1.0 / (high - low);
    CdfCoeffs { a: -low * b, b }
}

fn coeffs_under(h: &PositiveSample, transform: impl Fn(f64) -> f64) -> Result<CdfCoeffs> {
    require_strict(h)?;
    Ok(unit_coeffs(transform(h.min()), transform(h.max())))
}

/// The unique member of the linear family that is a CDF:
/// `a = −min/(max − min)`, `b = 1/(max − min)`.
pub fn linear_cdf_coeffs(h: &PositiveSample) -> Result<LinearFamilyCoeffs> {
    coeffs_under(h, |x| x)
}

/// `F(s) = a + b·L(s)`, clamped to `[0, 1]`.
pub fn empirical_cdf(h: &PositiveSample, coeffs: &LinearFamilyCoeffs, s: BreveMoment) -> f64 {
    (coeffs.a + coeffs.b * lehmer(h, s)).clamp(0.0, 1.0)
}

/// `f(s) = b·L'(s)`.
pub fn empirical_pdf(h: &PositiveSample, coeffs: &LinearFamilyCoeffs, s: f64) -> f64 {
    coeffs.b * lehmer_derivative(h, s)
}

/// CDF coefficients for `a + b·G(L)`, `G(x) = x^{1/α}·e^{βx}`; valid for any
/// non-constant sample, with no endpoint conditions.
pub fn nonlinear_coeffs(h: &PositiveSample, p: &BreveParams) -> Result<CdfCoeffs> {
    coeffs_under(h, |x| p.log_g(x).exp())
}

/// `a + b·G(L(s))`.
pub fn nonlinear_cdf(h: &PositiveSample, p: &BreveParams, coeffs: &CdfCoeffs, s: BreveMoment) -> f64 {
    let l = match s {
        BreveMoment::Finite(x) => lehmer_at(h, x),
        other => lehmer(h, other),
    };
    (coeffs.a + coeffs.b * p.log_g(l).exp()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn ps(v: &[f64]) -> PositiveSample {
        PositiveSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn linear_coeffs_hand_values() {
        let c = linear_cdf_coeffs(&ps(&[1.0, 2.0, 4.0])).unwrap();
        assert!((c.a + 1.0 / 3.0).abs() < 1e-16);
        assert!((c.b - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(c.a + c.b * 1.0, 0.0);
        assert!((c.a + c.b * 4.0 - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn unit_endpoint_limit() {
        let eps = 1e-6;
        let c = linear_cdf_coeffs(&ps(&[eps, 0.3, 1.0])).unwrap();
        assert!((c.a + eps / (1.0 - eps)).abs() < 1e-15);
        assert!((c.b - 1.0).abs() < 2e-6);
    }

    #[test]
    fn cdf_endpoints_and_midpoint() {
        let h = ps(&[1.0, 2.0, 4.0]);
        let c = linear_cdf_coeffs(&h).unwrap();
        assert_eq!(empirical_cdf(&h, &c, BreveMoment::NegInfinity), 0.0);
        assert!((empirical_cdf(&h, &c, BreveMoment::PosInfinity) - 1.0).abs() < 1e-14);
        assert!((empirical_cdf(&h, &c, BreveMoment::Finite(1.0)) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_has_no_coeffs() {
        assert_eq!(linear_cdf_coeffs(&ps(&[2.0, 2.0])).unwrap_err(), Error::ConstantSample);
        let p = BreveParams::new(1.0, 1.0).unwrap();
        assert_eq!(nonlinear_coeffs(&ps(&[2.0, 2.0]), &p).unwrap_err(), Error::ConstantSample);
    }

    #[test]
    fn nonlinear_coeffs_hand_values() {
        let p = BreveParams::new(1.0, 1.0).unwrap();
        let c = nonlinear_coeffs(&ps(&[1.0, 2.0, 4.0]), &p).unwrap();
        let e = std::f64::consts::E;
        let g4 = 4.0 * 4f64.exp();
        assert!((c.b - 1.0 / (g4 - e)).abs() <= 1e-15 * c.b);
        assert!((c.a + e / (g4 - e)).abs() <= 1e-14 * c.a.abs());
        assert!((c.a + c.b * e).abs() <= 1e-15);
        assert!((c.a + c.b * g4 - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn nonlinear_cdf_is_a_cdf_without_endpoint_conditions() {
        let h = ps(&[0.2, 3.0, 7.5, 9.0]);
        let p = BreveParams::new(0.4, 0.7).unwrap();
        let c = nonlinear_coeffs(&h, &p).unwrap();
        assert_eq!(nonlinear_cdf(&h, &p, &c, BreveMoment::NegInfinity), 0.0);
        assert!((nonlinear_cdf(&h, &p, &c, BreveMoment::PosInfinity) - 1.0).abs() < 1e-14);
        let mut prev = 0.0;
        for i in -200..=200 {
            let f = nonlinear_cdf(&h, &p, &c, BreveMoment::Finite(i as f64 * 0.1));
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn identity_transform_reduces_to_linear() {
        let h = ps(&[0.5, 1.5, 2.0]);
        assert_eq!(coeffs_under(&h, |x| x).unwrap(), linear_cdf_coeffs(&h).unwrap());
    }
}
