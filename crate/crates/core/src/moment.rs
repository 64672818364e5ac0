use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A point of the extended real line on which the transform is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreveMoment {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl BreveMoment {
    /// Maps `±inf` onto the sentinel variants and rejects NaN.
    pub fn new(s: f64) -> Result<Self> {
        if s.is_nan() {
            Err(Error::NanMoment)
        } else if s == f64::INFINITY {
            Ok(Self::PosInfinity)
        } else if s == f64::NEG_INFINITY {
            Ok(Self::NegInfinity)
        } else {
            Ok(Self::Finite(s))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::NegInfinity => f64::NEG_INFINITY,
            Self::Finite(s) => s,
            Self::PosInfinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

impl From<BreveMoment> for f64 {
    fn from(m: BreveMoment) -> f64 {
        m.to_f64()
    }
}

impl TryFrom<f64> for BreveMoment {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl PartialOrd for BreveMoment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

/// Renders as `-inf`, `+inf`, or the shortest decimal that round-trips.
impl fmt::Display for BreveMoment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInfinity => f.write_str("-inf"),
            Self::PosInfinity => f.write_str("+inf"),
            Self::Finite(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for BreveMoment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Self::PosInfinity),
            "-inf" | "-infinity" => Ok(Self::NegInfinity),
            _ => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| format!("invalid breve moment {t:?}"))?;
                Self::new(v).map_err(|e| e.to_string())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sentinels_and_numbers() {
        assert_eq!("inf".parse::<BreveMoment>().unwrap(), BreveMoment::PosInfinity);
        assert_eq!("-inf".parse::<BreveMoment>().unwrap(), BreveMoment::NegInfinity);
        assert_eq!("+inf".parse::<BreveMoment>().unwrap(), BreveMoment::PosInfinity);
        assert_eq!("0.5".parse::<BreveMoment>().unwrap(), BreveMoment::Finite(0.5));
        assert!("nan".parse::<BreveMoment>().is_err());
        assert!("abc".parse::<BreveMoment>().is_err());
    }

    #[test]
    fn ordering_places_sentinels_at_ends() {
        let lo = BreveMoment::NegInfinity;
        let hi = BreveMoment::PosInfinity;
        let mid = BreveMoment::Finite(1e300);
        assert!(lo < mid && mid < hi);
    }

    #[test]
    fn display_round_trips() {
        for m in [
            BreveMoment::NegInfinity,
            BreveMoment::Finite(-0.1),
            BreveMoment::Finite(7.0 / 3.0),
            BreveMoment::PosInfinity,
        ] {
            assert_eq!(m.to_string().parse::<BreveMoment>().unwrap(), m);
        }
    }
}
