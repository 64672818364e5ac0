//! Raw samples, normalization pipelines and the strictly positive samples
//! they produce.
//!
//! A pipeline is a composition of elementary maps. Steps whose behaviour
//! depends on the data (min/max based rescaling) are first *fitted* to a
//! reference sample and then applied; fitting and applying to the same data
//! is the ordinary per-sample normalization, fitting once on a whole series
//! and applying to its windows gives a globally comparable normalization.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Finite raw observations, at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index, value });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Strictly positive, finite values with cached logarithms and extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveSample {
    values: Vec<f64>,
    log_values: Vec<f64>,
    min: f64,
    max: f64,
}

impl PositiveSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::PipelineYieldsNonPositive { index, value });
            }
        }
        let log_values = values.iter().map(|v| v.ln()).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            values,
            log_values,
            min,
            max,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact comparison: ties are detected as produced by the pipeline.
    pub fn is_constant(&self) -> bool {
        self.min == self.max
    }

    /// Affine map sending `min` to `new_min` and `max` to `new_max`, with the
    /// extremes pinned exactly. Order is preserved.
    pub(crate) fn affine_rescale(&self, new_min: f64, new_max: f64) -> Result<Self> {
        if self.is_constant() {
            return Err(Error::ConstantSample);
        }
        let span = self.max - self.min;
        let values = self
            .values
            .iter()
            .map(|&v| {
                if v == self.max {
                    new_max
                } else if v == self.min {
                    new_min
                } else {
                    let t = (v - self.min) / span;
                    (new_min + t * (new_max - new_min)).clamp(new_min, new_max)
                }
            })
            .collect();
        Self::new(values)
    }
}

/// One elementary map of a normalization pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizationStep {
    /// Pass-through; validation still requires positive input.
    Identity,
    /// `|x| + eps`
    AbsShift(f64),
    /// `(x - min) / (max - min) + eps`; a constant input maps to `eps`.
    AffineToUnitInterval(f64),
    /// `x * target / max`
    ScaleToMax(f64),
    /// `ln(1 + e^x)`
    Softplus,
    /// `e^x`
    ExpMap,
    /// `x - min + eps`
    AffineShiftMin(f64),
}

impl NormalizationStep {
    fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::AbsShift(_) => "abs-shift",
            Self::AffineToUnitInterval(_) => "affine-unit",
            Self::ScaleToMax(_) => "scale-to-max",
            Self::Softplus => "softplus",
            Self::ExpMap => "exp",
            Self::AffineShiftMin(_) => "shift-min",
        }
    }

    fn validate(&self) -> Result<()> {
        let param = match *self {
            Self::AbsShift(p)
            | Self::AffineToUnitInterval(p)
            | Self::ScaleToMax(p)
            | Self::AffineShiftMin(p) => p,
            _ => return Ok(()),
        };
        if param.is_finite() && param > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidStepParameter {
                step: self.name(),
                reason: format!("parameter must be finite and > 0, got {param}"),
            })
        }
    }

    fn fit(&self, data: &[f64]) -> FittedStep {
        let (min, max) = extremes(data);
        match *self {
            Self::Identity => FittedStep::Scale(1.0),
            Self::AbsShift(eps) => FittedStep::AbsShift(eps),
            Self::AffineToUnitInterval(eps) => FittedStep::Affine {
                offset: min,
                span: max - min,
                eps,
            },
            Self::ScaleToMax(target) => FittedStep::Scale(target / max),
            Self::Softplus => FittedStep::Softplus,
            Self::ExpMap => FittedStep::Exp,
            Self::AffineShiftMin(eps) => FittedStep::Shift(eps - min),
        }
    }
}

impl fmt::Display for NormalizationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::AbsShift(p)
            | Self::AffineToUnitInterval(p)
            | Self::ScaleToMax(p)
            | Self::AffineShiftMin(p) => write!(f, "{}:{}", self.name(), p),
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum FittedStep {
    AbsShift(f64),
    Affine { offset: f64, span: f64, eps: f64 },
    Scale(f64),
    Softplus,
    Exp,
    Shift(f64),
}

impl FittedStep {
    fn apply(&self, x: f64) -> f64 {
        match *self {
            Self::AbsShift(eps) => x.abs() + eps,
            Self::Affine { offset, span, eps } => {
                if span > 0.0 {
                    (x - offset) / span + eps
                } else {
                    eps
                }
            }
            Self::Scale(factor) => x * factor,
            Self::Softplus => {
                if x > 0.0 {
                    x + (-x).exp().ln_1p()
                } else {
                    x.exp().ln_1p()
                }
            }
            Self::Exp => x.exp(),
            Self::Shift(offset) => x + offset,
        }
    }
}

/// Ordered composition of normalization steps.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationPipeline {
    steps: Vec<NormalizationStep>,
}

impl NormalizationPipeline {
    pub fn new(steps: Vec<NormalizationStep>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyPipeline);
        }
        for step in &steps {
            step.validate()?;
        }
        Ok(Self { steps })
    }

    /// Single pass-through step, valid for data that is already positive.
    pub fn identity() -> Self {
        Self {
            steps: vec![NormalizationStep::Identity],
        }
    }

    pub fn steps(&self) -> &[NormalizationStep] {
        &self.steps
    }

    /// Fits every data-dependent step on `reference`, stage by stage.
    pub fn fit(&self, reference: &[f64]) -> Result<FittedPipeline> {
        let mut data = reference.to_vec();
        let mut fitted = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let f = step.fit(&data);
            for v in data.iter_mut() {
                *v = f.apply(*v);
            }
            check_finite(&data)?;
            fitted.push(f);
        }
        Ok(FittedPipeline { steps: fitted })
    }

    /// Fits on the sample itself and applies.
    pub fn normalize(&self, sample: &Sample) -> Result<PositiveSample> {
        self.fit(sample.values())?.apply(sample.values())
    }
}

impl Default for NormalizationPipeline {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Display for NormalizationPipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Parses comma separated `name[:param]` items, e.g. `affine-unit:0.01,softplus`.
impl FromStr for NormalizationPipeline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut steps = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, param) = match item.split_once(':') {
                Some((n, p)) => (n.trim(), Some(p.trim())),
                None => (item, None),
            };
            let num = |default: Option<f64>| -> std::result::Result<f64, String> {
                match (param, default) {
                    (Some(p), _) => p
                        .parse::<f64>()
                        .map_err(|_| format!("invalid parameter {p:?} for {name}")),
                    (None, Some(d)) => Ok(d),
                    (None, None) => Err(format!("step {name} needs a parameter")),
                }
            };
            let no_param = || match param {
                Some(_) => Err(format!("step {name} takes no parameter")),
                None => Ok(()),
            };
            let step = match name {
                "identity" => no_param().map(|_| NormalizationStep::Identity)?,
                "abs-shift" => NormalizationStep::AbsShift(num(None)?),
                "affine-unit" => NormalizationStep::AffineToUnitInterval(num(None)?),
                "scale-to-max" => NormalizationStep::ScaleToMax(num(Some(1.0))?),
                "softplus" => no_param().map(|_| NormalizationStep::Softplus)?,
                "exp" => no_param().map(|_| NormalizationStep::ExpMap)?,
                "shift-min" => NormalizationStep::AffineShiftMin(num(None)?),
                other => return Err(format!("unknown normalization step {other:?}")),
            };
            steps.push(step);
        }
        Self::new(steps).map_err(|e| e.to_string())
    }
}

/// A pipeline whose data-dependent constants have been frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedPipeline {
    steps: Vec<FittedStep>,
}

impl FittedPipeline {
    pub fn apply(&self, values: &[f64]) -> Result<PositiveSample> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut data = values.to_vec();
        for step in &self.steps {
            for v in data.iter_mut() {
                *v = step.apply(*v);
            }
            check_finite(&data)?;
        }
        PositiveSample::new(data)
    }
}

fn check_finite(data: &[f64]) -> Result<()> {
    match data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        Some((index, &value)) => Err(Error::PipelineYieldsNonPositive { index, value }),
        None => Ok(()),
    }
}

fn extremes(data: &[f64]) -> (f64, f64) {
    data.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// `pipeline.normalize(sample)`.
pub fn normalize(sample: &Sample, pipeline: &NormalizationPipeline) -> Result<PositiveSample> {
    pipeline.normalize(sample)
}
