//! Sliding-window application of the transform to time series.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moment::BreveMoment;
use crate::normalize::{FittedPipeline, NormalizationPipeline, Sample};
use crate::transform::{check_sorted, lehmer};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Option<Vec<f64>>,
    values: Vec<f64>,
    sample_rate: Option<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Sample::new(values.clone())?;
        Ok(Self {
            timestamps: None,
            values,
            sample_rate: None,
        })
    }

    pub fn with_timestamps(timestamps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Sample::new(values.clone())?;
        if timestamps.len() != values.len() {
            return Err(Error::TimestampLengthMismatch {
                timestamps: timestamps.len(),
                values: values.len(),
            });
        }
        if let Some(index) = timestamps.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFiniteValue {
                index,
                value: timestamps[index],
            });
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::TimestampsNotIncreasing { index: i + 1 });
        }
        Ok(Self {
            timestamps: Some(timestamps),
            values,
            sample_rate: None,
        })
    }

    pub fn with_sample_rate(mut self, hz: f64) -> Result<Self> {
        if !(hz.is_finite() && hz > 0.0) {
            return Err(Error::InvalidWindowPlan(format!(
                "sample rate must be positive, got {hz}"
            )));
        }
        self.sample_rate = Some(hz);
        Ok(self)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[f64]> {
        self.timestamps.as_deref()
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_sample(&self) -> Sample {
        Sample::new(self.values.clone()).expect("validated at construction")
    }

    /// Time of sample `index`: the timestamp if present, else `index / rate`.
    pub fn time_of(&self, index: usize) -> Option<f64> {
        match (&self.timestamps, self.sample_rate) {
            (Some(t), _) => t.get(index).copied(),
            (None, Some(rate)) => Some(index as f64 / rate),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    /// Keep a shorter trailing window covering samples no full window reaches.
    None,
    /// Only full windows.
    #[default]
    DropPartial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowPlan {
    width: usize,
    hop: usize,
    pad: Padding,
}

impl WindowPlan {
    pub fn new(width: usize, hop: usize, pad: Padding) -> Result<Self> {
        if width < 2 {
            return Err(Error::InvalidWindowPlan(format!("width must be >= 2, got {width}")));
        }
        if hop < 1 {
            return Err(Error::InvalidWindowPlan("hop must be >= 1".into()));
        }
        Ok(Self { width, hop, pad })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn pad(&self) -> Padding {
        self.pad
    }

    /// Half-open index ranges of the windows over a series of length `n`.
    pub fn ranges(&self, n: usize) -> Result<Vec<std::ops::Range<usize>>> {
        if n < self.width {
            return match self.pad {
                Padding::DropPartial => Err(Error::SeriesTooShort {
                    len: n,
                    width: self.width,
                }),
                Padding::None => Ok(std::iter::once(0..n).collect()),
            };
        }
        let count = (n - self.width) / self.hop + 1;
        let mut ranges: Vec<_> = (0..count)
            .map(|k| k * self.hop..k * self.hop + self.width)
            .collect();
        if self.pad == Padding::None {
            let next = count * self.hop;
            let covered = ranges.last().map_or(0, |r| r.end);
            if covered < n && next < n {
                ranges.push(next..n);
            }
        }
        Ok(ranges)
    }
}

/// Contiguous windows at offsets `0, hop, 2·hop, …`.
pub fn sliding_windows(ts: &TimeSeries, plan: &WindowPlan) -> Result<Vec<Sample>> {
    plan.ranges(ts.len())?
        .into_iter()
        .map(|r| Sample::new(ts.values()[r].to_vec()))
        .collect()
}

/// Where the data-dependent constants of the pipeline come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationScope {
    /// Each window spans its own extremes.
    #[default]
    PerWindow,
    /// Fitted once on the whole series, so rows are directly comparable.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpectrogramOptions {
    pub scope: NormalizationScope,
    pub parallel: bool,
}

/// Windows × s-grid matrix of transform values, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BreveSpectrogram {
    pub window_starts: Vec<usize>,
    pub s_grid: Vec<BreveMoment>,
    values: Vec<f64>,
}

impl BreveSpectrogram {
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.s_grid.len().max(1))
    }

    pub fn row(&self, window: usize) -> &[f64] {
        let n = self.s_grid.len();
        &self.values[window * n..(window + 1) * n]
    }

    pub fn n_windows(&self) -> usize {
        self.window_starts.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn breve_spectrogram(
    ts: &TimeSeries,
    plan: &WindowPlan,
    pipeline: &NormalizationPipeline,
    grid: &[BreveMoment],
) -> Result<BreveSpectrogram> {
    breve_spectrogram_with(ts, plan, pipeline, grid, SpectrogramOptions::default())
}

/// `values[w][j] = L(normalize(window_w), grid[j])`. Rows are computed
/// independently and written to fixed slots, so parallel and serial runs are
/// bit-identical.
pub fn breve_spectrogram_with(
    ts: &TimeSeries,
    plan: &WindowPlan,
    pipeline: &NormalizationPipeline,
    grid: &[BreveMoment],
    options: SpectrogramOptions,
) -> Result<BreveSpectrogram> {
    check_sorted(grid)?;
    let ranges = plan.ranges(ts.len())?;
    let global: Option<FittedPipeline> = match options.scope {
        NormalizationScope::Global => Some(pipeline.fit(ts.values())?),
        NormalizationScope::PerWindow => None,
    };
    let row = |(w, r): (usize, &std::ops::Range<usize>)| -> Result<Vec<f64>> {
        let data = &ts.values()[r.clone()];
        let normalized = match &global {
            Some(fitted) => fitted.apply(data),
            None => pipeline.fit(data).and_then(|f| f.apply(data)),
        }
        .map_err(|e| Error::Window {
            window: w,
            source: Box::new(e),
        })?;
        Ok(grid.iter().map(|&s| lehmer(&normalized, s)).collect())
    };
    let rows: Vec<Vec<f64>> = if options.parallel {
        ranges.par_iter().enumerate().map(row).collect::<Result<_>>()?
    } else {
        ranges.iter().enumerate().map(row).collect::<Result<_>>()?
    };
    Ok(BreveSpectrogram {
        window_starts: ranges.iter().map(|r| r.start).collect(),
        s_grid: grid.to_vec(),
        values: rows.concat(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub label: &'static str,
    pub moment: BreveMoment,
    pub value: f64,
}

/// Transform at the classical landmarks: minimum, harmonic (s = 0),
/// geometric (s = 1/2, two-element samples only), arithmetic (s = 1),
/// contra-harmonic (s = 2) and maximum.
pub fn breve_features(sample: &Sample, pipeline: &NormalizationPipeline) -> Result<Vec<Feature>> {
    let h = pipeline.normalize(sample)?;
    let mut points = vec![
        ("min", BreveMoment::NegInfinity),
        ("harmonic", BreveMoment::Finite(0.0)),
    ];
    if h.len() == 2 {
        points.push(("geometric", BreveMoment::Finite(0.5)));
    }
    points.extend([
        ("arithmetic", BreveMoment::Finite(1.0)),
        ("contraharmonic", BreveMoment::Finite(2.0)),
        ("max", BreveMoment::PosInfinity),
    ]);
    Ok(points
        .into_iter()
        .map(|(label, moment)| Feature {
            label,
            moment,
            value: lehmer(&h, moment),
        })
        .collect())
}
