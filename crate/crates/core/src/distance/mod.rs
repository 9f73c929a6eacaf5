//! Elastic distance kernels: amerced DTW, window-constrained DTW and LCSS.
//!
//! The two DTW variants accept a cutoff. Any computation that provably
//! exceeds it is abandoned, and cells of the cost matrix that exceed it are
//! pruned from the live band. A returned [`DistanceOutcome::Value`] is always
//! exact.

mod dtw;
mod lcss;

use serde::{Deserialize, Serialize};

pub use dtw::{adtw, adtw_with, cdtw, cdtw_with};
pub use lcss::{lcss, lcss_length};

use crate::data::TimeSeries;
use crate::error::{Error, Result};
use crate::transform::{self, TransformKind};

/// Exponent of the pointwise cost `|a - b|^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub enum CostExponent {
    Half,
    One,
    Two,
}

impl CostExponent {
    pub const ALL: [CostExponent; 3] = [CostExponent::Half, CostExponent::One, CostExponent::Two];

    pub fn value(self) -> f64 {
        match self {
            CostExponent::Half => 0.5,
            CostExponent::One => 1.0,
            CostExponent::Two => 2.0,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            CostExponent::Half => 0,
            CostExponent::One => 1,
            CostExponent::Two => 2,
        }
    }
}

impl From<CostExponent> for f64 {
    fn from(g: CostExponent) -> f64 {
        g.value()
    }
}

impl TryFrom<f64> for CostExponent {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        match v {
            0.5 => Ok(CostExponent::Half),
            1.0 => Ok(CostExponent::One),
            2.0 => Ok(CostExponent::Two),
            _ => Err(Error::Parameter(format!("cost exponent {v} not in {{0.5, 1, 2}}"))),
        }
    }
}

/// `|a - b|^gamma`, using sqrt / abs / a product instead of `powf`.
#[inline(always)]
pub fn cost(a: f64, b: f64, gamma: CostExponent) -> f64 {
    let d = a - b;
    match gamma {
        CostExponent::Half => d.abs().sqrt(),
        CostExponent::One => d.abs(),
        CostExponent::Two => d * d,
    }
}

/// Sum of pointwise costs along the diagonal.
pub fn direct_alignment(s: &[f64], t: &[f64], gamma: CostExponent) -> Result<f64> {
    if s.len() != t.len() {
        return Err(Error::Size { expected: s.len(), found: t.len() });
    }
    Ok(diagonal_sum(s, t, gamma))
}

pub(crate) fn diagonal_sum(s: &[f64], t: &[f64], gamma: CostExponent) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in s.iter().zip(t) {
        acc += cost(a, b, gamma);
    }
    acc
}

/// A similarity measure together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "snake_case")]
pub enum MeasureParams {
    /// DTW with an additive penalty `omega` on every off-diagonal step.
    Adtw { omega: f64, gamma: CostExponent },
    /// DTW restricted to the band `|i - j| <= window`.
    Cdtw { window: usize, gamma: CostExponent },
    /// `1 - |LCSS| / L` with match threshold `epsilon` inside the band.
    Lcss { epsilon: f64, window: usize },
}

/// The three measure families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Adtw,
    Cdtw,
    Lcss,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [MeasureKind::Adtw, MeasureKind::Cdtw, MeasureKind::Lcss];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Adtw => "adtw",
            MeasureKind::Cdtw => "cdtw",
            MeasureKind::Lcss => "lcss",
        }
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adtw" => Ok(MeasureKind::Adtw),
            "cdtw" => Ok(MeasureKind::Cdtw),
            "lcss" => Ok(MeasureKind::Lcss),
            other => Err(Error::Parameter(format!("unknown measure {other:?}"))),
        }
    }
}

impl MeasureParams {
    pub fn kind(&self) -> MeasureKind {
        match self {
            MeasureParams::Adtw { .. } => MeasureKind::Adtw,
            MeasureParams::Cdtw { .. } => MeasureKind::Cdtw,
            MeasureParams::Lcss { .. } => MeasureKind::Lcss,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MeasureParams::Adtw { omega, .. } if !(omega >= 0.0 && omega.is_finite()) => {
                Err(Error::Parameter(format!("adtw penalty must be finite and >= 0, got {omega}")))
            }
            MeasureParams::Lcss { epsilon, .. } if !(epsilon > 0.0 && epsilon.is_finite()) => {
                Err(Error::Parameter(format!("lcss epsilon must be finite and > 0, got {epsilon}")))
            }
            _ => Ok(()),
        }
    }

    /// Distance between two raw value sequences of equal length.
    pub fn distance(&self, s: &[f64], t: &[f64], cutoff: f64, ws: &mut DpWorkspace) -> Result<DistanceOutcome> {
        match *self {
            MeasureParams::Adtw { omega, gamma } => adtw_with(s, t, omega, gamma, cutoff, ws),
            MeasureParams::Cdtw { window, gamma } => cdtw_with(s, t, window, gamma, cutoff, ws),
            MeasureParams::Lcss { epsilon, window } => {
                let d = lcss::lcss_with(s, t, epsilon, window, ws)?;
                Ok(DistanceOutcome::bounded(d, cutoff))
            }
        }
    }
}

/// Result of a cutoff-aware distance computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceOutcome {
    /// Exact distance, no greater than the cutoff.
    Value(f64),
    /// The true distance is strictly greater than the cutoff.
    Abandoned,
}

impl DistanceOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            DistanceOutcome::Value(v) => Some(v),
            DistanceOutcome::Abandoned => None,
        }
    }

    pub fn is_abandoned(self) -> bool {
        matches!(self, DistanceOutcome::Abandoned)
    }

    /// Unwraps the value, panicking on abandon. For use with an infinite cutoff.
    pub fn unwrap(self) -> f64 {
        self.value().expect("distance abandoned")
    }

    pub(crate) fn bounded(value: f64, cutoff: f64) -> Self {
        if value <= cutoff {
            DistanceOutcome::Value(value)
        } else {
            DistanceOutcome::Abandoned
        }
    }
}

/// Reusable row buffers for the banded dynamic programs. Nothing written by
/// one call is ever read by the next.
#[derive(Debug, Default, Clone)]
pub struct DpWorkspace {
    pub(crate) prev: Vec<f64>,
    pub(crate) curr: Vec<f64>,
    pub(crate) prev_len: Vec<u32>,
    pub(crate) curr_len: Vec<u32>,
}

impl DpWorkspace {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Distance between `s` and `t` after both are transformed by `transform`.
/// `None` means no cutoff.
pub fn dispatch(
    params: &MeasureParams,
    transform: TransformKind,
    s: &TimeSeries,
    t: &TimeSeries,
    cutoff: Option<f64>,
) -> Result<DistanceOutcome> {
    let mut ws = DpWorkspace::new();
    dispatch_with(params, transform, s, t, cutoff.unwrap_or(f64::INFINITY), &mut ws)
}

/// [`dispatch`] with a caller-owned workspace.
pub fn dispatch_with(
    params: &MeasureParams,
    transform: TransformKind,
    s: &TimeSeries,
    t: &TimeSeries,
    cutoff: f64,
    ws: &mut DpWorkspace,
) -> Result<DistanceOutcome> {
    params.distance(transform::apply(transform, s), transform::apply(transform, t), cutoff, ws)
}

pub(crate) fn check_lengths(s: &[f64], t: &[f64]) -> Result<()> {
    if s.len() != t.len() {
        return Err(Error::Size { expected: s.len(), found: t.len() });
    }
    if s.is_empty() {
        return Err(Error::TooShort(0));
    }
    Ok(())
}
