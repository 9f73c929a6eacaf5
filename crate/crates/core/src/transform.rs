//! Series-to-series transforms applied by splitters before measuring
//! similarity.

use serde::{Deserialize, Serialize};

use crate::data::TimeSeries;
use crate::error::{Error, Result};

/// Representation a splitter compares series in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    /// The series is not modified.
    Raw,
    /// The series is replaced by its first order derivative.
    FirstDerivative,
}

impl TransformKind {
    pub const ALL: [TransformKind; 2] = [TransformKind::Raw, TransformKind::FirstDerivative];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Raw => "raw",
            TransformKind::FirstDerivative => "first_derivative",
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            TransformKind::Raw => 0,
            TransformKind::FirstDerivative => 1,
        }
    }
}

/// First order derivative of a value sequence.
///
/// Interior points average the backward difference with half of the
/// centred difference:
///
/// ```text
/// s'[t] = ((s[t] - s[t-1]) + (s[t+1] - s[t-1]) / 2) / 2,   0 < t < L-1
/// ```
///
/// and both end points copy their neighbour. A length-2 series has no
/// interior point; both outputs are `s[1] - s[0]`.
pub fn derivative_values(values: &[f64]) -> Result<Vec<f64>> {
    let len = values.len();
    if len < 2 {
        return Err(Error::TooShort(len));
    }
    if len == 2 {
        let d = values[1] - values[0];
        return Ok(vec![d, d]);
    }
    let mut out = vec![0.0; len];
    for t in 1..len - 1 {
        out[t] = ((values[t] - values[t - 1]) + (values[t + 1] - values[t - 1]) / 2.0) / 2.0;
    }
    out[0] = out[1];
    out[len - 1] = out[len - 2];
    Ok(out)
}

/// Derivative of a whole series; the label is carried over.
pub fn first_derivative(series: &TimeSeries) -> Result<TimeSeries> {
    TimeSeries::new(derivative_values(series.values())?, series.label().map(str::to_owned))
}

/// View of `series` under `transform`. The derivative is memoized inside the
/// series, so repeated calls never recompute it.
pub fn apply(transform: TransformKind, series: &TimeSeries) -> &[f64] {
    match transform {
        TransformKind::Raw => series.values(),
        TransformKind::FirstDerivative => series.derivative(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec(), None).unwrap()
    }

    #[test]
    fn constant_series_has_zero_slope() {
        assert_eq!(derivative_values(&[5.0; 4]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn hand_evaluated_derivative() {
        // t=1: ((2-1) + (4-1)/2)/2 = 1.25 ; t=2: ((4-2) + (7-2)/2)/2 = 2.25
        assert_eq!(derivative_values(&[1.0, 2.0, 4.0, 7.0]).unwrap(), vec![1.25, 1.25, 2.25, 2.25]);
        assert_eq!(derivative_values(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap(), vec![1.0; 5]);
    }

    #[test]
    fn length_two_uses_plain_difference() {
        assert_eq!(derivative_values(&[3.0, 1.0]).unwrap(), vec![-2.0, -2.0]);
        assert!(matches!(derivative_values(&[1.0]), Err(Error::TooShort(1))));
    }

    #[test]
    fn apply_raw_and_derivative() {
        let s = ts(&[1.0, 2.0, 3.0]);
        assert_eq!(apply(TransformKind::Raw, &s), &[1.0, 2.0, 3.0]);
        assert_eq!(apply(TransformKind::FirstDerivative, &s), &[1.0, 1.0, 1.0]);
        let a = apply(TransformKind::Raw, &s);
        let b = apply(TransformKind::Raw, &s);
        assert!(std::ptr::eq(a, b));
        let d1 = apply(TransformKind::FirstDerivative, &s);
        let d2 = apply(TransformKind::FirstDerivative, &s);
        assert!(std::ptr::eq(d1, d2));
    }

    #[test]
    fn first_derivative_keeps_label() {
        let s = TimeSeries::new(vec![1.0, 2.0, 4.0], Some("x".into())).unwrap();
        let d = first_derivative(&s).unwrap();
        assert_eq!(d.label(), Some("x"));
        assert_eq!(d.len(), 3);
    }

    proptest! {
        #[test]
        fn affine_series_has_constant_derivative(a in -8i32..8, b in -50i32..50, len in 2usize..40) {
            // integer-valued inputs keep every intermediate exact
            let v: Vec<f64> = (0..len).map(|t| a as f64 * t as f64 + b as f64).collect();
            prop_assert_eq!(derivative_values(&v).unwrap(), vec![a as f64; len]);
        }

        #[test]
        fn shift_and_scale(v in prop::collection::vec(-10.0f64..10.0, 2..50), c in -5.0f64..5.0) {
            let base = derivative_values(&v).unwrap();
            let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            for (d, b) in derivative_values(&shifted).unwrap().iter().zip(&base) {
                prop_assert!((d - b).abs() <= 1e-12);
            }
            for (d, b) in derivative_values(&scaled).unwrap().iter().zip(&base) {
                prop_assert!((d - c * b).abs() <= 1e-12);
            }
        }
    }
}
