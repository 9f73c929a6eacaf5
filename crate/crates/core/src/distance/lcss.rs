use super::{check_lengths, DpWorkspace};
use crate::error::{Error, Result};

/// LCSS distance `1 - |LCSS| / L`, where two points match when they differ
/// by at most `epsilon` and their indices by at most `window`.
pub fn lcss(s: &[f64], t: &[f64], epsilon: f64, window: usize) -> Result<f64> {
    lcss_with(s, t, epsilon, window, &mut DpWorkspace::new())
}

pub(crate) fn lcss_with(s: &[f64], t: &[f64], epsilon: f64, window: usize, ws: &mut DpWorkspace) -> Result<f64> {
    let len = lcss_length_with(s, t, epsilon, window, ws)?;
    Ok(1.0 - len as f64 / s.len() as f64)
}

/// Length of the banded longest common subsequence.
pub fn lcss_length(s: &[f64], t: &[f64], epsilon: f64, window: usize) -> Result<usize> {
    lcss_length_with(s, t, epsilon, window, &mut DpWorkspace::new())
}

fn lcss_length_with(s: &[f64], t: &[f64], epsilon: f64, window: usize, ws: &mut DpWorkspace) -> Result<usize> {
    check_lengths(s, t)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Parameter(format!("lcss epsilon must be finite and > 0, got {epsilon}")));
    }
    let n = s.len();
    let w = window.min(n - 1);
    // 1-based columns; column 0 reads as 0
    ws.prev_len.clear();
    ws.prev_len.resize(n + 1, 0);
    ws.curr_len.clear();
    ws.curr_len.resize(n + 1, 0);
    let (mut prev, mut curr) = (std::mem::take(&mut ws.prev_len), std::mem::take(&mut ws.curr_len));
    let in_band = |i: usize, j: usize| i.abs_diff(j) <= w;

    for i in 1..=n {
        let si = s[i - 1];
        let lo = i.saturating_sub(w).max(1);
        let hi = (i + w).min(n);
        let mut left = 0u32;
        for j in lo..=hi {
            let diag = if j > 1 && i > 1 { prev[j - 1] } else { 0 };
            let v = if (si - t[j - 1]).abs() <= epsilon {
                diag + 1
            } else {
                // an out-of-band neighbour holds the same value as the diagonal
                let top = if i > 1 && in_band(i - 1, j) { prev[j] } else { 0 };
                top.max(left).max(diag)
            };
            curr[j] = v;
            left = v;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    let len = prev[n] as usize;
    ws.prev_len = prev;
    ws.curr_len = curr;
    Ok(len)
}
