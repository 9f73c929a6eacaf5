use super::{check_lengths, cost, CostExponent, DistanceOutcome, DpWorkspace};
use crate::error::{Error, Result};

/// Window-constrained DTW. `window >= L - 1` is unconstrained DTW and
/// `window == 0` is the direct alignment.
pub fn cdtw(s: &[f64], t: &[f64], window: usize, gamma: CostExponent, cutoff: Option<f64>) -> Result<DistanceOutcome> {
    cdtw_with(s, t, window, gamma, cutoff.unwrap_or(f64::INFINITY), &mut DpWorkspace::new())
}

pub fn cdtw_with(
    s: &[f64],
    t: &[f64],
    window: usize,
    gamma: CostExponent,
    cutoff: f64,
    ws: &mut DpWorkspace,
) -> Result<DistanceOutcome> {
    check_lengths(s, t)?;
    Ok(elastic(s, t, window, 0.0, gamma, cutoff, ws))
}

/// Amerced DTW: unconstrained DTW where each off-diagonal step pays `omega`.
pub fn adtw(s: &[f64], t: &[f64], omega: f64, gamma: CostExponent, cutoff: Option<f64>) -> Result<DistanceOutcome> {
    adtw_with(s, t, omega, gamma, cutoff.unwrap_or(f64::INFINITY), &mut DpWorkspace::new())
}

pub fn adtw_with(
    s: &[f64],
    t: &[f64],
    omega: f64,
    gamma: CostExponent,
    cutoff: f64,
    ws: &mut DpWorkspace,
) -> Result<DistanceOutcome> {
    check_lengths(s, t)?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::Parameter(format!("adtw penalty must be finite and >= 0, got {omega}")));
    }
    Ok(elastic(s, t, s.len() - 1, omega, gamma, cutoff, ws))
}

fn elastic(
    s: &[f64],
    t: &[f64],
    window: usize,
    omega: f64,
    gamma: CostExponent,
    cutoff: f64,
    ws: &mut DpWorkspace,
) -> DistanceOutcome {
    match gamma {
        CostExponent::Half => eap(s, t, window, omega, cutoff, ws, |a, b| cost(a, b, CostExponent::Half)),
        CostExponent::One => eap(s, t, window, omega, cutoff, ws, |a, b| cost(a, b, CostExponent::One)),
        CostExponent::Two => eap(s, t, window, omega, cutoff, ws, |a, b| cost(a, b, CostExponent::Two)),
    }
}

/// Early-abandoning, pruning banded DP over two rolling rows.
///
/// Cells whose cost exceeds the upper bound are dead: costs never decrease
/// along a path, so nothing reachable from a dead cell can finish under the
/// bound. Each row therefore starts at the previous row's first live column
/// and stops once it is past the previous row's last live column and has
/// hit a dead cell. A row without live cells abandons the computation.
///
/// The upper bound is the cutoff, tightened to the diagonal path cost, which
/// is always an admissible alignment. Live cells are computed with the same
/// operation order as the full recurrence and are bit-identical to it.
#[inline(always)]
#[allow(clippy::needless_range_loop)]
fn eap<F>(s: &[f64], t: &[f64], window: usize, omega: f64, cutoff: f64, ws: &mut DpWorkspace, cost_fn: F) -> DistanceOutcome
where
    F: Fn(f64, f64) -> f64,
{
    let n = s.len();
    let w = window.min(n - 1);
    if cutoff.is_nan() || cutoff < 0.0 {
        return DistanceOutcome::Abandoned;
    }
    let ub = cutoff.min(diagonal_sum_fn(s, t, &cost_fn));

    ws.prev.clear();
    ws.prev.resize(n, f64::INFINITY);
    ws.curr.clear();
    ws.curr.resize(n, f64::INFINITY);
    let (mut prev, mut curr) = (std::mem::take(&mut ws.prev), std::mem::take(&mut ws.curr));

    // first row: only leftward moves
    let mut first_live = 0usize;
    let mut last_live;
    {
        let si = s[0];
        let mut v = cost_fn(si, t[0]);
        if v > ub {
            ws.prev = prev;
            ws.curr = curr;
            return DistanceOutcome::Abandoned;
        }
        prev[0] = v;
        last_live = 0;
        for j in 1..=w {
            v = cost_fn(si, t[j]) + (v + omega);
            if v > ub {
                break;
            }
            prev[j] = v;
            last_live = j;
        }
    }

    for i in 1..n {
        let si = s[i];
        let lo = i.saturating_sub(w).max(first_live);
        let hi = (i + w).min(n - 1);
        let (prev_first, prev_last) = (first_live, last_live);
        let mut row_first = usize::MAX;
        let mut row_last = 0usize;
        let mut left = f64::INFINITY;
        let mut j = lo;
        while j <= hi {
            let diag_pred = if j > prev_first && j - 1 <= prev_last {
                prev[j - 1]
            } else {
                f64::INFINITY
            };
            let top_pred = if j <= prev_last { prev[j] + omega } else { f64::INFINITY };
            let v = cost_fn(si, t[j]) + diag_pred.min(top_pred).min(left + omega);
            curr[j] = v;
            if v <= ub {
                if row_first == usize::MAX {
                    row_first = j;
                }
                row_last = j;
            } else if j > prev_last {
                break;
            }
            left = v;
            j += 1;
        }
        if row_first == usize::MAX {
            ws.prev = prev;
            ws.curr = curr;
            return DistanceOutcome::Abandoned;
        }
        first_live = row_first;
        last_live = row_last;
        std::mem::swap(&mut prev, &mut curr);
    }

    let outcome = if last_live == n - 1 {
        DistanceOutcome::bounded(prev[n - 1], cutoff)
    } else {
        DistanceOutcome::Abandoned
    };
    ws.prev = prev;
    ws.curr = curr;
    outcome
}

#[inline(always)]
fn diagonal_sum_fn<F: Fn(f64, f64) -> f64>(s: &[f64], t: &[f64], cost_fn: &F) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in s.iter().zip(t) {
        acc += cost_fn(a, b);
    }
    acc
}
