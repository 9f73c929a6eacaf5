//! Naive reference implementations used to check the optimised kernels.
//! Full cost matrices, no pruning, no rolling buffers, no dependence on the
//! crate under test.
#![allow(dead_code)]

/// `|a - b|^gamma`.
pub fn pointwise(a: f64, b: f64, gamma: f64) -> f64 {
    let d = (a - b).abs();
    if gamma == 0.5 {
        d.sqrt()
    } else if gamma == 1.0 {
        d
    } else if gamma == 2.0 {
        d * d
    } else {
        d.powf(gamma)
    }
}

/// Full (L+1)x(L+1) amerced, banded DTW matrix. Cells outside the band and
/// the borders are +inf.
pub fn full_matrix(s: &[f64], t: &[f64], window: usize, omega: f64, gamma: f64) -> Vec<Vec<f64>> {
    let n = s.len();
    let m = t.len();
    let mut mat = vec![vec![f64::INFINITY; m + 1]; n + 1];
    mat[0][0] = 0.0;
    for i in 1..=n {
        for j in 1..=m {
            if i.abs_diff(j) > window {
                continue;
            }
            let diag = mat[i - 1][j - 1];
            let top = mat[i - 1][j] + omega;
            let left = mat[i][j - 1] + omega;
            mat[i][j] = pointwise(s[i - 1], t[j - 1], gamma) + diag.min(top).min(left);
        }
    }
    mat
}

pub fn naive_cdtw(s: &[f64], t: &[f64], window: usize, gamma: f64) -> f64 {
    full_matrix(s, t, window, 0.0, gamma)[s.len()][t.len()]
}

pub fn naive_dtw(s: &[f64], t: &[f64], gamma: f64) -> f64 {
    naive_cdtw(s, t, usize::MAX, gamma)
}

pub fn naive_adtw(s: &[f64], t: &[f64], omega: f64, gamma: f64) -> f64 {
    full_matrix(s, t, usize::MAX, omega, gamma)[s.len()][t.len()]
}

pub fn naive_direct(s: &[f64], t: &[f64], gamma: f64) -> f64 {
    s.iter().zip(t).map(|(&a, &b)| pointwise(a, b, gamma)).sum()
}

/// ADTW value plus one optimal warping path (0-based cell coordinates,
/// from (0,0) to (L-1,L-1)), recovered by backtracking the full matrix.
pub fn adtw_path(s: &[f64], t: &[f64], omega: f64, gamma: f64) -> (f64, Vec<(usize, usize)>) {
    let mat = full_matrix(s, t, usize::MAX, omega, gamma);
    let (mut i, mut j) = (s.len(), t.len());
    let mut path = vec![(i - 1, j - 1)];
    while (i, j) != (1, 1) {
        let here = mat[i][j] - pointwise(s[i - 1], t[j - 1], gamma);
        let candidates = [
            (i - 1, j - 1, mat[i - 1][j - 1]),
            (i - 1, j, mat[i - 1][j] + omega),
            (i, j - 1, mat[i][j - 1] + omega),
        ];
        let (pi, pj, _) = candidates
            .iter()
            .copied()
            .filter(|&(pi, pj, _)| pi >= 1 && pj >= 1)
            .min_by(|a, b| (a.2 - here).abs().total_cmp(&(b.2 - here).abs()))
            .expect("a predecessor exists");
        i = pi;
        j = pj;
        path.push((i - 1, j - 1));
    }
    path.reverse();
    (mat[s.len()][t.len()], path)
}

/// Longest common subsequence length by exhaustive search over every chain
/// of matching pairs increasing in both coordinates. Exponential: keep
/// inputs short.
pub fn exhaustive_lcss(s: &[f64], t: &[f64], epsilon: f64, window: usize) -> usize {
    fn best(s: &[f64], t: &[f64], eps: f64, w: usize, i0: usize, j0: usize) -> usize {
        let mut out = 0;
        for i in i0..s.len() {
            for j in j0..t.len() {
                if i.abs_diff(j) <= w && (s[i] - t[j]).abs() <= eps {
                    out = out.max(1 + best(s, t, eps, w, i + 1, j + 1));
                }
            }
        }
        out
    }
    best(s, t, epsilon, window, 0, 0)
}

/// Longest common subsequence length by the textbook full-table recurrence;
/// only matching pairs are restricted to the band.
pub fn naive_lcss(s: &[f64], t: &[f64], epsilon: f64, window: usize) -> usize {
    let mut mat = vec![vec![0usize; t.len() + 1]; s.len() + 1];
    for i in 1..=s.len() {
        for j in 1..=t.len() {
            mat[i][j] = if i.abs_diff(j) <= window && (s[i - 1] - t[j - 1]).abs() <= epsilon {
                mat[i - 1][j - 1] + 1
            } else {
                mat[i - 1][j].max(mat[i][j - 1])
            };
        }
    }
    mat[s.len()][t.len()]
}

/// The first-derivative transform written out term by term.
pub fn naive_derivative(s: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = ((s[i] - s[i - 1]) + (s[i + 1] - s[i - 1]) / 2.0) / 2.0;
    }
    if n > 2 {
        d[0] = d[1];
        d[n - 1] = d[n - 2];
    } else {
        d[0] = s[1] - s[0];
        d[1] = s[1] - s[0];
    }
    d
}
