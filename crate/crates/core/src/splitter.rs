//! Random candidate splitters and their Gini evaluation.
//!
//! A splitter is a parameterised measure, a transform and one exemplar per
//! class present at the node. Every series goes to the branch of its nearest
//! exemplar.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, TimeSeries};
use crate::distance::{self, CostExponent, DistanceOutcome, DpWorkspace, MeasureKind, MeasureParams};
use crate::error::{Error, Result};
use crate::transform::{self, TransformKind};

/// Number of series pairs averaged to estimate the maximum ADTW penalty.
pub const OMEGA_PAIRS: usize = 4000;

/// Stand-in LCSS threshold when the training data has zero spread.
pub const DEGENERATE_EPSILON: f64 = f64::MIN_POSITIVE;

/// A class representative at a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Exemplar {
    /// Dense class index.
    pub class: usize,
    /// Position of the exemplar in the training set the tree was built from.
    pub train_index: usize,
    pub series: TimeSeries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Splitter {
    pub measure: MeasureParams,
    pub transform: TransformKind,
    /// One per class present at the node, in class order.
    pub exemplars: Vec<Exemplar>,
}

impl Splitter {
    /// Branch of the nearest exemplar. The best distance so far is the cutoff
    /// for the next exemplar; ties keep the earlier branch.
    pub fn nearest(&self, query: &TimeSeries, ws: &mut DpWorkspace) -> Result<usize> {
        let q = transform::apply(self.transform, query);
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (b, e) in self.exemplars.iter().enumerate() {
            let ex = transform::apply(self.transform, &e.series);
            if let DistanceOutcome::Value(d) = self.measure.distance(q, ex, best_dist, ws)? {
                if d < best_dist {
                    best = b;
                    best_dist = d;
                }
            }
        }
        Ok(best)
    }

    /// Like [`Splitter::nearest`] but computes every distance in full.
    pub fn nearest_exhaustive(&self, query: &TimeSeries) -> Result<usize> {
        let mut ws = DpWorkspace::new();
        let q = transform::apply(self.transform, query);
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (b, e) in self.exemplars.iter().enumerate() {
            let ex = transform::apply(self.transform, &e.series);
            let d = self.measure.distance(q, ex, f64::INFINITY, &mut ws)?.unwrap();
            if d < best_dist {
                best = b;
                best_dist = d;
            }
        }
        Ok(best)
    }

    /// Split `node` (indices into `data`) into one subset per exemplar.
    pub fn partition(&self, data: &Dataset, node: &[usize]) -> Result<Vec<Vec<usize>>> {
        let mut ws = DpWorkspace::new();
        let mut branches = vec![Vec::new(); self.exemplars.len()];
        for &i in node {
            branches[self.nearest(data.get(i), &mut ws)?].push(i);
        }
        Ok(branches)
    }
}

/// Per-tree state shared by every node: penalty scales, data spread, the
/// measure families in play and the tree's random stream.
#[derive(Debug, Clone)]
pub struct TreeContext {
    /// Maximum ADTW penalty per (transform, cost exponent).
    pub omega_prime: [[f64; 3]; 2],
    pub sigma: [f64; 2],
    pub series_len: usize,
    pub measures: Vec<MeasureKind>,
    pub rng: ChaCha8Rng,
}

impl TreeContext {
    /// Computes the six maximum penalties from the full training set,
    /// consuming `rng` for pair sampling first (raw before derivative, then
    /// increasing exponent).
    pub fn new(data: &Dataset, measures: &[MeasureKind], mut rng: ChaCha8Rng) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::Parameter("empty measure set".into()));
        }
        let mut omega_prime = [[0.0; 3]; 2];
        if measures.contains(&MeasureKind::Adtw) {
            for t in TransformKind::ALL {
                for g in CostExponent::ALL {
                    omega_prime[t.index()][g.index()] = compute_omega_prime(data, t, g, &mut rng)?;
                }
            }
        }
        Ok(TreeContext {
            omega_prime,
            sigma: [data.sigma(TransformKind::Raw), data.sigma(TransformKind::FirstDerivative)],
            series_len: data.series_len(),
            measures: measures.to_vec(),
            rng,
        })
    }

    pub fn omega_prime(&self, t: TransformKind, g: CostExponent) -> f64 {
        self.omega_prime[t.index()][g.index()]
    }
}

/// Pair number `k` among the `n(n-1)/2` unordered pairs `(a, b)`, `a < b`,
/// in row-major order.
fn pair_at(mut k: usize, n: usize) -> (usize, usize) {
    let mut a = 0;
    while k >= n - 1 - a {
        k -= n - 1 - a;
        a += 1;
    }
    (a, a + 1 + k)
}

/// Mean direct alignment over distinct unordered pairs, under `transform` and
/// exponent `gamma`. Up to [`OMEGA_PAIRS`] pairs are drawn without
/// replacement; smaller datasets use every pair and leave `rng` untouched.
pub fn compute_omega_prime(data: &Dataset, transform: TransformKind, gamma: CostExponent, rng: &mut impl Rng) -> Result<f64> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 series, got {n}")));
    }
    let total = n * (n - 1) / 2;
    let da = |(a, b): (usize, usize)| {
        distance::diagonal_sum(transform::apply(transform, data.get(a)), transform::apply(transform, data.get(b)), gamma)
    };
    let sum: f64 = if total <= OMEGA_PAIRS {
        (0..total).map(|k| da(pair_at(k, n))).sum()
    } else {
        let mut picks = index::sample(rng, total, OMEGA_PAIRS).into_vec();
        picks.sort_unstable();
        picks.into_iter().map(|k| da(pair_at(k, n))).sum()
    };
    Ok(sum / total.min(OMEGA_PAIRS) as f64)
}

/// Draw the penalty ratio index `i` uniformly from 1..=100.
pub fn sample_ratio_index(rng: &mut impl Rng) -> u32 {
    rng.random_range(1..=100)
}

/// `(i / 100)^5 * omega_prime`, with the power taken exactly in integers.
pub fn omega_for_index(i: u32, omega_prime: f64) -> f64 {
    (u64::from(i).pow(5) as f64 / 1e10) * omega_prime
}

pub fn sample_adtw_omega(omega_prime: f64, rng: &mut impl Rng) -> f64 {
    omega_for_index(sample_ratio_index(rng), omega_prime)
}

/// Warping window drawn uniformly from `0..=floor((len + 1) / 4)`.
pub fn sample_cdtw_window(len: usize, rng: &mut impl Rng) -> usize {
    rng.random_range(0..=(len + 1) / 4)
}

/// LCSS threshold uniform in `[sigma/5, sigma]` and a window drawn like the
/// cDTW one.
pub fn sample_lcss_params(sigma: f64, len: usize, rng: &mut impl Rng) -> (f64, usize) {
    let epsilon = if sigma > 0.0 {
        rng.random_range(sigma / 5.0..=sigma)
    } else {
        DEGENERATE_EPSILON
    };
    (epsilon, sample_cdtw_window(len, rng))
}

/// Node instances grouped by class, in class order; absent classes omitted.
pub fn group_by_class(data: &Dataset, node: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); data.n_classes()];
    for &i in node {
        groups[data.label_of(i)].push(i);
    }
    groups.into_iter().enumerate().filter(|(_, g)| !g.is_empty()).collect()
}

/// Random measure and transform, then cost exponent, then parameters, then
/// one exemplar per class, in that order from the tree's stream.
pub fn gen_candidate_splitter(data: &Dataset, node: &[usize], ctx: &mut TreeContext) -> Splitter {
    let rng = &mut ctx.rng;
    let kind = ctx.measures[rng.random_range(0..ctx.measures.len())];
    let transform = TransformKind::ALL[rng.random_range(0..2)];
    let measure = match kind {
        MeasureKind::Adtw => {
            let gamma = CostExponent::ALL[rng.random_range(0..3)];
            let omega_prime = ctx.omega_prime[transform.index()][gamma.index()];
            MeasureParams::Adtw { omega: sample_adtw_omega(omega_prime, rng), gamma }
        }
        MeasureKind::Cdtw => {
            let gamma = CostExponent::ALL[rng.random_range(0..3)];
            MeasureParams::Cdtw { window: sample_cdtw_window(ctx.series_len, rng), gamma }
        }
        MeasureKind::Lcss => {
            let (epsilon, window) = sample_lcss_params(ctx.sigma[transform.index()], ctx.series_len, rng);
            MeasureParams::Lcss { epsilon, window }
        }
    };
    let exemplars = group_by_class(data, node)
        .into_iter()
        .map(|(class, members)| {
            let pick = members[rng.random_range(0..members.len())];
            Exemplar { class, train_index: pick, series: data.get(pick).clone() }
        })
        .collect();
    Splitter { measure, transform, exemplars }
}

/// `1 - sum_c (n_c / n)^2`.
pub fn gini_impurity(counts: &[usize]) -> Result<f64> {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(Error::Domain("gini impurity of an empty node".into()));
    }
    let n = n as f64;
    Ok(1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>())
}

/// Weighted impurity decrease of splitting `parent` into `children`.
pub fn split_gain(parent: &[usize], children: &[Vec<usize>]) -> Result<f64> {
    let mut totals = vec![0usize; parent.len()];
    for child in children {
        if child.len() != parent.len() {
            return Err(Error::Consistency("child count vector has wrong class arity".into()));
        }
        for (t, c) in totals.iter_mut().zip(child) {
            *t += c;
        }
    }
    if totals != parent {
        return Err(Error::Consistency("children do not partition the parent".into()));
    }
    let n: usize = parent.iter().sum();
    let parent_gini = gini_impurity(parent)?;
    let mut weighted = 0.0;
    for child in children {
        let m: usize = child.iter().sum();
        if m > 0 {
            weighted += m as f64 / n as f64 * gini_impurity(child)?;
        }
    }
    Ok(parent_gini - weighted)
}

/// Class counts of a set of instances.
pub fn class_counts(data: &Dataset, members: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; data.n_classes()];
    for &i in members {
        counts[data.label_of(i)] += 1;
    }
    counts
}
