//! One-nearest-neighbour classification, leave-one-out tuning and the
//! accuracy-weighted elastic ensemble over the forest's measure set.
//!
//! Ensemble votes are weighted by each constituent's LOOCV accuracy. Every
//! constituent is tuned on the same `N` instances, so accuracies are
//! `correct / N` with a shared denominator and the vote is tallied on the
//! integer `correct` counts. This ranks classes exactly as the real-valued
//! weights would, without any dependence on summation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, TimeSeries};
use crate::distance::{dispatch_with, CostExponent, DpWorkspace, MeasureKind, MeasureParams};
use crate::error::{Error, Result};
use crate::forest::argmax_first;
use crate::splitter::{compute_omega_prime, omega_for_index, DEGENERATE_EPSILON};
use crate::transform::TransformKind;

/// Maximum number of cDTW windows in a default grid.
pub const MAX_WINDOWS: usize = 100;
/// Number of LCSS thresholds and of LCSS windows in a default grid.
pub const LCSS_STEPS: usize = 10;

/// Training index of the nearest series in `train` to `query`. Distance ties
/// go to the earlier index. Candidates are abandoned against the best
/// distance so far.
pub fn nearest_index(
    train: &Dataset,
    query: &TimeSeries,
    params: &MeasureParams,
    transform: TransformKind,
    skip: Option<usize>,
    ws: &mut DpWorkspace,
) -> Result<usize> {
    if query.len() != train.series_len() {
        return Err(Error::Size { expected: train.series_len(), found: query.len() });
    }
    let mut best = f64::INFINITY;
    let mut best_index = None;
    for (i, s) in train.series().iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        if let Some(d) = dispatch_with(params, transform, query, s, best, ws)?.value() {
            if best_index.is_none() || d < best {
                best = d;
                best_index = Some(i);
            }
        }
    }
    best_index.ok_or_else(|| Error::InsufficientData("no training series to compare against".into()))
}

/// Class index of the nearest training series.
pub fn nn_classify(train: &Dataset, query: &TimeSeries, params: &MeasureParams, transform: TransformKind) -> Result<usize> {
    let i = nearest_index(train, query, params, transform, None, &mut DpWorkspace::new())?;
    Ok(train.label_of(i))
}

/// Number of instances whose nearest other instance shares their class.
pub fn loocv_correct(train: &Dataset, params: &MeasureParams, transform: TransformKind) -> Result<usize> {
    if train.len() < 2 {
        return Err(Error::InsufficientData(format!("leave-one-out needs 2 series, got {}", train.len())));
    }
    let mut ws = DpWorkspace::new();
    let mut correct = 0;
    for (i, q) in train.series().iter().enumerate() {
        let j = nearest_index(train, q, params, transform, Some(i), &mut ws)?;
        if train.label_of(j) == train.label_of(i) {
            correct += 1;
        }
    }
    Ok(correct)
}

/// A measure family on one transform, tuned by leave-one-out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunedMeasure {
    pub family: MeasureKind,
    pub transform: TransformKind,
    pub grid: Vec<MeasureParams>,
    /// Position of the selected parameters in `grid`.
    pub selected: usize,
    /// LOOCV correct count per grid entry.
    pub scores: Vec<usize>,
    /// Training set size.
    pub n: usize,
}

impl TunedMeasure {
    pub fn params(&self) -> &MeasureParams {
        &self.grid[self.selected]
    }

    pub fn correct(&self) -> usize {
        self.scores[self.selected]
    }

    /// LOOCV training accuracy of the selected parameters.
    pub fn accuracy(&self) -> f64 {
        self.correct() as f64 / self.n as f64
    }
}

/// Exhaustive LOOCV over `grid`. The best accuracy wins, ties go to the
/// earlier entry. Grid points are scored in parallel.
pub fn loocv_tune(train: &Dataset, transform: TransformKind, grid: Vec<MeasureParams>) -> Result<TunedMeasure> {
    let family = match grid.first() {
        Some(p) => p.kind(),
        None => return Err(Error::Parameter("empty parameter grid".into())),
    };
    if let Some(p) = grid.iter().find(|p| p.kind() != family) {
        return Err(Error::Parameter(format!("grid mixes {} and {}", family.name(), p.kind().name())));
    }
    for p in &grid {
        p.validate()?;
    }
    let scores = grid
        .par_iter()
        .map(|p| loocv_correct(train, p, transform))
        .collect::<Result<Vec<usize>>>()?;
    let selected = argmax_first(&scores);
    Ok(TunedMeasure { family, transform, grid, selected, scores, n: train.len() })
}

/// `count` values spread evenly over `0..=max`, rounded, duplicates removed.
fn spread(max: usize, count: usize) -> Vec<usize> {
    if max < count {
        return (0..=max).collect();
    }
    let mut v: Vec<usize> = (0..count).map(|k| ((k * max) as f64 / (count - 1) as f64).round() as usize).collect();
    v.dedup();
    v
}

/// cDTW windows `0..=floor((L+1)/4)`, at most [`MAX_WINDOWS`] of them, for each exponent.
pub fn cdtw_grid(series_len: usize) -> Vec<MeasureParams> {
    let windows = spread((series_len + 1) / 4, MAX_WINDOWS);
    CostExponent::ALL
        .into_iter()
        .flat_map(|gamma| windows.iter().map(move |&window| MeasureParams::Cdtw { window, gamma }))
        .collect()
}

/// ADTW penalties `(i/100)^5 * omega'` for i in 1..=100, for each exponent,
/// with `omega'` estimated on the whole training set.
pub fn adtw_grid(train: &Dataset, transform: TransformKind, seed: u64) -> Result<Vec<MeasureParams>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Vec::with_capacity(300);
    for gamma in CostExponent::ALL {
        let omega_prime = compute_omega_prime(train, transform, gamma, &mut rng)?;
        grid.extend((1..=100).map(|i| MeasureParams::Adtw { omega: omega_for_index(i, omega_prime), gamma }));
    }
    Ok(grid)
}

/// Ten thresholds evenly spaced in `[sigma/5, sigma]` by ten windows.
pub fn lcss_grid(train: &Dataset, transform: TransformKind) -> Vec<MeasureParams> {
    let sigma = train.sigma(transform);
    let mut eps: Vec<f64> = if sigma > 0.0 {
        (0..LCSS_STEPS)
            .map(|k| sigma / 5.0 + (sigma - sigma / 5.0) * k as f64 / (LCSS_STEPS - 1) as f64)
            .collect()
    } else {
        vec![DEGENERATE_EPSILON]
    };
    eps.dedup();
    let windows = spread((train.series_len() + 1) / 4, LCSS_STEPS);
    eps.iter()
        .flat_map(|&epsilon| windows.iter().map(move |&window| MeasureParams::Lcss { epsilon, window }))
        .collect()
}

pub fn default_grid(train: &Dataset, family: MeasureKind, transform: TransformKind, seed: u64) -> Result<Vec<MeasureParams>> {
    match family {
        MeasureKind::Adtw => adtw_grid(train, transform, seed),
        MeasureKind::Cdtw => Ok(cdtw_grid(train.series_len())),
        MeasureKind::Lcss => Ok(lcss_grid(train, transform)),
    }
}

/// The six ensemble constituents with their default grids, measure-major.
pub fn default_constituents(train: &Dataset, seed: u64) -> Result<Vec<(TransformKind, Vec<MeasureParams>)>> {
    let mut out = Vec::with_capacity(6);
    for family in MeasureKind::ALL {
        for transform in TransformKind::ALL {
            out.push((transform, default_grid(train, family, transform, seed)?));
        }
    }
    Ok(out)
}

/// Accuracy-weighted vote of tuned 1NN classifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EePf2 {
    pub constituents: Vec<TunedMeasure>,
}

/// Tune every constituent on `train`.
pub fn ee_pf2_train(train: &Dataset, constituents: Vec<(TransformKind, Vec<MeasureParams>)>) -> Result<EePf2> {
    if train.len() < 2 {
        return Err(Error::InsufficientData(format!("leave-one-out needs 2 series, got {}", train.len())));
    }
    let constituents = constituents
        .into_iter()
        .map(|(transform, grid)| loocv_tune(train, transform, grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(EePf2 { constituents })
}

impl EePf2 {
    /// Summed LOOCV correct counts of the constituents voting for each class.
    pub fn votes(&self, train: &Dataset, query: &TimeSeries) -> Result<Vec<usize>> {
        let mut ws = DpWorkspace::new();
        let mut votes = vec![0; train.n_classes()];
        for c in &self.constituents {
            if c.n != train.len() {
                return Err(Error::Consistency(format!("constituent tuned on {} series, train has {}", c.n, train.len())));
            }
            let i = nearest_index(train, query, c.params(), c.transform, None, &mut ws)?;
            votes[train.label_of(i)] += c.correct();
        }
        Ok(votes)
    }

    /// Class with the largest weighted vote; ties go to class order.
    pub fn predict_index(&self, train: &Dataset, query: &TimeSeries) -> Result<usize> {
        Ok(argmax_first(&self.votes(train, query)?))
    }

    pub fn predict_batch(&self, train: &Dataset, queries: &[TimeSeries]) -> Result<Vec<usize>> {
        queries.par_iter().map(|q| self.predict_index(train, q)).collect()
    }

    /// LOOCV accuracy of every constituent, in order.
    pub fn weights(&self) -> Vec<f64> {
        self.constituents.iter().map(TunedMeasure::accuracy).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::dispatch;
    use crate::synthetic;
    use proptest::prelude::*;

    fn ds(rows: &[(&[f64], &str)]) -> Dataset {
        Dataset::new(rows.iter().map(|(v, l)| TimeSeries::new(v.to_vec(), Some(l.to_string())).unwrap()).collect()).unwrap()
    }

    fn plain_nn(train: &Dataset, query: &TimeSeries, p: &MeasureParams, t: TransformKind, skip: Option<usize>) -> usize {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, s) in train.series().iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let d = dispatch(p, t, query, s, None).unwrap().unwrap();
            if best.1 == usize::MAX || d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    #[test]
    fn exact_match_and_singleton() {
        let d = ds(&[(&[0.0, 1.0, 2.0], "a"), (&[5.0, 5.0, 5.0], "b")]);
        let p = MeasureParams::Cdtw { window: 1, gamma: CostExponent::Two };
        assert_eq!(nn_classify(&d, d.get(1), &p, TransformKind::Raw).unwrap(), 1);
        let one = ds(&[(&[1.0, 1.0], "only")]);
        let q = TimeSeries::unlabelled(vec![-7.0, 3.0]).unwrap();
        assert_eq!(nn_classify(&one, &q, &p, TransformKind::Raw).unwrap(), 0);
        let short = TimeSeries::unlabelled(vec![1.0, 2.0]).unwrap();
        assert!(matches!(nn_classify(&d, &short, &p, TransformKind::Raw), Err(Error::Size { .. })));
    }

    #[test]
    fn distance_ties_take_the_earlier_index() {
        let d = ds(&[(&[1.0, 0.0], "a"), (&[-1.0, 0.0], "b")]);
        let q = TimeSeries::unlabelled(vec![0.0, 0.0]).unwrap();
        for p in [
            MeasureParams::Cdtw { window: 0, gamma: CostExponent::One },
            MeasureParams::Adtw { omega: 0.1, gamma: CostExponent::Half },
            MeasureParams::Lcss { epsilon: 0.5, window: 0 },
        ] {
            assert_eq!(nn_classify(&d, &q, &p, TransformKind::Raw).unwrap(), 0);
        }
    }

    #[test]
    fn full_window_cdtw_solves_the_shift_problem() {
        let (train, test) = synthetic::shift_split(100, 100, 100, 2024);
        let p = MeasureParams::Cdtw { window: 99, gamma: CostExponent::Two };
        let correct = test
            .series()
            .iter()
            .enumerate()
            .filter(|(i, q)| nn_classify(&train, q, &p, TransformKind::Raw).unwrap() == test.label_of(*i))
            .count();
        assert!(correct as f64 / test.len() as f64 >= 0.95, "{correct}/200");
    }

    #[test]
    fn tuner_rules() {
        let (train, _) = synthetic::shift_split(8, 1, 24, 9);
        let p = MeasureParams::Cdtw { window: 3, gamma: CostExponent::One };
        let t = loocv_tune(&train, TransformKind::Raw, vec![p]).unwrap();
        assert_eq!(t.selected, 0);
        assert_eq!(t.correct(), loocv_correct(&train, &p, TransformKind::Raw).unwrap());

        let dup = loocv_tune(&train, TransformKind::Raw, vec![p, p, p]).unwrap();
        assert_eq!(dup.selected, 0);

        assert!(matches!(loocv_tune(&train, TransformKind::Raw, vec![]), Err(Error::Parameter(_))));
        let mixed = vec![p, MeasureParams::Lcss { epsilon: 0.1, window: 1 }];
        assert!(matches!(loocv_tune(&train, TransformKind::Raw, mixed), Err(Error::Parameter(_))));
    }

    #[test]
    fn tuner_prefers_a_narrow_window_when_warping_confuses() {
        // class a: spike at 2, class b: spike at 5; with enough warping they coincide
        let mut rows: Vec<(Vec<f64>, &str)> = Vec::new();
        for k in 0..6 {
            let h = 1.0 + 0.05 * k as f64;
            let mut a = vec![0.0; 8];
            a[2] = h;
            let mut b = vec![0.0; 8];
            b[5] = h;
            rows.push((a, "a"));
            rows.push((b, "b"));
        }
        let d = Dataset::new(rows.into_iter().map(|(v, l)| TimeSeries::new(v, Some(l.into())).unwrap()).collect()).unwrap();
        let grid = (0..8).map(|window| MeasureParams::Cdtw { window, gamma: CostExponent::Two }).collect();
        let t = loocv_tune(&d, TransformKind::Raw, grid).unwrap();
        assert_eq!(t.correct(), 12);
        assert!(matches!(t.params(), MeasureParams::Cdtw { window, .. } if *window < 3));
        assert!(t.scores[7] < 12);
    }

    #[test]
    fn default_grids() {
        let (train, _) = synthetic::shift_split(5, 1, 100, 1);
        let c = cdtw_grid(100);
        assert_eq!(c.len(), 3 * 26);
        assert_eq!(c[0], MeasureParams::Cdtw { window: 0, gamma: CostExponent::Half });
        assert_eq!(c[25], MeasureParams::Cdtw { window: 25, gamma: CostExponent::Half });
        assert_eq!(cdtw_grid(1000).len(), 3 * 100);
        assert_eq!(spread(250, 100).last(), Some(&250));

        let a = adtw_grid(&train, TransformKind::Raw, 0).unwrap();
        assert_eq!(a.len(), 300);
        let l = lcss_grid(&train, TransformKind::FirstDerivative);
        assert_eq!(l.len(), 100);
        let sigma = train.sigma(TransformKind::FirstDerivative);
        match (l[0], l[99]) {
            (MeasureParams::Lcss { epsilon: lo, window: 0 }, MeasureParams::Lcss { epsilon: hi, window: 25 }) => {
                assert!((lo - sigma / 5.0).abs() < 1e-15 && (hi - sigma).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let six = default_constituents(&train, 0).unwrap();
        assert_eq!(six.len(), 6);
    }

    #[test]
    fn weighted_vote_compares_sums() {
        // weights 9/10 for class a against 4/10 + 4/10 for class b
        let d = ds(&[(&[0.0, 0.0], "a"), (&[1.0, 1.0], "b")]);
        let mk = |correct: usize, window: usize, transform| TunedMeasure {
            family: MeasureKind::Cdtw,
            transform,
            grid: vec![MeasureParams::Cdtw { window, gamma: CostExponent::One }],
            selected: 0,
            scores: vec![correct],
            n: 2,
        };
        let q = TimeSeries::unlabelled(vec![0.1, 0.1]).unwrap();
        let e = EePf2 { constituents: vec![mk(2, 0, TransformKind::Raw), mk(0, 1, TransformKind::Raw)] };
        assert_eq!(e.votes(&d, &q).unwrap(), vec![2, 0]);
        // a zero-weight constituent changes nothing
        let alone = EePf2 { constituents: vec![mk(2, 0, TransformKind::Raw)] };
        assert_eq!(alone.predict_index(&d, &q).unwrap(), e.predict_index(&d, &q).unwrap());
        // equal sums fall back to class order
        let q_b = TimeSeries::unlabelled(vec![0.9, 1.0]).unwrap();
        let tie = EePf2 { constituents: vec![mk(1, 0, TransformKind::Raw), mk(1, 0, TransformKind::FirstDerivative)] };
        // raw votes b, derivative (all zeros) votes the earlier index a
        assert_eq!(tie.votes(&d, &q_b).unwrap(), vec![1, 1]);
        assert_eq!(tie.predict_index(&d, &q_b).unwrap(), 0);
    }

    #[test]
    fn ensemble_tracks_its_best_constituent() {
        let (train, test) = synthetic::shift_split(12, 20, 40, 31);
        let ens = ee_pf2_train(&train, default_constituents(&train, 5).unwrap()).unwrap();
        assert_eq!(ens.constituents.len(), 6);
        assert!(ens.weights().iter().all(|w| (0.0..=1.0).contains(w)));
        let acc = |pred: Vec<usize>| {
            pred.iter().enumerate().filter(|(i, &p)| p == test.label_of(*i)).count() as f64 / test.len() as f64
        };
        let ensemble = acc(ens.predict_batch(&train, test.series()).unwrap());
        let best_single = ens
            .constituents
            .iter()
            .map(|c| acc(test.series().iter().map(|q| nn_classify(&train, q, c.params(), c.transform).unwrap()).collect()))
            .fold(0.0, f64::max);
        assert!(ensemble >= best_single - 0.05, "{ensemble} vs {best_single}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pruned_nn_equals_plain_nn(
            rows in prop::collection::vec((prop::collection::vec(-2.0..2.0f64, 6), 0..3usize), 2..9),
            q in prop::collection::vec(-2.0..2.0f64, 6),
            kind in 0..3usize, w in 0..6usize, omega in 0.0..1.0f64, eps in 0.05..1.0f64,
            deriv: bool,
        ) {
            let d = Dataset::new(rows.into_iter().map(|(v, c)| TimeSeries::new(v, Some(c.to_string())).unwrap()).collect()).unwrap();
            let p = match kind {
                0 => MeasureParams::Adtw { omega, gamma: CostExponent::ALL[w % 3] },
                1 => MeasureParams::Cdtw { window: w, gamma: CostExponent::ALL[w % 3] },
                _ => MeasureParams::Lcss { epsilon: eps, window: w },
            };
            let t = if deriv { TransformKind::FirstDerivative } else { TransformKind::Raw };
            let q = TimeSeries::unlabelled(q).unwrap();
            let mut ws = DpWorkspace::new();
            prop_assert_eq!(nearest_index(&d, &q, &p, t, None, &mut ws).unwrap(), plain_nn(&d, &q, &p, t, None));
            for skip in 0..d.len() {
                prop_assert_eq!(
                    nearest_index(&d, d.get(skip), &p, t, Some(skip), &mut ws).unwrap(),
                    plain_nn(&d, d.get(skip), &p, t, Some(skip))
                );
            }
        }
    }
}
