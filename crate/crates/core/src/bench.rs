//! Resampled benchmark runs and the CSV report.
//!
//! A report file has the header `dataset,classifier,fold,accuracy,train_s,test_s,k,r,seed`
//! and one row per (fold, classifier). `k` and `r` are the forest's tree and
//! candidate counts and stay empty for the nearest-neighbour classifiers.
//! Accuracy is written in shortest round-trip form with at least six
//! significant digits, times in seconds with millisecond resolution.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{stratified_resample, Dataset, ResamplePlan};
use crate::distance::{CostExponent, MeasureKind, MeasureParams};
use crate::error::{Error, Result};
use crate::forest::{self, ForestConfig};
use crate::nn::{self, default_constituents, default_grid, ee_pf2_train, loocv_tune};
use crate::transform::TransformKind;

pub const REPORT_HEADER: [&str; 9] = ["dataset", "classifier", "fold", "accuracy", "train_s", "test_s", "k", "r", "seed"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub classifier: String,
    pub fold: u64,
    #[serde(serialize_with = "write_accuracy")]
    pub accuracy: Option<f64>,
    #[serde(serialize_with = "write_seconds")]
    pub train_s: Option<f64>,
    #[serde(serialize_with = "write_seconds")]
    pub test_s: Option<f64>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub seed: u64,
}

/// Round to whole milliseconds, the resolution reports keep.
pub fn millis(seconds: f64) -> f64 {
    (seconds * 1000.0).round() / 1000.0
}

/// Shortest round-trip decimal, zero-padded to six significant digits.
pub fn format_accuracy(a: f64) -> String {
    let mut s = format!("{a}");
    if !s.contains('.') {
        s.push('.');
    }
    let significant = s.trim_start_matches(['0', '.']).chars().filter(char::is_ascii_digit).count();
    let leading = if a == 0.0 { 1 } else { 0 };
    for _ in (significant + leading)..6 {
        s.push('0');
    }
    s
}

fn write_accuracy<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(a) => s.serialize_str(&format_accuracy(*a)),
        None => s.serialize_str(""),
    }
}

fn write_seconds<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(t) => s.serialize_str(&format!("{t:.3}")),
        None => s.serialize_str(""),
    }
}

/// Write `records` to `path`. With `append`, rows are added to an existing
/// report (whose header must match) and the header is only written to a new
/// or empty file.
pub fn write_report(records: &[RunReport], path: impl AsRef<Path>, append: bool) -> Result<()> {
    let path = path.as_ref();
    let existing = append && path.metadata().map(|m| m.len() > 0).unwrap_or(false);
    if existing {
        let mut rdr = csv::Reader::from_path(path)?;
        let header = rdr.headers()?;
        if header.iter().ne(REPORT_HEADER) {
            return Err(Error::Schema(format!("{} is not a report file: header {:?}", path.display(), header)));
        }
    }
    let file = if append {
        OpenOptions::new().create(true).append(true).open(path)
    } else {
        File::create(path)
    }
    .map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if !existing {
        w.write_record(REPORT_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Vec<RunReport>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    if rdr.headers()?.iter().ne(REPORT_HEADER) {
        return Err(Error::Schema(format!("{} is not a report file", path.display())));
    }
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Fixed-parameter and tuned 1NN baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NnKind {
    /// LOOCV-tuned family on the raw series.
    Tuned(MeasureKind),
    /// Unconstrained DTW with squared cost.
    Dtw,
    /// Direct alignment with squared cost.
    Da,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    Pf2,
    EePf2,
    Nn(NnKind),
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classifier::Pf2 => f.write_str("pf2"),
            Classifier::EePf2 => f.write_str("ee_pf2"),
            Classifier::Nn(NnKind::Tuned(m)) => write!(f, "nn:{}", m.name()),
            Classifier::Nn(NnKind::Dtw) => f.write_str("nn:dtw"),
            Classifier::Nn(NnKind::Da) => f.write_str("nn:da"),
        }
    }
}

impl FromStr for Classifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "pf2" => Ok(Classifier::Pf2),
            "ee_pf2" => Ok(Classifier::EePf2),
            "nn:dtw" => Ok(Classifier::Nn(NnKind::Dtw)),
            "nn:da" => Ok(Classifier::Nn(NnKind::Da)),
            _ => match s.strip_prefix("nn:") {
                Some(m) => Ok(Classifier::Nn(NnKind::Tuned(m.parse()?))),
                None => Err(Error::Parameter(format!(
                    "unknown classifier {s:?}; expected pf2, ee_pf2 or nn:<adtw|cdtw|lcss|dtw|da>"
                ))),
            },
        }
    }
}

/// Comma-separated list of classifiers or measures.
pub fn parse_list<T: FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    let items = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::Parameter("empty list".into()));
    }
    Ok(items)
}

/// Outcome of one classifier on one split.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Predicted label per test instance.
    pub predictions: Vec<String>,
    pub correct: usize,
    pub train_s: f64,
    pub test_s: f64,
}

impl Evaluation {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.predictions.len() as f64
    }
}

/// Train `classifier` on `train` and predict `test`, timing both phases.
/// Test labels the training set never saw count as errors.
pub fn evaluate(classifier: Classifier, train: &Dataset, test: &Dataset, config: &ForestConfig) -> Result<Evaluation> {
    if train.series_len() != test.series_len() {
        return Err(Error::Schema(format!(
            "train series have length {}, test series {}",
            train.series_len(),
            test.series_len()
        )));
    }
    let start = Instant::now();
    let (labels, train_s, test_s): (Vec<usize>, f64, f64) = match classifier {
        Classifier::Pf2 => {
            let f = forest::train(train, config)?;
            let train_s = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let p = f.predict_batch(test.series())?;
            (p, train_s, start.elapsed().as_secs_f64())
        }
        Classifier::EePf2 => {
            let e = ee_pf2_train(train, default_constituents(train, config.seed)?)?;
            let train_s = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let p = e.predict_batch(train, test.series())?;
            (p, train_s, start.elapsed().as_secs_f64())
        }
        Classifier::Nn(kind) => {
            let params = match kind {
                NnKind::Tuned(m) => {
                    let grid = default_grid(train, m, TransformKind::Raw, config.seed)?;
                    *loocv_tune(train, TransformKind::Raw, grid)?.params()
                }
                NnKind::Dtw => MeasureParams::Cdtw { window: train.series_len(), gamma: CostExponent::Two },
                NnKind::Da => MeasureParams::Cdtw { window: 0, gamma: CostExponent::Two },
            };
            let train_s = start.elapsed().as_secs_f64();
            let start = Instant::now();
            use rayon::prelude::*;
            let p = test
                .series()
                .par_iter()
                .map(|q| nn::nn_classify(train, q, &params, TransformKind::Raw))
                .collect::<Result<Vec<_>>>()?;
            (p, train_s, start.elapsed().as_secs_f64())
        }
    };
    let predictions: Vec<String> = labels.iter().map(|&c| train.classes()[c].clone()).collect();
    let correct = predictions
        .iter()
        .zip(test.series())
        .filter(|(p, s)| s.label() == Some(p.as_str()))
        .count();
    Ok(Evaluation { predictions, correct, train_s, test_s })
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub dataset: String,
    pub classifiers: Vec<Classifier>,
    pub resamples: u64,
    pub normalize: bool,
    pub forest: ForestConfig,
}

/// Run every classifier on folds `0..resamples`, calling `sink` with each
/// report as soon as it is ready.
pub fn run_bench(train: &Dataset, test: &Dataset, plan: &BenchPlan, mut sink: impl FnMut(&RunReport) -> Result<()>) -> Result<Vec<RunReport>> {
    if plan.resamples == 0 {
        return Err(Error::Parameter("resample count must be at least 1".into()));
    }
    if plan.classifiers.is_empty() {
        return Err(Error::Parameter("no classifiers selected".into()));
    }
    plan.forest.validate()?;
    let mut out = Vec::new();
    for fold in 0..plan.resamples {
        let (mut tr, mut te) = stratified_resample(train, test, ResamplePlan { seed: plan.forest.seed, fold })?;
        if plan.normalize {
            tr = tr.z_normalized();
            te = te.z_normalized();
        }
        for &c in &plan.classifiers {
            let ev = evaluate(c, &tr, &te, &plan.forest)?;
            let is_forest = c == Classifier::Pf2;
            let report = RunReport {
                dataset: plan.dataset.clone(),
                classifier: c.to_string(),
                fold,
                accuracy: Some(ev.accuracy()),
                train_s: Some(millis(ev.train_s)),
                test_s: Some(millis(ev.test_s)),
                k: is_forest.then_some(plan.forest.trees),
                r: is_forest.then_some(plan.forest.candidates),
                seed: plan.forest.seed,
            };
            sink(&report)?;
            out.push(report);
        }
    }
    Ok(out)
}

/// Dataset name from a file path: the stem without a `_TRAIN`/`_TEST` suffix.
pub fn dataset_name(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    for suffix in ["_TRAIN", "_TEST"] {
        if let Some(base) = stem.strip_suffix(suffix) {
            return base.to_owned();
        }
    }
    stem
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;
    use proptest::prelude::*;

    fn record(accuracy: f64) -> RunReport {
        RunReport {
            dataset: "Shift".into(),
            classifier: "pf2".into(),
            fold: 3,
            accuracy: Some(accuracy),
            train_s: Some(millis(1.23456)),
            test_s: Some(0.0),
            k: Some(100),
            r: Some(5),
            seed: 42,
        }
    }

    #[test]
    fn accuracy_format() {
        assert_eq!(format_accuracy(0.95), "0.950000");
        assert_eq!(format_accuracy(1.0), "1.00000");
        assert_eq!(format_accuracy(0.0), "0.00000");
        assert_eq!(format_accuracy(1.0 / 3.0), "0.3333333333333333");
        assert_eq!(format_accuracy(0.0125), "0.0125000");
    }

    #[test]
    fn one_record_is_two_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        write_report(&[record(0.5)], &p, false).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "dataset,classifier,fold,accuracy,train_s,test_s,k,r,seed\nShift,pf2,3,0.500000,1.235,0.000,100,5,42\n");
    }

    #[test]
    fn append_keeps_prior_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        write_report(&[record(0.25)], &p, true).unwrap();
        let mut nn = record(0.75);
        nn.classifier = "nn:da".into();
        nn.k = None;
        nn.r = None;
        write_report(&[nn.clone()], &p, true).unwrap();
        assert_eq!(read_report(&p).unwrap(), vec![record(0.25), nn]);

        let other = dir.path().join("other.csv");
        std::fs::write(&other, "a,b\n1,2\n").unwrap();
        assert!(matches!(write_report(&[record(0.1)], &other, true), Err(Error::Schema(_))));
        assert_eq!(std::fs::read_to_string(&other).unwrap(), "a,b\n1,2\n");
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let r = write_report(&[record(0.5)], "/nonexistent-dir/x/r.csv", false);
        assert!(matches!(r, Err(Error::Io { .. })));
    }

    #[test]
    fn classifier_ids() {
        for id in ["pf2", "ee_pf2", "nn:adtw", "nn:cdtw", "nn:lcss", "nn:dtw", "nn:da"] {
            assert_eq!(id.parse::<Classifier>().unwrap().to_string(), id);
        }
        assert!(matches!("knn".parse::<Classifier>(), Err(Error::Parameter(_))));
        assert!(matches!("nn:erp".parse::<Classifier>(), Err(Error::Parameter(_))));
        let both: Vec<Classifier> = parse_list("pf2,nn:cdtw").unwrap();
        assert_eq!(both.len(), 2);
    }

    #[test]
    fn names_from_paths() {
        assert_eq!(dataset_name(Path::new("/d/GunPoint_TRAIN.tsv")), "GunPoint");
        assert_eq!(dataset_name(Path::new("shift.tsv")), "shift");
    }

    #[test]
    fn bench_emits_one_row_per_fold_and_classifier() {
        let (tr, te) = synthetic::shift_split(6, 6, 24, 1);
        let plan = BenchPlan {
            dataset: "shift".into(),
            classifiers: parse_list("pf2,nn:cdtw").unwrap(),
            resamples: 2,
            normalize: false,
            forest: ForestConfig { trees: 3, seed: 9, ..Default::default() },
        };
        let mut seen = 0;
        let rows = run_bench(&tr, &te, &plan, |_| {
            seen += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!((rows.len(), seen), (4, 4));
        assert_eq!(rows.iter().map(|r| r.fold).collect::<Vec<_>>(), vec![0, 0, 1, 1]);
        assert_eq!(rows[1].k, None);
        let again = run_bench(&tr, &te, &plan, |_| Ok(())).unwrap();
        let acc = |v: &[RunReport]| v.iter().map(|r| r.accuracy).collect::<Vec<_>>();
        assert_eq!(acc(&rows), acc(&again));

        // fold 0 is the supplied split
        let f = forest::train(&tr, &plan.forest).unwrap();
        assert_eq!(rows[0].accuracy, Some(f.accuracy(&te).unwrap()));
    }

    proptest! {
        #[test]
        fn reports_round_trip(correct in 0usize..500, extra in 1usize..500, ms in 0u32..100_000, seed: u64) {
            let mut r = record(correct as f64 / (correct + extra) as f64);
            r.train_s = Some(millis(f64::from(ms) / 1000.0 + 0.0004));
            r.seed = seed;
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("r.csv");
            write_report(&[r.clone()], &p, false).unwrap();
            prop_assert_eq!(read_report(&p).unwrap(), vec![r]);
        }
    }
}
