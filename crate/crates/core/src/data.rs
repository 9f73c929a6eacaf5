//! Series and labelled datasets, UCR-format files and stratified resampling.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::transform::{self, TransformKind};

/// An ordered sequence of finite reals, optionally labelled.
///
/// The first derivative is computed on first use and cached.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    values: Vec<f64>,
    label: Option<String>,
    derivative: OnceLock<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, label: Option<String>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort(values.len()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(TimeSeries { values, label, derivative: OnceLock::new() })
    }

    pub fn unlabelled(values: Vec<f64>) -> Result<Self> {
        Self::new(values, None)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn derivative(&self) -> &[f64] {
        self.derivative.get_or_init(|| {
            transform::derivative_values(&self.values).expect("length checked at construction")
        })
    }

    /// Z-normalised copy (zero mean, unit population variance). Constant
    /// series become all zeros.
    pub fn z_normalized(&self) -> TimeSeries {
        let n = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let var = self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let sd = var.sqrt();
        let values = if sd > 0.0 {
            self.values.iter().map(|v| (v - mean) / sd).collect()
        } else {
            vec![0.0; self.values.len()]
        };
        TimeSeries { values, label: self.label.clone(), derivative: OnceLock::new() }
    }
}

impl PartialEq for TimeSeries {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.label == other.label
    }
}

/// Labelled collection of equal-length series.
///
/// Labels are opaque strings mapped to dense indices in first-appearance
/// order; every tie-break in the crate follows that order.
#[derive(Debug, Clone)]
pub struct Dataset {
    series: Vec<TimeSeries>,
    labels: Vec<usize>,
    classes: Vec<String>,
    sigma: [f64; 2],
}

impl Dataset {
    /// Every series must carry a label and share one length.
    pub fn new(series: Vec<TimeSeries>) -> Result<Self> {
        let first = series.first().ok_or(Error::EmptyInput)?;
        let len = first.len();
        let mut classes: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels = Vec::with_capacity(series.len());
        for (i, s) in series.iter().enumerate() {
            if s.len() != len {
                return Err(Error::Size { expected: len, found: s.len() });
            }
            let label = s
                .label()
                .ok_or_else(|| Error::Consistency(format!("series {i} has no label")))?;
            let id = *index.entry(label.to_owned()).or_insert_with(|| {
                classes.push(label.to_owned());
                classes.len() - 1
            });
            labels.push(id);
        }
        let sigma = [
            population_std(series.iter().map(|s| s.values())),
            population_std(series.iter().map(|s| s.derivative())),
        ];
        Ok(Dataset { series, labels, classes, sigma })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Common length of every series.
    pub fn series_len(&self) -> usize {
        self.series[0].len()
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn get(&self, i: usize) -> &TimeSeries {
        &self.series[i]
    }

    /// Dense class index of instance `i`.
    pub fn label_of(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    /// Population standard deviation of every value under `transform`.
    pub fn sigma(&self, transform: TransformKind) -> f64 {
        self.sigma[transform.index()]
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Copy with every series z-normalised.
    pub fn z_normalized(&self) -> Dataset {
        Dataset::new(self.series.iter().map(TimeSeries::z_normalized).collect())
            .expect("normalisation preserves shape")
    }

    /// New dataset made of the given instances, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Dataset> {
        Dataset::new(indices.iter().map(|&i| self.series[i].clone()).collect())
    }
}

fn population_std<'a>(rows: impl Iterator<Item = &'a [f64]> + Clone) -> f64 {
    let (sum, n) = rows.clone().flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    let ss: f64 = rows.flatten().map(|v| (v - mean) * (v - mean)).sum();
    (ss / n as f64).sqrt()
}

fn delimiter_for(path: &Path) -> char {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => ',',
        _ => '\t',
    }
}

/// Load a UCR-archive file: one series per line, label first. Files ending in
/// `.csv` are comma separated, everything else tab separated.
pub fn load_ucr(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ucr(&text, delimiter_for(path))
}

/// Parse UCR-format text with the given field delimiter.
pub fn parse_ucr(text: &str, delimiter: char) -> Result<Dataset> {
    let mut series = Vec::new();
    let mut expected_len: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(delimiter).map(str::trim);
        let label = fields.next().unwrap_or_default().to_owned();
        let mut values = Vec::new();
        for token in fields {
            if token.is_empty() {
                continue;
            }
            let v: f64 = token
                .parse()
                .map_err(|_| Error::Parse { line: line_no, token: token.to_owned() })?;
            if !v.is_finite() {
                return Err(Error::Value { line: line_no, value: v });
            }
            values.push(v);
        }
        match expected_len {
            None => expected_len = Some(values.len()),
            Some(len) if len != values.len() => {
                return Err(Error::Format {
                    line: line_no,
                    msg: format!("row has {} values, previous rows have {len}", values.len()),
                });
            }
            _ => {}
        }
        if values.len() < 2 {
            return Err(Error::Format {
                line: line_no,
                msg: format!("row has {} values, need at least 2", values.len()),
            });
        }
        series.push(TimeSeries::new(values, Some(label))?);
    }
    if series.is_empty() {
        return Err(Error::EmptyInput);
    }
    Dataset::new(series)
}

/// Write a dataset in UCR format. Values use the shortest representation that
/// parses back to the identical `f64`.
pub fn save_ucr(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let delim = delimiter_for(path);
    let mut out = String::new();
    for s in dataset.series() {
        out.push_str(s.label().unwrap_or_default());
        for v in s.values() {
            out.push(delim);
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Identifies one stratified train/test resample of a merged pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResamplePlan {
    pub seed: u64,
    /// Fold 0 is the original split.
    pub fold: u64,
}

/// Re-partition `train ∪ test` into new splits of the original sizes,
/// stratified by class and deterministic in `(seed, fold)`.
///
/// Per-class train counts come from the largest-remainder apportionment of
/// the train size, so each class is within one instance of its pool
/// proportion.
pub fn stratified_resample(train: &Dataset, test: &Dataset, plan: ResamplePlan) -> Result<(Dataset, Dataset)> {
    if train.series_len() != test.series_len() {
        return Err(Error::Schema(format!(
            "train length {} differs from test length {}",
            train.series_len(),
            test.series_len()
        )));
    }
    if plan.fold == 0 {
        return Ok((train.clone(), test.clone()));
    }
    let pool: Vec<&TimeSeries> = train.series().iter().chain(test.series()).collect();
    let mut by_class: Vec<Vec<usize>> = Vec::new();
    let mut class_of: HashMap<&str, usize> = HashMap::new();
    for (i, s) in pool.iter().enumerate() {
        let label = s.label().expect("dataset series are labelled");
        let c = *class_of.entry(label).or_insert_with(|| {
            by_class.push(Vec::new());
            by_class.len() - 1
        });
        by_class[c].push(i);
    }

    let n_train = train.len();
    let n_pool = pool.len();
    let quotas = apportion(&by_class.iter().map(Vec::len).collect::<Vec<_>>(), n_train, n_pool);

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(plan.fold);
    let mut in_train = vec![false; n_pool];
    for (members, &quota) in by_class.iter_mut().zip(&quotas) {
        members.shuffle(&mut rng);
        for &i in &members[..quota] {
            in_train[i] = true;
        }
    }
    let pick = |want: bool| -> Result<Dataset> {
        Dataset::new((0..n_pool).filter(|&i| in_train[i] == want).map(|i| pool[i].clone()).collect())
    };
    Ok((pick(true)?, pick(false)?))
}

/// Largest-remainder split of `total` across classes proportional to
/// `counts`; remainder ties go to the earlier class.
fn apportion(counts: &[usize], total: usize, pool: usize) -> Vec<usize> {
    let mut quotas: Vec<usize> = counts.iter().map(|&c| c * total / pool).collect();
    let mut assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    // remainder numerators c*total mod pool, compared exactly
    order.sort_by_key(|&i| std::cmp::Reverse((counts[i] * total) % pool));
    for &i in order.iter().cycle() {
        if assigned >= total {
            break;
        }
        if quotas[i] < counts[i] {
            quotas[i] += 1;
            assigned += 1;
        }
    }
    quotas
}
