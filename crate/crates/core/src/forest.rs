//! Forest of proximity trees with majority voting.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, TimeSeries};
use crate::distance::{DpWorkspace, MeasureKind};
use crate::error::{Error, Result};
use crate::splitter::TreeContext;
use crate::tree::{build_tree, ProximityTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    /// Number of trees.
    pub trees: usize,
    /// Candidate splitters per node.
    pub candidates: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool. Never affects the
    /// result.
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Measure families splitters are drawn from.
    pub measures: Vec<MeasureKind>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { trees: 100, candidates: 5, seed: 0, threads: None, measures: MeasureKind::ALL.to_vec() }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trees == 0 {
            return Err(Error::Parameter("tree count must be at least 1".into()));
        }
        if self.candidates == 0 {
            return Err(Error::Parameter("candidate count must be at least 1".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::Parameter("measure set is empty".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Parameter("thread count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Random stream of tree `index`: the master seed selects the key, the tree
/// index selects the stream, so scheduling order cannot perturb it.
pub fn tree_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct Forest {
    pub(crate) config: ForestConfig,
    pub(crate) classes: Vec<String>,
    pub(crate) series_len: usize,
    pub(crate) trees: Vec<ProximityTree>,
    /// Wall-clock build time of each tree, in seconds. Not persisted.
    pub(crate) tree_seconds: Vec<f64>,
}

/// Thread hints and timings are not part of a model.
impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.config, &other.config);
        (a.trees, a.candidates, a.seed, &a.measures) == (b.trees, b.candidates, b.seed, &b.measures)
            && self.classes == other.classes
            && self.series_len == other.series_len
            && self.trees == other.trees
    }
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Build one tree on the full training set from its derived stream.
pub fn train_tree(data: &Dataset, config: &ForestConfig, index: usize) -> Result<ProximityTree> {
    let mut ctx = TreeContext::new(data, &config.measures, tree_rng(config.seed, index))?;
    let all: Vec<usize> = (0..data.len()).collect();
    build_tree(data, &all, &mut ctx, config.candidates)
}

/// Train `config.trees` trees in parallel.
pub fn train(data: &Dataset, config: &ForestConfig) -> Result<Forest> {
    config.validate()?;
    if data.len() < 2 || data.n_classes() < 2 {
        return Err(Error::Training(format!(
            "need at least two classes and two series, got {} classes and {} series",
            data.n_classes(),
            data.len()
        )));
    }
    let built: Vec<Result<(ProximityTree, f64)>> = with_pool(config.threads, || {
        (0..config.trees)
            .into_par_iter()
            .map(|k| {
                let start = Instant::now();
                let tree = train_tree(data, config, k)?;
                Ok((tree, start.elapsed().as_secs_f64()))
            })
            .collect()
    })?;
    let mut trees = Vec::with_capacity(config.trees);
    let mut tree_seconds = Vec::with_capacity(config.trees);
    for r in built {
        let (t, s) = r?;
        trees.push(t);
        tree_seconds.push(s);
    }
    Ok(Forest {
        config: config.clone(),
        classes: data.classes().to_vec(),
        series_len: data.series_len(),
        trees,
        tree_seconds,
    })
}

impl Forest {
    pub fn config(&self) -> &ForestConfig {
        &self.config
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }

    pub fn trees(&self) -> &[ProximityTree] {
        &self.trees
    }

    pub fn tree_seconds(&self) -> &[f64] {
        &self.tree_seconds
    }

    /// Number of trees voting for each class.
    pub fn vote_counts(&self, query: &TimeSeries) -> Result<Vec<usize>> {
        if query.len() != self.series_len {
            return Err(Error::Size { expected: self.series_len, found: query.len() });
        }
        let mut ws = DpWorkspace::new();
        let mut votes = vec![0; self.classes.len()];
        for tree in &self.trees {
            votes[tree.classify_with(query, &mut ws)?] += 1;
        }
        Ok(votes)
    }

    /// Class index with the most votes; ties go to the earlier class.
    pub fn predict_index(&self, query: &TimeSeries) -> Result<usize> {
        let votes = self.vote_counts(query)?;
        Ok(argmax_first(&votes))
    }

    pub fn predict(&self, query: &TimeSeries) -> Result<&str> {
        Ok(&self.classes[self.predict_index(query)?])
    }

    /// Fraction of trees voting for each class.
    pub fn predict_proba(&self, query: &TimeSeries) -> Result<Vec<f64>> {
        let votes = self.vote_counts(query)?;
        let k = self.trees.len() as f64;
        Ok(votes.into_iter().map(|v| v as f64 / k).collect())
    }

    /// Class indices for many queries, evaluated in parallel.
    pub fn predict_batch(&self, queries: &[TimeSeries]) -> Result<Vec<usize>> {
        with_pool(self.config.threads, || queries.par_iter().map(|q| self.predict_index(q)).collect())?
    }

    /// Fraction of `test` predicted correctly. Test labels unknown to the
    /// forest count as errors.
    pub fn accuracy(&self, test: &Dataset) -> Result<f64> {
        let predicted = self.predict_batch(test.series())?;
        let correct = predicted
            .iter()
            .zip(test.series())
            .filter(|(&p, s)| s.label() == Some(self.classes[p].as_str()))
            .count();
        Ok(correct as f64 / test.len() as f64)
    }

    /// Set the thread hint used for batch prediction.
    pub fn set_threads(&mut self, threads: Option<usize>) {
        self.config.threads = threads;
    }
}

pub(crate) fn argmax_first<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}
