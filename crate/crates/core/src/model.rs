//! JSON model files.
//!
//! ```text
//! {
//!   "format": "proximity-forest",
//!   "version": 1,
//!   "config": { "trees": 100, "candidates": 5, "seed": 42,
//!               "measures": ["adtw", "cdtw", "lcss"] },
//!   "classes": ["1", "2"],
//!   "series_length": 128,
//!   "trees": [
//!     { "nodes": [
//!         { "kind": "internal",
//!           "distance": { "measure": "adtw", "omega": 0.013, "gamma": 2.0 },
//!           "transform": "first_derivative",
//!           "branches": [
//!             { "class": 0, "train_index": 17, "exemplar": [0.1, ...], "child": 1 },
//!             { "class": 1, "train_index": 3,  "exemplar": [0.4, ...], "child": 2 } ] },
//!         { "kind": "leaf", "class": 0 },
//!         { "kind": "leaf", "class": 1 } ] } ]
//! }
//! ```
//!
//! Nodes are listed in preorder and the root is node 0. `class` fields index
//! into `classes`. `distance` is one of
//! `{"measure":"adtw","omega":..,"gamma":..}`,
//! `{"measure":"cdtw","window":..,"gamma":..}` or
//! `{"measure":"lcss","epsilon":..,"window":..}`, with `gamma` in
//! `{0.5, 1.0, 2.0}`. Reals are written in shortest round-trip form, so
//! loading reproduces every value bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::TimeSeries;
use crate::distance::MeasureParams;
use crate::error::{Error, Result};
use crate::forest::{Forest, ForestConfig};
use crate::splitter::{Exemplar, Splitter};
use crate::transform::TransformKind;
use crate::tree::{ProximityTree, TreeNode};

pub const FORMAT: &str = "proximity-forest";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    config: ForestConfig,
    classes: Vec<String>,
    series_length: usize,
    trees: Vec<TreeRecord>,
}

#[derive(Serialize, Deserialize)]
struct TreeRecord {
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum NodeRecord {
    Leaf {
        class: usize,
    },
    Internal {
        distance: MeasureParams,
        transform: TransformKind,
        branches: Vec<BranchRecord>,
    },
}

#[derive(Serialize, Deserialize)]
struct BranchRecord {
    class: usize,
    train_index: usize,
    exemplar: Vec<f64>,
    child: usize,
}

fn to_record(forest: &Forest) -> ModelFile {
    let trees = forest
        .trees
        .iter()
        .map(|t| TreeRecord {
            nodes: t
                .nodes()
                .iter()
                .map(|n| match n {
                    TreeNode::Leaf { class } => NodeRecord::Leaf { class: *class },
                    TreeNode::Internal { splitter, children } => NodeRecord::Internal {
                        distance: splitter.measure,
                        transform: splitter.transform,
                        branches: splitter
                            .exemplars
                            .iter()
                            .zip(children)
                            .map(|(e, &child)| BranchRecord {
                                class: e.class,
                                train_index: e.train_index,
                                exemplar: e.series.values().to_vec(),
                                child,
                            })
                            .collect(),
                    },
                })
                .collect(),
        })
        .collect();
    ModelFile {
        format: FORMAT.to_owned(),
        version: VERSION,
        config: forest.config.clone(),
        classes: forest.classes.clone(),
        series_length: forest.series_len,
        trees,
    }
}

fn from_record(m: ModelFile) -> Result<Forest> {
    if m.format != FORMAT {
        return Err(Error::Schema(format!("not a {FORMAT} model: format {:?}", m.format)));
    }
    if m.version != VERSION {
        return Err(Error::Schema(format!("unsupported model version {}", m.version)));
    }
    let n_classes = m.classes.len();
    let check_class = |c: usize| {
        if c < n_classes {
            Ok(c)
        } else {
            Err(Error::Schema(format!("class index {c} out of range")))
        }
    };
    let mut trees = Vec::with_capacity(m.trees.len());
    for record in m.trees {
        let n_nodes = record.nodes.len();
        if n_nodes == 0 {
            return Err(Error::Schema("tree without nodes".into()));
        }
        let mut nodes = Vec::with_capacity(n_nodes);
        for (id, node) in record.nodes.into_iter().enumerate() {
            nodes.push(match node {
                NodeRecord::Leaf { class } => TreeNode::Leaf { class: check_class(class)? },
                NodeRecord::Internal { distance, transform, branches } => {
                    distance.validate()?;
                    if branches.is_empty() {
                        return Err(Error::Schema(format!("internal node {id} has no branches")));
                    }
                    let mut exemplars = Vec::with_capacity(branches.len());
                    let mut children = Vec::with_capacity(branches.len());
                    for b in branches {
                        // preorder: children come after their parent
                        if b.child <= id || b.child >= n_nodes {
                            return Err(Error::Schema(format!("node {id} has invalid child {}", b.child)));
                        }
                        if b.exemplar.len() != m.series_length {
                            return Err(Error::Size { expected: m.series_length, found: b.exemplar.len() });
                        }
                        let class = check_class(b.class)?;
                        exemplars.push(Exemplar {
                            class,
                            train_index: b.train_index,
                            series: TimeSeries::new(b.exemplar, Some(m.classes[class].clone()))?,
                        });
                        children.push(b.child);
                    }
                    TreeNode::Internal { splitter: Splitter { measure: distance, transform, exemplars }, children }
                }
            });
        }
        trees.push(ProximityTree::from_parts(nodes, m.series_length));
    }
    if trees.len() != m.config.trees {
        return Err(Error::Schema(format!("config says {} trees, file has {}", m.config.trees, trees.len())));
    }
    Ok(Forest {
        config: m.config,
        classes: m.classes,
        series_len: m.series_length,
        trees,
        tree_seconds: Vec::new(),
    })
}

/// Serialise to the JSON model document.
pub fn to_json(forest: &Forest) -> Result<String> {
    let mut s = serde_json::to_string(&to_record(forest))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Forest> {
    from_record(serde_json::from_str(text)?)
}

pub fn save(forest: &Forest, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(forest)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<Forest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text)
}
