//! Proximity tree induction and traversal.

use crate::data::{Dataset, TimeSeries};
use crate::distance::DpWorkspace;
use crate::error::{Error, Result};
use crate::splitter::{class_counts, gen_candidate_splitter, split_gain, Splitter, TreeContext};

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf { class: usize },
    /// `children[b]` is the subtree for `splitter.exemplars[b]`.
    Internal { splitter: Splitter, children: Vec<usize> },
}

/// Nodes stored in preorder; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityTree {
    pub(crate) nodes: Vec<TreeNode>,
    pub(crate) series_len: usize,
}

impl ProximityTree {
    pub(crate) fn from_parts(nodes: Vec<TreeNode>, series_len: usize) -> Self {
        ProximityTree { nodes, series_len }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], id: usize) -> usize {
            match &nodes[id] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Internal { children, .. } => 1 + children.iter().map(|&c| go(nodes, c)).max().unwrap_or(0),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }

    /// Class index of the leaf `query` reaches.
    pub fn classify(&self, query: &TimeSeries) -> Result<usize> {
        self.classify_with(query, &mut DpWorkspace::new())
    }

    pub fn classify_with(&self, query: &TimeSeries, ws: &mut DpWorkspace) -> Result<usize> {
        let path = self.route(query, ws)?;
        match self.nodes[*path.last().expect("route is never empty")] {
            TreeNode::Leaf { class } => Ok(class),
            TreeNode::Internal { .. } => unreachable!("routes end at leaves"),
        }
    }

    /// Node ids visited from the root to a leaf.
    pub fn route(&self, query: &TimeSeries, ws: &mut DpWorkspace) -> Result<Vec<usize>> {
        if query.len() != self.series_len {
            return Err(Error::Size { expected: self.series_len, found: query.len() });
        }
        let mut id = 0;
        let mut path = vec![0];
        while let TreeNode::Internal { splitter, children } = &self.nodes[id] {
            id = children[splitter.nearest(query, ws)?];
            path.push(id);
        }
        Ok(path)
    }
}

/// Build a tree over the instances `node` of `data`.
///
/// Pure data becomes a leaf. Otherwise `candidates` random splitters are
/// scored by Gini gain and the first best one is kept. When no candidate
/// separates anything the node becomes a majority leaf, which guarantees
/// termination. A branch that receives no instance becomes a leaf of its
/// exemplar's class.
pub fn build_tree(data: &Dataset, node: &[usize], ctx: &mut TreeContext, candidates: usize) -> Result<ProximityTree> {
    let mut builder = Builder { data, ctx, candidates, nodes: Vec::new(), members: None };
    builder.grow(node.to_vec())?;
    Ok(ProximityTree { nodes: builder.nodes, series_len: data.series_len() })
}

/// [`build_tree`] that also returns the training instances reaching each node.
#[cfg(test)]
pub(crate) fn build_tree_traced(
    data: &Dataset,
    node: &[usize],
    ctx: &mut TreeContext,
    candidates: usize,
) -> Result<(ProximityTree, Vec<Vec<usize>>)> {
    let mut builder = Builder { data, ctx, candidates, nodes: Vec::new(), members: Some(Vec::new()) };
    builder.grow(node.to_vec())?;
    let members = builder.members.take().unwrap_or_default();
    Ok((ProximityTree { nodes: builder.nodes, series_len: data.series_len() }, members))
}

struct Builder<'a> {
    data: &'a Dataset,
    ctx: &'a mut TreeContext,
    candidates: usize,
    nodes: Vec<TreeNode>,
    members: Option<Vec<Vec<usize>>>,
}

impl Builder<'_> {
    fn grow(&mut self, node: Vec<usize>) -> Result<usize> {
        if node.is_empty() {
            return Err(Error::InsufficientData("cannot grow a tree from no data".into()));
        }
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { class: 0 });
        if let Some(m) = self.members.as_mut() {
            m.push(node.clone());
        }

        let counts = class_counts(self.data, &node);
        let present = counts.iter().filter(|&&c| c > 0).count();
        if present == 1 {
            self.nodes[id] = TreeNode::Leaf { class: majority(&counts) };
            return Ok(id);
        }

        let mut best: Option<(f64, Splitter, Vec<Vec<usize>>)> = None;
        for _ in 0..self.candidates {
            let splitter = gen_candidate_splitter(self.data, &node, self.ctx);
            let parts = splitter.partition(self.data, &node)?;
            let child_counts: Vec<Vec<usize>> = parts.iter().map(|p| class_counts(self.data, p)).collect();
            let gain = split_gain(&counts, &child_counts)?;
            if best.as_ref().is_none_or(|(g, _, _)| gain > *g) {
                best = Some((gain, splitter, parts));
            }
        }
        let (gain, splitter, parts) = best.expect("at least one candidate");
        if gain <= 0.0 {
            self.nodes[id] = TreeNode::Leaf { class: majority(&counts) };
            return Ok(id);
        }

        let mut children = Vec::with_capacity(parts.len());
        for (part, exemplar) in parts.into_iter().zip(&splitter.exemplars) {
            if part.is_empty() {
                children.push(self.nodes.len());
                self.nodes.push(TreeNode::Leaf { class: exemplar.class });
                if let Some(m) = self.members.as_mut() {
                    m.push(Vec::new());
                }
            } else {
                children.push(self.grow(part)?);
            }
        }
        self.nodes[id] = TreeNode::Internal { splitter, children };
        Ok(id)
    }
}

/// Most frequent class; ties go to the earlier class.
fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}
