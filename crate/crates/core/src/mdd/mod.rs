//! Layered, deterministic, reduced ordered multi-valued decision diagrams.
//!
//! An [`Mdd`] with arity `r` has `r + 1` node levels. Level 0 holds the
//! root, level `r` holds the single terminal node `tt`, and every arc leaving
//! a node on level `d` enters a node on level `d + 1`. Each root to `tt` path
//! spells one tuple of `r` labels.
//!
//! Nodes live in a per-level arena (CSR layout: one offset array plus one
//! sorted arc array per level) and labels are interned in a shared
//! [`LabelTable`], so a diagram over words stores every word once.
//!
//! Every constructor in this module returns a trimmed and reduced diagram in
//! canonical numbering: two diagrams over the same label table encode the
//! same path set if and only if they compare equal.

mod apply;
mod builder;
mod enumerate;
mod label;
mod layered;
mod reduce;
mod serial;
mod sum;
mod validate;

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use builder::TupleBuilder;
pub use label::{Label, LabelId, LabelTable};
pub use layered::{LayeredCompiler, Trace};
pub use sum::CostedChoice;
pub use validate::Violation;

/// Index of a node within its level.
pub type NodeId = u32;

/// One outgoing arc: its interned label and the child node on the next level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub label: LabelId,
    pub child: NodeId,
}

impl Edge {
    pub fn new(label: LabelId, child: NodeId) -> Self {
        Edge { label, child }
    }
}

/// Nodes of one level in CSR form. Node `i` owns `edges[offsets[i]..offsets[i + 1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Level {
    offsets: Vec<u32>,
    edges: Vec<Edge>,
}

impl Default for Level {
    fn default() -> Self {
        Level {
            offsets: vec![0],
            edges: Vec::new(),
        }
    }
}

impl Level {
    pub(crate) fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn edges(&self, node: NodeId) -> &[Edge] {
        let node = node as usize;
        &self.edges[self.offsets[node] as usize..self.offsets[node + 1] as usize]
    }

    /// Appends a node and returns its id.
    pub(crate) fn push_node<I: IntoIterator<Item = Edge>>(&mut self, edges: I) -> NodeId {
        self.edges.extend(edges);
        self.offsets.push(self.edges.len() as u32);
        (self.offsets.len() - 2) as NodeId
    }
}

/// A layered multi-valued decision diagram. Immutable once built.
#[derive(Clone, Debug)]
pub struct Mdd {
    labels: Arc<LabelTable>,
    levels: Vec<Level>,
    terminal: bool,
}

impl PartialEq for Mdd {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
            && self.terminal == other.terminal
            && (Arc::ptr_eq(&self.labels, &other.labels) || *self.labels == *other.labels)
    }
}

impl Eq for Mdd {}

impl Mdd {
    /// The diagram with no paths.
    pub fn empty(arity: usize, labels: Arc<LabelTable>) -> Mdd {
        Mdd {
            labels,
            levels: vec![Level::default(); arity],
            terminal: false,
        }
    }

    /// Builds a diagram from raw per-node arc lists without checking or
    /// reducing anything. Level `d` of `levels` lists the nodes on level `d`;
    /// node 0 of level 0 is the root. Arcs on the last level must point at
    /// child 0, the terminal. Intended for tests and [`Mdd::validate`].
    pub fn from_raw_parts(labels: Arc<LabelTable>, levels: Vec<Vec<Vec<Edge>>>, terminal: bool) -> Mdd {
        let levels = levels
            .into_iter()
            .map(|nodes| {
                let mut level = Level::default();
                for edges in nodes {
                    level.push_node(edges);
                }
                level
            })
            .collect();
        Mdd {
            labels,
            levels,
            terminal,
        }
    }

    pub(crate) fn from_levels(labels: Arc<LabelTable>, levels: Vec<Level>, terminal: bool) -> Mdd {
        Mdd {
            labels,
            levels,
            terminal,
        }
    }

    /// Rebinds the diagram to `labels` when that table holds the same labels
    /// in the same order, so several diagrams can share one table.
    pub fn share_labels(self, labels: &Arc<LabelTable>) -> Option<Mdd> {
        (*self.labels == **labels).then(|| Mdd {
            labels: labels.clone(),
            ..self
        })
    }

    /// Number of variables, i.e. the length of every path.
    pub fn arity(&self) -> usize {
        self.levels.len()
    }

    pub fn labels(&self) -> &Arc<LabelTable> {
        &self.labels
    }

    pub fn label(&self, id: LabelId) -> &Label {
        self.labels.label(id)
    }

    /// Number of nodes on node level `depth` (`0..=arity`).
    pub fn nodes_at(&self, depth: usize) -> usize {
        if depth == self.arity() {
            usize::from(self.terminal)
        } else {
            self.levels[depth].node_count()
        }
    }

    pub fn node_count(&self) -> usize {
        (0..=self.arity()).map(|d| self.nodes_at(d)).sum()
    }

    pub fn arc_count(&self) -> usize {
        self.levels.iter().map(Level::edge_count).sum()
    }

    /// Outgoing arcs of `node` on level `depth`, sorted by label id.
    pub fn edges(&self, depth: usize, node: NodeId) -> &[Edge] {
        self.levels[depth].edges(node)
    }

    /// True when the diagram encodes no tuple.
    pub fn is_empty(&self) -> bool {
        if self.arity() == 0 {
            !self.terminal
        } else {
            self.levels[0].node_count() == 0 || !self.terminal
        }
    }

    /// Exact number of root to `tt` paths, computed in one bottom-up pass.
    pub fn count_paths(&self) -> BigUint {
        if !self.terminal {
            return BigUint::zero();
        }
        let mut below = vec![BigUint::one()];
        for level in self.levels.iter().rev() {
            let counts = (0..level.node_count() as NodeId)
                .map(|node| {
                    level
                        .edges(node)
                        .iter()
                        .filter_map(|e| below.get(e.child as usize))
                        .fold(BigUint::zero(), |acc, c| acc + c)
                })
                .collect();
            below = counts;
        }
        below.into_iter().next().unwrap_or_default()
    }

    /// Looks up the ids of `tuple` in this diagram's label table.
    /// Returns `None` if some label was never interned.
    pub fn lookup(&self, tuple: &[Label]) -> Option<Vec<LabelId>> {
        tuple.iter().map(|l| self.labels.get(l)).collect()
    }

    /// Follows `prefix` from the root. Returns the reached node on level
    /// `prefix.len()`, or `None` if the walk leaves the diagram.
    pub fn walk(&self, prefix: &[LabelId]) -> Option<NodeId> {
        if prefix.len() > self.arity() || self.is_empty() {
            return None;
        }
        let mut node = 0;
        for (depth, label) in prefix.iter().enumerate() {
            let edges = self.edges(depth, node);
            let at = edges.binary_search_by_key(label, |e| e.label).ok()?;
            node = edges[at].child;
        }
        Some(node)
    }

    /// True if `tuple` is a path of the diagram.
    pub fn contains(&self, tuple: &[Label]) -> bool {
        tuple.len() == self.arity()
            && self
                .lookup(tuple)
                .and_then(|ids| self.walk(&ids))
                .is_some()
    }
}
