use std::hash::Hash;
use std::sync::Arc;

use indexmap::IndexSet;

use super::reduce::reduce_levels;
use super::{Edge, LabelId, LabelTable, Level, Mdd, NodeId};

/// Builds an MDD by expanding a layered state machine breadth-first.
///
/// States reached on the same level with equal keys become one node, which
/// is what turns the expansion into a DAG rather than a tree. Expansion must
/// be deterministic: at most one successor state per label.
#[derive(Clone, Debug)]
pub struct LayeredCompiler {
    arity: usize,
    labels: Arc<LabelTable>,
}

/// Frontier sizes observed while compiling, one entry per non-terminal level.
pub type Trace = Vec<usize>;

impl LayeredCompiler {
    pub fn new(arity: usize, labels: Arc<LabelTable>) -> Self {
        LayeredCompiler { arity, labels }
    }

    /// `expand(depth, state, out)` pushes the `(label, successor)` pairs of
    /// `state`; successors produced on the last level become `tt` when
    /// `accept` holds for them and are dropped otherwise.
    pub fn compile<S, E, A>(&self, root: S, expand: E, accept: A) -> Mdd
    where
        S: Hash + Eq + Clone,
        E: FnMut(usize, &S, &mut Vec<(LabelId, S)>),
        A: Fn(&S) -> bool,
    {
        self.compile_with_trace(root, expand, accept).0
    }

    pub fn compile_with_trace<S, E, A>(&self, root: S, mut expand: E, accept: A) -> (Mdd, Trace)
    where
        S: Hash + Eq + Clone,
        E: FnMut(usize, &S, &mut Vec<(LabelId, S)>),
        A: Fn(&S) -> bool,
    {
        if self.arity == 0 {
            let ok = accept(&root);
            return (Mdd::from_levels(self.labels.clone(), Vec::new(), ok), vec![1]);
        }
        let mut trace = Vec::with_capacity(self.arity + 1);
        let mut levels = Vec::with_capacity(self.arity);
        let mut frontier: IndexSet<S> = IndexSet::new();
        frontier.insert(root);
        let mut out = Vec::new();
        let mut edges = Vec::new();
        for depth in 0..self.arity {
            trace.push(frontier.len());
            let last = depth + 1 == self.arity;
            let mut next: IndexSet<S> = IndexSet::new();
            let mut level = Level::default();
            for state in &frontier {
                out.clear();
                expand(depth, state, &mut out);
                out.sort_by_key(|(label, _)| *label);
                edges.clear();
                for (label, successor) in out.drain(..) {
                    let child = if last {
                        if !accept(&successor) {
                            continue;
                        }
                        0
                    } else {
                        next.insert_full(successor).0 as NodeId
                    };
                    if let Some(prev) = edges.last() {
                        let prev: &Edge = prev;
                        if prev.label == label {
                            debug_assert_eq!(prev.child, child, "nondeterministic expansion");
                            continue;
                        }
                    }
                    edges.push(Edge::new(label, child));
                }
                level.push_node(edges.iter().copied());
            }
            levels.push(level);
            frontier = next;
        }
        (reduce_levels(self.labels.clone(), &levels, true), trace)
    }
}
