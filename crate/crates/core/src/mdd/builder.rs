use std::sync::Arc;

use super::reduce::reduce_levels;
use super::{Edge, Label, LabelId, LabelTable, Level, Mdd, NodeId};
use crate::error::{Error, Result};

/// Bulk construction of an MDD from a set of tuples.
///
/// Tuples are buffered as interned ids; [`TupleBuilder::build`] sorts and
/// deduplicates them, lays out the prefix tree level by level and reduces it.
#[derive(Clone, Debug)]
pub struct TupleBuilder {
    arity: usize,
    flat: Vec<LabelId>,
    nullary: bool,
}

impl TupleBuilder {
    pub fn new(arity: usize) -> Self {
        TupleBuilder {
            arity,
            flat: Vec::new(),
            nullary: false,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of buffered tuples, duplicates included.
    pub fn len(&self) -> usize {
        self.flat.len().checked_div(self.arity).unwrap_or(usize::from(self.nullary))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert(&mut self, tuple: &[LabelId]) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: tuple.len(),
            });
        }
        self.nullary = true;
        self.flat.extend_from_slice(tuple);
        Ok(())
    }

    /// The unreduced prefix tree of the buffered tuples.
    pub fn build_prefix_tree(&self, labels: Arc<LabelTable>) -> Mdd {
        let arity = self.arity;
        if arity == 0 {
            return Mdd::from_levels(labels, Vec::new(), self.nullary);
        }
        let mut tuples: Vec<&[LabelId]> = self.flat.chunks_exact(arity).collect();
        if tuples.is_empty() {
            return Mdd::empty(arity, labels);
        }
        tuples.sort_unstable();
        tuples.dedup();

        // offsets[d] holds the start offset of each opened node on level d;
        // the closing offset of the last node is appended at the end.
        let mut offsets: Vec<Vec<u32>> = vec![Vec::new(); arity];
        let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); arity];
        offsets[0].push(0);
        let mut previous: Option<&[LabelId]> = None;
        for tuple in tuples {
            let split = previous.map_or(0, |p| p.iter().zip(tuple).take_while(|(a, b)| a == b).count());
            for depth in split..arity {
                let child = if depth + 1 == arity {
                    0
                } else {
                    let below = depth + 1;
                    offsets[below].push(edges[below].len() as u32);
                    (offsets[below].len() - 1) as NodeId
                };
                edges[depth].push(Edge::new(tuple[depth], child));
            }
            previous = Some(tuple);
        }

        let levels = offsets
            .into_iter()
            .zip(edges)
            .map(|(mut offsets, edges)| {
                offsets.push(edges.len() as u32);
                Level { offsets, edges }
            })
            .collect();
        Mdd::from_levels(labels, levels, true)
    }

    /// The reduced MDD whose paths are exactly the buffered tuples.
    pub fn build(&self, labels: Arc<LabelTable>) -> Mdd {
        let tree = self.build_prefix_tree(labels);
        reduce_levels(tree.labels.clone(), &tree.levels, tree.terminal)
    }
}

impl Mdd {
    /// Builds the reduced MDD of a set of label tuples, interning labels in
    /// a fresh table.
    pub fn from_tuples<I, T>(arity: usize, tuples: I) -> Result<Mdd>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Label]>,
    {
        let mut table = LabelTable::new();
        let mut builder = TupleBuilder::new(arity);
        let mut ids = Vec::with_capacity(arity);
        for tuple in tuples {
            ids.clear();
            ids.extend(tuple.as_ref().iter().map(|l| table.intern(l.clone())));
            builder.insert(&ids)?;
        }
        Ok(builder.build(Arc::new(table)))
    }
}
