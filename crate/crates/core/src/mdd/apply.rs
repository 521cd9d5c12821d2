use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::reduce::reduce_levels;
use super::{Edge, Label, LabelId, LabelTable, Level, Mdd, NodeId};
use crate::error::{Error, Result};

impl Mdd {
    /// The MDD of `paths(self) ∩ paths(other)`, trimmed and reduced. The
    /// result uses `self`'s label table; labels of `other` are matched by
    /// value.
    pub fn intersect(&self, other: &Mdd) -> Result<Mdd> {
        self.check_arity(other)?;
        let arity = self.arity();
        if self.is_empty() || other.is_empty() || arity == 0 {
            let both = !self.is_empty() && !other.is_empty();
            return Ok(if arity == 0 {
                Mdd::from_levels(self.labels.clone(), Vec::new(), both)
            } else {
                Mdd::empty(arity, self.labels.clone())
            });
        }

        let to_other: Vec<Option<LabelId>> = if same_table(&self.labels, &other.labels) {
            (0..self.labels.len() as u32).map(|i| Some(LabelId(i))).collect()
        } else {
            self.labels.iter().map(|(_, l)| other.labels.get(l)).collect()
        };

        let mut levels = Vec::with_capacity(arity);
        let mut frontier: Vec<(NodeId, NodeId)> = vec![(0, 0)];
        for depth in 0..arity {
            let last = depth + 1 == arity;
            let mut memo: HashMap<(NodeId, NodeId), NodeId> = HashMap::new();
            let mut next = Vec::new();
            let mut level = Level::default();
            for &(a, b) in &frontier {
                let b_edges = other.edges(depth, b);
                let mut out = Vec::new();
                for ea in self.edges(depth, a) {
                    let Some(ob) = to_other[ea.label.index()] else {
                        continue;
                    };
                    let Ok(at) = b_edges.binary_search_by_key(&ob, |e| e.label) else {
                        continue;
                    };
                    let pair = (ea.child, b_edges[at].child);
                    let child = if last {
                        0
                    } else {
                        *memo.entry(pair).or_insert_with(|| {
                            next.push(pair);
                            (next.len() - 1) as NodeId
                        })
                    };
                    out.push(Edge::new(ea.label, child));
                }
                level.push_node(out);
            }
            levels.push(level);
            frontier = next;
        }
        Ok(reduce_levels(self.labels.clone(), &levels, true))
    }

    /// The MDD of `paths(self) ∪ paths(other)`. The label table is `self`'s,
    /// extended with any label only `other` uses.
    pub fn union(&self, other: &Mdd) -> Result<Mdd> {
        self.check_arity(other)?;
        let arity = self.arity();
        let (labels, from_other) = if same_table(&self.labels, &other.labels) {
            let ids = (0..self.labels.len() as u32).map(LabelId).collect();
            (self.labels.clone(), ids)
        } else {
            let mut table = (*self.labels).clone();
            let ids: Vec<LabelId> = other.labels.iter().map(|(_, l)| table.intern(l.clone())).collect();
            (Arc::new(table), ids)
        };
        if arity == 0 {
            let any = !self.is_empty() || !other.is_empty();
            return Ok(Mdd::from_levels(labels, Vec::new(), any));
        }
        let root = |m: &Mdd| (!m.is_empty()).then_some(0);
        let start = (root(self), root(other));
        if start == (None, None) {
            return Ok(Mdd::empty(arity, labels));
        }

        let mut levels = Vec::with_capacity(arity);
        let mut frontier = vec![start];
        for depth in 0..arity {
            let last = depth + 1 == arity;
            let mut memo: HashMap<(Option<NodeId>, Option<NodeId>), NodeId> = HashMap::new();
            let mut next = Vec::new();
            let mut level = Level::default();
            for &(a, b) in &frontier {
                let mut merged: BTreeMap<LabelId, (Option<NodeId>, Option<NodeId>)> = BTreeMap::new();
                if let Some(a) = a {
                    for e in self.edges(depth, a) {
                        merged.entry(e.label).or_default().0 = Some(e.child);
                    }
                }
                if let Some(b) = b {
                    for e in other.edges(depth, b) {
                        merged.entry(from_other[e.label.index()]).or_default().1 = Some(e.child);
                    }
                }
                let out: Vec<Edge> = merged
                    .into_iter()
                    .map(|(label, pair)| {
                        let child = if last {
                            0
                        } else {
                            *memo.entry(pair).or_insert_with(|| {
                                next.push(pair);
                                (next.len() - 1) as NodeId
                            })
                        };
                        Edge::new(label, child)
                    })
                    .collect();
                level.push_node(out);
            }
            levels.push(level);
            frontier = next;
        }
        Ok(reduce_levels(labels, &levels, true))
    }

    /// Adds one tuple to the path set. Existing paths are kept and shared
    /// prefixes share arcs.
    pub fn insert_tuple(&self, tuple: &[Label]) -> Result<Mdd> {
        if tuple.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: tuple.len(),
            });
        }
        let mut table = (*self.labels).clone();
        let ids: Vec<LabelId> = tuple.iter().map(|l| table.intern(l.clone())).collect();
        let labels = if table.len() == self.labels.len() {
            self.labels.clone()
        } else {
            Arc::new(table)
        };
        let single = Mdd::from_levels(
            labels.clone(),
            ids.iter()
                .map(|&id| {
                    let mut level = Level::default();
                    level.push_node([Edge::new(id, 0)]);
                    level
                })
                .collect(),
            true,
        );
        let base = Mdd::from_levels(labels, self.levels.clone(), self.terminal);
        base.union(&single)
    }

    fn check_arity(&self, other: &Mdd) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        Ok(())
    }
}

fn same_table(a: &Arc<LabelTable>, b: &Arc<LabelTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
