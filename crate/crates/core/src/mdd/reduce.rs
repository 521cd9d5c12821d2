use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Edge, LabelTable, Level, Mdd, NodeId};

const NONE: u32 = u32::MAX;

impl Mdd {
    /// Merges nodes with identical outgoing signatures, drops nodes that are
    /// unreachable from the root or cannot reach `tt`, and renumbers the
    /// result canonically. The path set is unchanged.
    pub fn reduce(&self) -> Mdd {
        reduce_levels(self.labels.clone(), &self.levels, self.terminal)
    }
}

/// Per-level signature table. Buckets are keyed by the signature hash and
/// chained through `next`; candidates are confirmed by full comparison.
struct SignatureTable {
    buckets: HashMap<u64, u32>,
    next: Vec<u32>,
}

impl SignatureTable {
    fn new() -> Self {
        SignatureTable {
            buckets: HashMap::new(),
            next: Vec::new(),
        }
    }

    fn find_or_insert(&mut self, level: &mut Level, signature: &[Edge]) -> NodeId {
        let mut hasher = DefaultHasher::new();
        signature.hash(&mut hasher);
        let hash = hasher.finish();

        let head = self.buckets.get(&hash).copied().unwrap_or(NONE);
        let mut at = head;
        while at != NONE {
            if level.edges(at) == signature {
                return at;
            }
            at = self.next[at as usize];
        }
        let id = level.push_node(signature.iter().copied());
        self.next.push(head);
        self.buckets.insert(hash, id);
        id
    }
}

pub(crate) fn reduce_levels(labels: Arc<LabelTable>, levels: &[Level], terminal: bool) -> Mdd {
    let arity = levels.len();
    if arity == 0 {
        return Mdd::from_levels(labels, Vec::new(), terminal);
    }
    if levels[0].node_count() == 0 || !terminal {
        return Mdd::empty(arity, labels);
    }

    // Forward reachability from the root.
    let mut reachable: Vec<Vec<bool>> = levels.iter().map(|l| vec![false; l.node_count()]).collect();
    reachable[0][0] = true;
    for depth in 0..arity - 1 {
        let (upper, lower) = reachable.split_at_mut(depth + 1);
        let next = &mut lower[0];
        for (node, _) in upper[depth].iter().enumerate().filter(|(_, r)| **r) {
            for e in levels[depth].edges(node as NodeId) {
                if let Some(slot) = next.get_mut(e.child as usize) {
                    *slot = true;
                }
            }
        }
    }

    // Bottom-up signature merging. `below[i]` is the merged id of node `i`
    // on the level underneath, or NONE if it was dropped.
    let mut merged: Vec<Level> = vec![Level::default(); arity];
    let mut below: Vec<u32> = vec![0];
    let mut scratch = Vec::new();
    for depth in (0..arity).rev() {
        let mut table = SignatureTable::new();
        let mut ids = vec![NONE; levels[depth].node_count()];
        for (node, id) in ids.iter_mut().enumerate() {
            if !reachable[depth][node] {
                continue;
            }
            scratch.clear();
            scratch.extend(levels[depth].edges(node as NodeId).iter().filter_map(|e| {
                match below.get(e.child as usize) {
                    Some(&c) if c != NONE => Some(Edge::new(e.label, c)),
                    _ => None,
                }
            }));
            if scratch.is_empty() {
                continue;
            }
            scratch.sort_unstable();
            *id = table.find_or_insert(&mut merged[depth], &scratch);
        }
        below = ids;
    }
    if below[0] == NONE {
        return Mdd::empty(arity, labels);
    }

    canonical(labels, merged, below[0])
}

/// Renumbers nodes in order of first appearance when scanning each level's
/// nodes (in canonical order) and their arcs (in label-id order).
fn canonical(labels: Arc<LabelTable>, merged: Vec<Level>, root: NodeId) -> Mdd {
    let arity = merged.len();
    let mut out = Vec::with_capacity(arity);
    let mut order = vec![root];
    for depth in 0..arity {
        let last = depth + 1 == arity;
        let next_count = if last { 1 } else { merged[depth + 1].node_count() };
        let mut renumber = vec![NONE; next_count];
        let mut next_order = Vec::new();
        let mut level = Level::default();
        for &old in &order {
            let edges: Vec<Edge> = merged[depth]
                .edges(old)
                .iter()
                .map(|e| {
                    let slot = &mut renumber[e.child as usize];
                    if *slot == NONE {
                        *slot = next_order.len() as u32;
                        next_order.push(e.child);
                    }
                    Edge::new(e.label, *slot)
                })
                .collect();
            level.push_node(edges);
        }
        out.push(level);
        order = next_order;
    }
    Mdd::from_levels(labels, out, true)
}
