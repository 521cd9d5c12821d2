use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Edge, Label, LabelId, Mdd, NodeId};

impl Mdd {
    /// Streams paths depth-first in lexicographic label order, calling
    /// `visit` with the label ids of each one. Stops after `limit` paths when
    /// given. Returns the number of paths emitted.
    pub fn enumerate<F>(&self, limit: Option<usize>, mut visit: F) -> usize
    where
        F: FnMut(&[LabelId]),
    {
        let limit = limit.unwrap_or(usize::MAX);
        if limit == 0 || self.is_empty() {
            return 0;
        }
        if self.arity() == 0 {
            visit(&[]);
            return 1;
        }

        let ranks = self.labels.ranks();
        let sorted: Vec<(Vec<u32>, Vec<Edge>)> = self
            .levels
            .iter()
            .map(|level| {
                let mut edges = level.edges.clone();
                for w in level.offsets.windows(2) {
                    edges[w[0] as usize..w[1] as usize].sort_by_key(|e| ranks[e.label.index()]);
                }
                (level.offsets.clone(), edges)
            })
            .collect();
        let span = |depth: usize, node: NodeId| {
            let offsets = &sorted[depth].0;
            (offsets[node as usize] as usize, offsets[node as usize + 1] as usize)
        };

        let arity = self.arity();
        let mut emitted = 0;
        let mut path: Vec<LabelId> = Vec::with_capacity(arity);
        // One cursor per depth: (next edge index, end of the node's edges).
        let mut cursors: Vec<(usize, usize)> = Vec::with_capacity(arity);
        cursors.push(span(0, 0));
        while let Some(&(at, end)) = cursors.last() {
            let depth = cursors.len() - 1;
            if at == end {
                cursors.pop();
                continue;
            }
            cursors[depth].0 += 1;
            let edge = sorted[depth].1[at];
            path.truncate(depth);
            path.push(edge.label);
            if depth + 1 == arity {
                visit(&path);
                emitted += 1;
                if emitted == limit {
                    break;
                }
            } else {
                cursors.push(span(depth + 1, edge.child));
            }
        }
        emitted
    }

    /// All paths as label tuples, in enumeration order.
    pub fn paths(&self) -> Vec<Vec<Label>> {
        let mut out = Vec::new();
        self.enumerate(None, |ids| out.push(ids.iter().map(|&id| self.label(id).clone()).collect()));
        out
    }

    pub fn path_set(&self) -> BTreeSet<Vec<Label>> {
        self.paths().into_iter().collect()
    }

    /// The path at position `index` of the enumeration order, found by
    /// descending with per-node path counts instead of enumerating.
    pub fn nth_path(&self, index: &BigUint) -> Option<Vec<LabelId>> {
        if *index >= self.count_paths() {
            return None;
        }
        let ranks = self.labels.ranks();
        // counts[d][node]: paths from `node` on level d to tt.
        let mut counts: Vec<Vec<BigUint>> = vec![Vec::new(); self.arity() + 1];
        counts[self.arity()] = vec![BigUint::one()];
        for d in (0..self.arity()).rev() {
            counts[d] = (0..self.nodes_at(d) as NodeId)
                .map(|node| {
                    self.edges(d, node)
                        .iter()
                        .fold(BigUint::zero(), |acc, e| acc + &counts[d + 1][e.child as usize])
                })
                .collect();
        }
        let mut rest = index.clone();
        let mut node = 0;
        let mut path = Vec::with_capacity(self.arity());
        for d in 0..self.arity() {
            let mut edges: Vec<Edge> = self.edges(d, node).to_vec();
            edges.sort_by_key(|e| ranks[e.label.index()]);
            let mut chosen = None;
            for e in edges {
                let below = &counts[d + 1][e.child as usize];
                if rest < *below {
                    chosen = Some(e);
                    break;
                }
                rest -= below;
            }
            let e = chosen?;
            path.push(e.label);
            node = e.child;
        }
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<Label> {
        s.split_whitespace().map(Label::from).collect()
    }

    #[test]
    fn lexicographic_order() {
        let m = Mdd::from_tuples(2, [words("b a"), words("a c"), words("a b"), words("c c")]).unwrap();
        let got: Vec<String> = m
            .paths()
            .iter()
            .map(|p| format!("{}{}", p[0], p[1]))
            .collect();
        assert_eq!(got, ["ab", "ac", "ba", "cc"]);
    }

    #[test]
    fn limit_is_honoured() {
        let m = Mdd::from_tuples(2, [words("b a"), words("a c"), words("a b")]).unwrap();
        assert_eq!(m.enumerate(Some(0), |_| panic!("nothing expected")), 0);
        let mut seen = 0;
        assert_eq!(m.enumerate(Some(2), |_| seen += 1), 2);
        assert_eq!(seen, 2);
        assert_eq!(m.enumerate(Some(10), |_| {}), 3);
    }

    #[test]
    fn nth_path_matches_enumeration() {
        let m = Mdd::from_tuples(3, [words("b a c"), words("a c a"), words("a b b"), words("c c c"), words("a b a")]).unwrap();
        let mut all = Vec::new();
        m.enumerate(None, |p| all.push(p.to_vec()));
        for (i, p) in all.iter().enumerate() {
            assert_eq!(m.nth_path(&BigUint::from(i)).as_ref(), Some(p));
        }
        assert_eq!(m.nth_path(&BigUint::from(all.len())), None);
    }
}
