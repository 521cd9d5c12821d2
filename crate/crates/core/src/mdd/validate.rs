use std::fmt;

use super::{LabelId, Mdd, NodeId};

/// A structural defect found by [`Mdd::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Two arcs of one node carry the same label.
    Nondeterministic { depth: usize, node: NodeId, label: LabelId },
    /// Arcs of a node are not sorted by label id.
    UnsortedArcs { depth: usize, node: NodeId },
    /// An arc does not land on a node of the next level.
    CrossLayerArc { depth: usize, node: NodeId, child: NodeId },
    Unreachable { depth: usize, node: NodeId },
    /// No path leads from the node to `tt`.
    NotCoreachable { depth: usize, node: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Nondeterministic { depth, node, label } => {
                write!(f, "node {depth}:{node} has several arcs labelled #{}", label.0)
            }
            Violation::UnsortedArcs { depth, node } => write!(f, "node {depth}:{node} has unsorted arcs"),
            Violation::CrossLayerArc { depth, node, child } => {
                write!(f, "arc {depth}:{node} -> {}:{child} leaves the layering", depth + 1)
            }
            Violation::Unreachable { depth, node } => write!(f, "node {depth}:{node} is unreachable"),
            Violation::NotCoreachable { depth, node } => write!(f, "node {depth}:{node} cannot reach tt"),
        }
    }
}

impl Mdd {
    /// Reports determinism, layering, reachability and coreachability
    /// defects. An empty list means the diagram is structurally valid.
    pub fn validate(&self) -> Vec<Violation> {
        let arity = self.arity();
        let mut violations = Vec::new();
        let in_range = |depth: usize, child: NodeId| (child as usize) < self.nodes_at(depth + 1);

        for depth in 0..arity {
            for node in 0..self.nodes_at(depth) as NodeId {
                let edges = self.edges(depth, node);
                if edges.windows(2).any(|w| w[0].label > w[1].label) {
                    violations.push(Violation::UnsortedArcs { depth, node });
                }
                let mut labels: Vec<LabelId> = edges.iter().map(|e| e.label).collect();
                labels.sort_unstable();
                for w in labels.windows(2) {
                    if w[0] == w[1] {
                        violations.push(Violation::Nondeterministic { depth, node, label: w[0] });
                    }
                }
                for e in edges.iter().filter(|e| !in_range(depth, e.child)) {
                    violations.push(Violation::CrossLayerArc { depth, node, child: e.child });
                }
            }
        }

        let mut reachable: Vec<Vec<bool>> = (0..=arity).map(|d| vec![false; self.nodes_at(d)]).collect();
        if let Some(root) = reachable[0].first_mut() {
            *root = true;
        }
        for depth in 0..arity {
            for node in 0..self.nodes_at(depth) {
                if !reachable[depth][node] {
                    continue;
                }
                for e in self.edges(depth, node as NodeId) {
                    if in_range(depth, e.child) {
                        reachable[depth + 1][e.child as usize] = true;
                    }
                }
            }
        }

        let mut coreachable: Vec<Vec<bool>> = (0..=arity).map(|d| vec![false; self.nodes_at(d)]).collect();
        if let Some(tt) = coreachable[arity].first_mut() {
            *tt = true;
        }
        for depth in (0..arity).rev() {
            for node in 0..self.nodes_at(depth) {
                coreachable[depth][node] = self
                    .edges(depth, node as NodeId)
                    .iter()
                    .any(|e| in_range(depth, e.child) && coreachable[depth + 1][e.child as usize]);
            }
        }

        for depth in 0..=arity {
            for node in 0..self.nodes_at(depth) {
                if !reachable[depth][node] {
                    violations.push(Violation::Unreachable { depth, node: node as NodeId });
                }
                if !coreachable[depth][node] {
                    violations.push(Violation::NotCoreachable { depth, node: node as NodeId });
                }
            }
        }
        violations
    }
}
