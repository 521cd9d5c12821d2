use std::sync::Arc;

use super::{Label, LabelId, LabelTable, LayeredCompiler, Mdd};

/// A label together with the cost it adds to a running sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostedChoice {
    pub label: Label,
    pub cost: i64,
}

impl CostedChoice {
    pub fn new(label: impl Into<Label>, cost: i64) -> Self {
        CostedChoice {
            label: label.into(),
            cost,
        }
    }
}

impl Mdd {
    /// The MDD of all tuples `(v1, .., vr)` with `vi ∈ domains[i]` and
    /// `lo ≤ Σ vi ≤ hi`. Labels are the integer values themselves.
    pub fn sum(domains: &[Vec<i64>], lo: i64, hi: i64) -> Mdd {
        let choices: Vec<Vec<CostedChoice>> = domains
            .iter()
            .map(|d| d.iter().map(|&v| CostedChoice::new(v, v)).collect())
            .collect();
        Mdd::cost_sum(&choices, lo, hi)
    }

    /// Sum constraint over arbitrary labels: the MDD of all label tuples
    /// whose costs add up to a value in `[lo, hi]`.
    pub fn cost_sum(choices: &[Vec<CostedChoice>], lo: i64, hi: i64) -> Mdd {
        let mut table = LabelTable::new();
        let layers: Vec<Vec<(LabelId, i64)>> = choices
            .iter()
            .map(|layer| {
                let mut ids: Vec<(LabelId, i64)> =
                    layer.iter().map(|c| (table.intern(c.label.clone()), c.cost)).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        Mdd::cost_sum_in(Arc::new(table), &layers, lo, hi)
    }

    /// Like [`Mdd::cost_sum`] with labels already interned in `labels`.
    pub fn cost_sum_in(labels: Arc<LabelTable>, layers: &[Vec<(LabelId, i64)>], lo: i64, hi: i64) -> Mdd {
        let arity = layers.len();
        if lo > hi || layers.iter().any(Vec::is_empty) {
            return Mdd::empty(arity, labels);
        }
        // Cheapest and dearest completion from each depth onwards.
        let mut min_rest = vec![0i64; arity + 1];
        let mut max_rest = vec![0i64; arity + 1];
        for d in (0..arity).rev() {
            let costs = layers[d].iter().map(|&(_, c)| c);
            min_rest[d] = min_rest[d + 1] + costs.clone().min().unwrap_or(0);
            max_rest[d] = max_rest[d + 1] + costs.max().unwrap_or(0);
        }
        let compiler = LayeredCompiler::new(arity, labels);
        compiler.compile(
            0i64,
            |depth, &sum, out| {
                for &(label, cost) in &layers[depth] {
                    let s = sum + cost;
                    if s + min_rest[depth + 1] <= hi && s + max_rest[depth + 1] >= lo {
                        out.push((label, s));
                    }
                }
            },
            |&s| lo <= s && s <= hi,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infeasible_bounds_give_empty() {
        let m = Mdd::sum(&[vec![1, 3, 7], vec![0, 2, 4], vec![2, 3, 4]], 100, 200);
        assert!(m.is_empty());
        assert_eq!(m.count_paths(), 0u32.into());
    }

    #[test]
    fn labelled_costs() {
        let m = Mdd::cost_sum(
            &[
                vec![CostedChoice::new("the", 3), CostedChoice::new("a", 1)],
                vec![CostedChoice::new("cat", 4), CostedChoice::new("elephant", 9)],
            ],
            5,
            7,
        );
        let paths = m.paths();
        assert_eq!(paths, vec![vec![Label::word("a"), Label::word("cat")], vec![Label::word("the"), Label::word("cat")]]);
    }
}
