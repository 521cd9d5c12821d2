//! A sum constraint as an MDD: all (x1, x2, x3) with x1 ∈ {1,3,7},
//! x2 ∈ {0,2,4}, x3 ∈ {2,3,4} and 5 ≤ x1 + x2 + x3 ≤ 9.

use mnread_mdd::mdd::{Label, Mdd};

fn main() {
    let mdd = Mdd::sum(&[vec![1, 3, 7], vec![0, 2, 4], vec![2, 3, 4]], 5, 9);
    println!("{} nodes, {} arcs, {} solutions", mdd.node_count(), mdd.arc_count(), mdd.count_paths());
    for d in 0..=mdd.arity() {
        println!("  level {d}: {} nodes", mdd.nodes_at(d));
    }
    for path in mdd.paths() {
        let values: Vec<String> = path.iter().map(Label::to_string).collect();
        println!("  ({})", values.join(", "));
    }

    // Set operations stay reduced.
    let low = Mdd::sum(&[vec![1, 3, 7], vec![0, 2, 4], vec![2, 3, 4]], 0, 6);
    let both = mdd.intersect(&low).expect("same arity");
    println!("sums in [5, 6]: {}", both.count_paths());
}
