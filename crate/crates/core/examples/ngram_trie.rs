//! Stores position-typed 3-grams in tries and asks which words may follow
//! a pair of words.

use mnread_mdd::corpus::{NGram, Position};
use mnread_mdd::trie::{MddTrie, SuffixQuery, WantPosition};

fn main() -> mnread_mdd::Result<()> {
    let grams: Vec<NGram> = [
        (Position::Initial, "The black cat"),
        (Position::Initial, "The white cat"),
        (Position::Initial, "A red apple"),
        (Position::Middle, "black cat sleeps"),
        (Position::Middle, "white cat loves"),
        (Position::Final, "cat loves milk"),
    ]
    .iter()
    .map(|(p, s)| NGram::new(*p, &s.split(' ').collect::<Vec<_>>()))
    .collect();

    let trie = MddTrie::build(3, &grams)?;
    for p in Position::ALL {
        let m = trie.trie(p);
        println!("{p:?}: {} n-grams, {} nodes, {} arcs", m.count_paths(), m.node_count(), m.arc_count());
    }
    println!("prefix tree before reduction: {} nodes", MddTrie::prefix_tree_nodes(3, &grams)?);

    for (suffix, want) in [
        (["white", "cat"], WantPosition::Any),
        (["black", "cat"], WantPosition::Middle),
        (["cat", "loves"], WantPosition::Final),
        (["green", "cat"], WantPosition::Any),
    ] {
        let next = trie.successors(&SuffixQuery::new(&suffix, want))?;
        println!("after {:?} ({want:?}): {next:?}", suffix.join(" "));
    }
    Ok(())
}
