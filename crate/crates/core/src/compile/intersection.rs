//! The modular route: one MDD per rule, intersected.
//!
//! Every diagram here spans `max_words` levels over the same label table
//! (trie words plus ε), so the intersection needs no relabelling.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Ratio;

use super::Alphabet;
use crate::corpus::Position;
use crate::error::Result;
use crate::mdd::{LabelId, LabelTable, LayeredCompiler, Mdd};
use crate::rules::{line_window, FontMetrics, RuleConfig};
use crate::trie::MddTrie;

/// Intersects the succession, word-count, character-budget and display
/// MDDs. Slower than [`super::unfold`] and meant as a cross-check.
pub fn compile_via_intersection(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Mdd> {
    let abc = Alphabet::new(trie, cfg, fonts)?;
    let mut result = succession(trie, &abc);
    if result.is_empty() {
        return Ok(abc.empty_result());
    }
    for build in [length, char_budget, display] {
        let domains = level_domains(&result);
        result = result.intersect(&build(&abc, &domains))?;
        if result.is_empty() {
            break;
        }
    }
    Ok(result)
}

/// Word sequences whose windows chain through the trie with the right
/// positions and whose last word may end a sentence, ε-padded.
pub fn succession_mdd(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Mdd> {
    let abc = Alphabet::new(trie, cfg, fonts)?;
    Ok(succession(trie, &abc))
}

/// Word count within `[min_words, max_words]`, ε-padded.
pub fn length_mdd(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Mdd> {
    let abc = Alphabet::new(trie, cfg, fonts)?;
    Ok(length(&abc, &all_domains(&abc)))
}

/// Characters plus inter-word spaces equal to `char_budget`.
pub fn char_budget_mdd(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Mdd> {
    let abc = Alphabet::new(trie, cfg, fonts)?;
    Ok(char_budget(&abc, &all_domains(&abc)))
}

/// Word sequences that split into `n_lines` justifiable lines.
pub fn display_mdd(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Mdd> {
    let abc = Alphabet::new(trie, cfg, fonts)?;
    Ok(display(&abc, &all_domains(&abc)))
}

fn all_domains(abc: &Alphabet) -> Vec<Vec<LabelId>> {
    let mut all = abc.words.clone();
    all.push(abc.epsilon);
    vec![all; abc.cfg.max_words]
}

/// Labels used on each level of `m`, so the next constraint MDD only spans
/// labels that can still matter.
fn level_domains(m: &Mdd) -> Vec<Vec<LabelId>> {
    (0..m.arity())
        .map(|d| {
            let set: BTreeSet<LabelId> = (0..m.nodes_at(d) as u32)
                .flat_map(|node| m.edges(d, node).iter().map(|e| e.label))
                .collect();
            set.into_iter().collect()
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Chain {
    /// Words of the sentence so far, before the first window closes.
    Prefix(Vec<LabelId>),
    /// Last n − 1 words, and whether the last window was initial/middle
    /// (`more`) or final (`end`).
    Window { last: Vec<LabelId>, more: bool, end: bool },
    Padding,
}

fn succession(trie: &MddTrie, abc: &Alphabet) -> Mdd {
    let n = trie.order();
    let eps = abc.epsilon;
    let initial = trie.trie(Position::Initial);
    let middle = trie.trie(Position::Middle);
    let final_ = trie.trie(Position::Final);
    let stored = |m: &Mdd, w: &[LabelId]| m.walk(w).is_some();
    let closes = |last: &[LabelId], end: bool| end && !abc.non_terminal[last[last.len() - 1].index()];
    LayeredCompiler::new(abc.cfg.max_words, abc.labels.clone()).compile(
        Chain::Prefix(Vec::new()),
        |_, state, out| match state {
            Chain::Padding => out.push((eps, Chain::Padding)),
            Chain::Prefix(words) => {
                for &w in &abc.words {
                    let mut next = words.clone();
                    next.push(w);
                    if next.len() < n {
                        if stored(initial, &next) {
                            out.push((w, Chain::Prefix(next)));
                        }
                    } else if stored(initial, &next) {
                        let end = stored(final_, &next);
                        out.push((
                            w,
                            Chain::Window {
                                last: next[1..].to_vec(),
                                more: true,
                                end,
                            },
                        ));
                    }
                }
            }
            Chain::Window { last, more, end } => {
                if closes(last, *end) {
                    out.push((eps, Chain::Padding));
                }
                if !more {
                    return;
                }
                for &w in &abc.words {
                    let mut window = last.clone();
                    window.push(w);
                    let more = stored(middle, &window);
                    let end = stored(final_, &window);
                    if more || end {
                        out.push((
                            w,
                            Chain::Window {
                                last: window[1..].to_vec(),
                                more,
                                end,
                            },
                        ));
                    }
                }
            }
        },
        |state| match state {
            Chain::Padding => true,
            Chain::Window { last, end, .. } => closes(last, *end),
            Chain::Prefix(_) => false,
        },
    )
}

/// Sum constraint with per-level costs: `cost(depth, label)`.
fn costed(
    labels: &Arc<LabelTable>,
    domains: &[Vec<LabelId>],
    lo: i64,
    hi: i64,
    cost: impl Fn(usize, LabelId) -> i64,
) -> Mdd {
    let layers: Vec<Vec<(LabelId, i64)>> = domains
        .iter()
        .enumerate()
        .map(|(d, dom)| dom.iter().map(|&l| (l, cost(d, l))).collect())
        .collect();
    Mdd::cost_sum_in(labels.clone(), &layers, lo, hi)
}

fn length(abc: &Alphabet, domains: &[Vec<LabelId>]) -> Mdd {
    let eps = abc.epsilon;
    let (lo, hi) = (abc.cfg.min_words as i64, abc.cfg.max_words as i64);
    costed(&abc.labels, domains, lo, hi, |_, l| i64::from(l != eps))
}

fn char_budget(abc: &Alphabet, domains: &[Vec<LabelId>]) -> Mdd {
    let eps = abc.epsilon;
    let budget = abc.cfg.char_budget as i64;
    costed(&abc.labels, domains, budget, budget, |depth, l| {
        if l == eps {
            0
        } else {
            abc.char_len[l.index()] + i64::from(depth > 0)
        }
    })
}

/// Display state: the set of `(line, gaps, width)` layouts of the words so
/// far, or `Closed` once padding began after a valid layout.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Layout {
    Open(BTreeSet<(usize, usize, i64)>),
    Closed,
}

fn display(abc: &Alphabet, domains: &[Vec<LabelId>]) -> Mdd {
    let cfg = &abc.cfg;
    let eps = abc.epsilon;
    let windows: Vec<(Ratio<i64>, Ratio<i64>)> = (0..=cfg.max_words).map(|g| line_window(cfg, g)).collect();
    let fits = |width: i64, gaps: usize| {
        let w = Ratio::from_integer(width);
        windows[gaps].0 <= w && w <= windows[gaps].1
    };
    let last_line = cfg.n_lines - 1;
    let closes = |set: &BTreeSet<(usize, usize, i64)>| {
        set.iter()
            .any(|&(line, gaps, width)| line == last_line && fits(width + abc.period_width, gaps))
    };
    LayeredCompiler::new(cfg.max_words, abc.labels.clone()).compile(
        Layout::Open(BTreeSet::new()),
        |depth, state, out| {
            let Layout::Open(set) = state else {
                out.push((eps, Layout::Closed));
                return;
            };
            for &l in &domains[depth] {
                if l == eps {
                    if closes(set) {
                        out.push((eps, Layout::Closed));
                    }
                    continue;
                }
                let w = abc.width[l.index()];
                let mut next = BTreeSet::new();
                if depth == 0 {
                    next.insert((0, 0, w));
                }
                for &(line, gaps, width) in set {
                    // A line only gets wider, and its window only narrower.
                    if Ratio::from_integer(width + w) <= windows[gaps + 1].1 {
                        next.insert((line, gaps + 1, width + w));
                    }
                    if line < last_line && fits(width, gaps) {
                        next.insert((line + 1, 0, w));
                    }
                }
                let remaining = cfg.max_words - depth - 1;
                next.retain(|&(line, _, _)| last_line - line <= remaining);
                if !next.is_empty() {
                    out.push((l, Layout::Open(next)));
                }
            }
        },
        |state| match state {
            Layout::Closed => true,
            Layout::Open(set) => closes(set),
        },
    )
}
