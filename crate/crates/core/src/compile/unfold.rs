//! Direct unfolding: one breadth-first pass over sentence positions that
//! tracks every rule in the state, merging equal states into shared nodes.

use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexSet;

use super::Alphabet;
use crate::error::Result;
use crate::mdd::{LabelId, LayeredCompiler, Mdd, Trace};
use crate::rules::{FontMetrics, LineBounds, RuleConfig};
use crate::trie::MddTrie;

/// One way of laying out the words so far: the open line, its summed word
/// width and its number of gaps. Earlier lines are already known to fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct LineCfg {
    line: u16,
    gaps: u16,
    width: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum State {
    Open {
        /// Interned last `min(words, n − 1)` words.
        history: u32,
        /// The last window allows another word after it.
        more: bool,
        /// The last window may end the sentence.
        end: bool,
        chars: i64,
        /// Every live layout, sorted. Holding the whole set keeps the
        /// diagram deterministic while all break positions are explored.
        lines: Box<[LineCfg]>,
        /// All rules hold if the sentence stops here.
        complete: bool,
    },
    Done,
}

/// A candidate next word and the flags of the window it closes.
#[derive(Clone, Copy)]
struct Step {
    word: LabelId,
    more: bool,
    end: bool,
}

struct Unfolder<'a> {
    trie: &'a MddTrie,
    abc: &'a Alphabet,
    bounds: LineBounds,
    min_len: i64,
    max_len: i64,
    histories: IndexSet<Box<[LabelId]>>,
    steps: HashMap<(u32, bool), Arc<[Step]>>,
}

/// Compiles the MDD of every valid sentence over the trie's n-grams.
pub fn unfold(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Mdd> {
    unfold_traced(trie, cfg, fonts).map(|(m, _)| m)
}

/// Like [`unfold`], also returning the frontier size of every level.
pub fn unfold_traced(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<(Mdd, Trace)> {
    let abc = Alphabet::new(trie, cfg, fonts)?;
    let (min_len, max_len) = abc.length_range();
    let mut histories = IndexSet::new();
    histories.insert(Box::from(&[][..]));
    let mut u = Unfolder {
        trie,
        abc: &abc,
        bounds: LineBounds::new(&abc.cfg, abc.cfg.max_words),
        min_len,
        max_len,
        histories,
        steps: HashMap::new(),
    };
    let root = State::Open {
        history: 0,
        more: true,
        end: false,
        chars: 0,
        lines: Box::new([]),
        complete: false,
    };
    let compiler = LayeredCompiler::new(abc.cfg.max_words, abc.labels.clone());
    Ok(compiler.compile_with_trace(
        root,
        |depth, state, out| u.expand(depth, state, out),
        |state| match state {
            State::Done => true,
            State::Open { complete, .. } => *complete,
        },
    ))
}

impl Unfolder<'_> {
    fn expand(&mut self, depth: usize, state: &State, out: &mut Vec<(LabelId, State)>) {
        let eps = self.abc.epsilon;
        let State::Open {
            history,
            more,
            chars,
            lines,
            complete,
            ..
        } = state
        else {
            out.push((eps, State::Done));
            return;
        };
        if *complete {
            out.push((eps, State::Done));
        }
        if !more {
            return;
        }
        let cfg = &self.abc.cfg;
        let n = self.trie.order();
        let words = depth + 1;
        let steps = self.steps(*history, depth);
        for step in steps.iter() {
            let w = step.word.index();
            let chars = chars + self.abc.char_len[w] + i64::from(depth > 0);
            if !self.chars_feasible(chars, words) {
                continue;
            }
            let lines = self.place(lines, self.abc.width[w], words);
            if lines.is_empty() {
                continue;
            }
            let complete = words >= n
                && step.end
                && (cfg.min_words..=cfg.max_words).contains(&words)
                && chars == cfg.char_budget as i64
                && !self.abc.non_terminal[w]
                && self.layout_closes(&lines);
            if !complete && (!step.more || words == cfg.max_words) {
                continue;
            }
            let history = self.push_history(*history, step.word);
            out.push((
                step.word,
                State::Open {
                    history,
                    more: step.more,
                    end: step.end,
                    chars,
                    lines,
                    complete,
                },
            ));
        }
    }

    /// Candidate words after `history` with `depth` words placed; memoized
    /// per history and phase.
    fn steps(&mut self, history: u32, depth: usize) -> Arc<[Step]> {
        let n = self.trie.order();
        let key = (history, depth < n);
        if let Some(found) = self.steps.get(&key) {
            return found.clone();
        }
        let prefix = &self.histories[history as usize];
        let mut steps = Vec::new();
        if depth < n {
            // Still inside the first window: follow the initial trie.
            let initial = self.trie.trie(crate::corpus::Position::Initial);
            if let Some(node) = initial.walk(prefix) {
                let mut full = prefix.to_vec();
                for e in initial.edges(depth, node) {
                    let end = depth + 1 == n && {
                        full.truncate(depth);
                        full.push(e.label);
                        self.trie.trie(crate::corpus::Position::Final).walk(&full).is_some()
                    };
                    steps.push(Step {
                        word: e.label,
                        more: true,
                        end,
                    });
                }
            }
        } else {
            use crate::corpus::Position::{Final, Middle};
            let mid = self.trie.successor_ids(Middle, prefix);
            let fin = self.trie.successor_ids(Final, prefix);
            let (mut i, mut j) = (0, 0);
            while i < mid.len() || j < fin.len() {
                let (a, b) = (mid.get(i), fin.get(j));
                let word = match (a, b) {
                    (Some(&a), Some(&b)) => a.min(b),
                    (Some(&a), None) => a,
                    (None, Some(&b)) => b,
                    (None, None) => unreachable!(),
                };
                let more = a == Some(&word);
                let end = b == Some(&word);
                i += usize::from(more);
                j += usize::from(end);
                steps.push(Step { word, more, end });
            }
        }
        let steps: Arc<[Step]> = steps.into();
        self.steps.insert(key, steps.clone());
        steps
    }

    fn push_history(&mut self, history: u32, word: LabelId) -> u32 {
        let keep = self.trie.order() - 1;
        let old = &self.histories[history as usize];
        let skip = (old.len() + 1).saturating_sub(keep);
        let next: Box<[LabelId]> = old.iter().skip(skip).copied().chain([word]).collect();
        self.histories.insert_full(next).0 as u32
    }

    /// Whether `chars` after `words` words can still reach the budget exactly.
    fn chars_feasible(&self, chars: i64, words: usize) -> bool {
        let cfg = &self.abc.cfg;
        let budget = cfg.char_budget as i64;
        let need = cfg.min_words.saturating_sub(words) as i64;
        let room = cfg.max_words.saturating_sub(words) as i64;
        chars + need * (self.min_len + 1) <= budget && chars + room * (self.max_len + 1) >= budget
    }

    /// Layouts after appending a word of width `width` as word `words`.
    fn place(&self, lines: &[LineCfg], width: i64, words: usize) -> Box<[LineCfg]> {
        let cfg = &self.abc.cfg;
        let last_line = cfg.n_lines as u16 - 1;
        let room = (cfg.max_words - words) as u16;
        let mut next: Vec<LineCfg> = Vec::with_capacity(lines.len() * 2);
        if lines.is_empty() {
            next.push(LineCfg {
                line: 0,
                gaps: 0,
                width,
            });
        }
        for l in lines {
            let grown = l.width + width;
            if !self.bounds.overflows(grown, usize::from(l.gaps) + 1) {
                next.push(LineCfg {
                    gaps: l.gaps + 1,
                    width: grown,
                    ..*l
                });
            }
            if l.line < last_line && self.bounds.fits(l.width, usize::from(l.gaps)) {
                next.push(LineCfg {
                    line: l.line + 1,
                    gaps: 0,
                    width,
                });
            }
        }
        // Lines still to open need one word each.
        next.retain(|l| last_line - l.line <= room && !self.bounds.overflows(l.width, usize::from(l.gaps)));
        next.sort_unstable();
        next.dedup();
        next.into_boxed_slice()
    }

    fn layout_closes(&self, lines: &[LineCfg]) -> bool {
        let last_line = self.abc.cfg.n_lines as u16 - 1;
        lines
            .iter()
            .any(|l| l.line == last_line && self.bounds.fits(l.width + self.abc.period_width, usize::from(l.gaps)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{extract_ngrams, NGram, Token};
    use crate::rules::check_sentence;

    fn trie(sentences: &[&str], n: usize) -> MddTrie {
        let grams: Vec<NGram> = sentences
            .iter()
            .flat_map(|s| extract_ngrams(&s.split(' ').map(Token::new).collect::<Vec<_>>(), n))
            .collect();
        MddTrie::build(n, &grams).unwrap()
    }

    fn small_cfg() -> RuleConfig {
        RuleConfig {
            min_words: 3,
            max_words: 6,
            char_budget: 11,
            n_lines: 2,
            box_width: 50,
            space_width: 10,
            non_terminal_words: Default::default(),
            ..RuleConfig::default()
        }
    }

    #[test]
    fn recombines_sentences() {
        // Monospace 10: "ab cd ef gh" is 11 chars; lines "ab cd" | "ef gh".
        let t = trie(&["ab cd ef gh", "xy cd ef zz gh"], 2);
        let m = unfold(&t, &small_cfg(), &FontMetrics::monospace(10)).unwrap();
        assert!(m.validate().is_empty());
        let got: Vec<String> = m
            .paths()
            .iter()
            .map(|p| p.iter().filter(|l| !l.is_epsilon()).map(|l| l.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        assert_eq!(got, ["ab cd ef gh", "xy cd ef gh"]);
        for s in &got {
            let words: Vec<&str> = s.split(' ').collect();
            assert!(check_sentence(&words, &small_cfg(), &FontMetrics::monospace(10)).passes());
        }
    }

    #[test]
    fn infeasible_budget_is_empty() {
        let t = trie(&["ab cd ef gh"], 2);
        let cfg = RuleConfig {
            char_budget: 12,
            ..small_cfg()
        };
        assert!(unfold(&t, &cfg, &FontMetrics::monospace(10)).unwrap().is_empty());
    }

    #[test]
    fn non_terminal_last_word() {
        let t = trie(&["ab cd ef gh"], 2);
        let mut cfg = small_cfg();
        cfg.non_terminal_words.insert("gh".into());
        assert!(unfold(&t, &cfg, &FontMetrics::monospace(10)).unwrap().is_empty());
    }

    #[test]
    fn missing_box_width() {
        let t = trie(&["ab cd ef gh"], 2);
        let cfg = RuleConfig {
            box_width: 0,
            ..small_cfg()
        };
        assert!(unfold(&t, &cfg, &FontMetrics::monospace(10)).is_err());
    }
}
