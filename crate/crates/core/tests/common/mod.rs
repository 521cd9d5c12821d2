//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mnread_mdd::corpus::{build_lexicon, extract_corpus, Extraction, NGramSet, Position, SourceText};
use mnread_mdd::mdd::{Edge, Label, LabelTable, Mdd};
use mnread_mdd::pipeline::PipelineConfig;
use mnread_mdd::rules::{Factor, FontMetrics, RuleConfig};
use mnread_mdd::trie::MddTrie;

pub fn fixture_dir(lang: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture").join(lang)
}

pub struct Fixture {
    pub cfg: PipelineConfig,
    pub extraction: Extraction,
    pub trie: MddTrie,
    pub fonts: FontMetrics,
}

impl Fixture {
    pub fn load(lang: &str) -> Fixture {
        let cfg = PipelineConfig::load(&fixture_dir(lang).join("mnread.toml")).unwrap();
        let lex = build_lexicon(cfg.lemmas.as_deref().unwrap(), cfg.inflections.as_deref()).unwrap();
        let sources = SourceText::read_dir(&cfg.corpus_dir).unwrap();
        let extraction = extract_corpus(&sources, &lex, &cfg.rules, cfg.n);
        let trie = MddTrie::build(cfg.n, &extraction.ngrams).unwrap();
        let fonts = FontMetrics::load(cfg.font.as_deref().unwrap()).unwrap();
        Fixture {
            cfg,
            extraction,
            trie,
            fonts,
        }
    }

    pub fn rules(&self) -> RuleConfig {
        self.cfg.rules.clone()
    }
}

/// Sentences of a solution diagram with the padding removed.
pub fn sentences(mdd: &Mdd) -> BTreeSet<Vec<String>> {
    mdd.path_set()
        .into_iter()
        .map(|p| p.into_iter().filter_map(|l| l.as_word().map(str::to_owned)).collect())
        .collect()
}

/// `words` padded with the empty word up to `arity`.
pub fn padded<S: AsRef<str>>(words: &[S], arity: usize) -> Vec<Label> {
    let mut out: Vec<Label> = words.iter().map(|w| Label::word(w.as_ref())).collect();
    out.resize(arity.max(out.len()), Label::Epsilon);
    out
}

fn width(fonts: &FontMetrics, word: &str) -> Option<i128> {
    word.chars().map(|c| fonts.char_width(c).map(i128::from)).sum()
}

/// Whether a line of total glyph width `w` and `gaps` spaces stretches to the
/// box with every space inside the allowed factor range, by cross
/// multiplication.
fn line_ok(cfg: &RuleConfig, w: i128, gaps: i128) -> bool {
    let boxw = i128::from(cfg.box_width);
    let space = i128::from(cfg.space_width);
    if gaps == 0 {
        return w == boxw;
    }
    let (lo, hi) = (cfg.space_min_factor.0, cfg.space_max_factor.0);
    let rest = boxw - w;
    let (ln, ld) = (i128::from(*lo.numer()), i128::from(*lo.denom()));
    let (hn, hd) = (i128::from(*hi.numer()), i128::from(*hi.denom()));
    ln * space * gaps <= ld * rest && hd * rest <= hn * space * gaps
}

/// Brute-force display check: tries every placement of the line breaks.
pub fn display_ok(words: &[String], cfg: &RuleConfig, fonts: &FontMetrics) -> bool {
    let cfg = cfg.resolved(fonts);
    let Some(widths) = words.iter().map(|w| width(fonts, w)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let period = if cfg.period_in_last_line {
        match fonts.char_width('.') {
            Some(p) => i128::from(p),
            None => return false,
        }
    } else {
        0
    };
    fn place(widths: &[i128], start: usize, lines_left: usize, cfg: &RuleConfig, period: i128) -> bool {
        let count = widths.len();
        if lines_left == 1 {
            let w: i128 = widths[start..].iter().sum::<i128>() + period;
            return start < count && line_ok(cfg, w, (count - start - 1) as i128);
        }
        (start + 1..count).any(|end| {
            line_ok(cfg, widths[start..end].iter().sum(), (end - start - 1) as i128)
                && place(widths, end, lines_left - 1, cfg, period)
        })
    }
    cfg.n_lines > 0 && !words.is_empty() && place(&widths, 0, cfg.n_lines, &cfg, period)
}

fn non_terminal(cfg: &RuleConfig, w: &str) -> bool {
    cfg.non_terminal_words.contains(w) || cfg.non_terminal_words.contains(&w.to_lowercase())
}

/// Generate-and-test over n-gram successions: every word sequence whose
/// first window is initial, whose inner windows are middle and whose last
/// window is final, kept when it meets the count, budget, display and
/// final-word rules. Only the character budget prunes the search.
pub fn oracle(ngrams: &NGramSet, n: usize, cfg: &RuleConfig, fonts: &FontMetrics) -> BTreeSet<Vec<String>> {
    let cfg = cfg.resolved(fonts);
    let mut by_pos: HashMap<Position, HashSet<Vec<String>>> = HashMap::new();
    let mut vocab = BTreeSet::new();
    for g in ngrams {
        let words: Vec<String> = g.words.iter().map(|t| t.as_str().to_owned()).collect();
        vocab.extend(words.iter().cloned());
        by_pos.entry(g.position).or_default().insert(words);
    }
    let empty = HashSet::new();
    let initial = by_pos.get(&Position::Initial).unwrap_or(&empty);
    let middle = by_pos.get(&Position::Middle).unwrap_or(&empty);
    let fin = by_pos.get(&Position::Final).unwrap_or(&empty);

    struct Search<'a> {
        n: usize,
        cfg: &'a RuleConfig,
        fonts: &'a FontMetrics,
        middle: &'a HashSet<Vec<String>>,
        fin: &'a HashSet<Vec<String>>,
        vocab: Vec<String>,
        out: BTreeSet<Vec<String>>,
    }

    impl Search<'_> {
        fn chars(seq: &[String]) -> usize {
            seq.iter().map(|w| w.chars().count()).sum::<usize>() + seq.len() - 1
        }

        fn visit(&mut self, seq: &mut Vec<String>) {
            let len = seq.len();
            if Self::chars(seq) > self.cfg.char_budget || len > self.cfg.max_words {
                return;
            }
            let last_window = seq[len - self.n..].to_vec();
            if len >= self.cfg.min_words
                && Self::chars(seq) == self.cfg.char_budget
                && !non_terminal(self.cfg, &seq[len - 1])
                && self.fin.contains(&last_window)
                && display_ok(seq, self.cfg, self.fonts)
            {
                self.out.insert(seq.clone());
            }
            // Extending turns the current last window into an inner one,
            // except for the first window, which stays initial.
            if len > self.n && !self.middle.contains(&last_window) {
                return;
            }
            for i in 0..self.vocab.len() {
                let mut next = seq[len - self.n + 1..].to_vec();
                next.push(self.vocab[i].clone());
                if self.middle.contains(&next) || self.fin.contains(&next) {
                    seq.push(self.vocab[i].clone());
                    self.visit(seq);
                    seq.pop();
                }
            }
        }
    }

    let mut search = Search {
        n,
        cfg: &cfg,
        fonts,
        middle,
        fin,
        vocab: vocab.into_iter().collect(),
        out: BTreeSet::new(),
    };
    let mut starts: Vec<&Vec<String>> = initial.iter().collect();
    starts.sort();
    for g in starts {
        search.visit(&mut g.clone());
    }
    search.out
}

/// Sentences that break exactly one rule, built around a fixture.
pub struct NearMisses {
    /// One word swapped for a word one character shorter or longer.
    pub chars_58: Vec<Vec<String>>,
    pub chars_60: Vec<Vec<String>>,
    /// Budget-exact sentences with one word too few or too many.
    pub words_8: Vec<Vec<String>>,
    pub words_16: Vec<Vec<String>>,
    /// Typed, count- and budget-valid successions with no justified layout.
    pub display: Vec<Vec<String>>,
    /// The same successions that do have a layout.
    pub displayable: Vec<Vec<String>>,
}

impl NearMisses {
    pub fn build(fx: &Fixture, cfg: &RuleConfig, seed: u64) -> NearMisses {
        use rand::seq::SliceRandom;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strict = oracle(&fx.extraction.ngrams, fx.cfg.n, cfg, &fx.fonts);
        let vocab: Vec<String> = fx
            .extraction
            .ngrams
            .iter()
            .flat_map(|g| g.words.iter().map(|t| t.as_str().to_owned()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let len = |w: &String| w.chars().count();

        let (mut chars_58, mut chars_60) = (Vec::new(), Vec::new());
        for s in &strict {
            for i in 0..s.len() {
                for v in &vocab {
                    let mut m = s.clone();
                    m[i] = v.clone();
                    if len(v) + 1 == len(&s[i]) {
                        chars_58.push(m);
                    } else if len(v) == len(&s[i]) + 1 {
                        chars_60.push(m);
                    }
                }
            }
        }

        let mut random_exact = |count: usize| {
            let mut found = Vec::new();
            for _ in 0..200_000 {
                if found.len() == 50 {
                    break;
                }
                let mut words: Vec<String> = (0..count - 1).map(|_| vocab.choose(&mut rng).unwrap().clone()).collect();
                let used: usize = words.iter().map(len).sum::<usize>() + count - 1;
                let Some(need) = cfg.char_budget.checked_sub(used) else { continue };
                let fits: Vec<&String> = vocab.iter().filter(|v| len(v) == need).collect();
                if let Some(last) = fits.choose(&mut rng) {
                    words.insert(rng.gen_range(0..count), (*last).clone());
                    found.push(words);
                }
            }
            found
        };
        let words_8 = random_exact(cfg.min_words - 1);
        let words_16 = random_exact(cfg.max_words + 1);

        let mut relaxed = cfg.clone();
        relaxed.n_lines = 1;
        relaxed.box_width = 1_000_000;
        relaxed.space_width = 1;
        relaxed.space_min_factor = Factor::new(0, 1);
        relaxed.space_max_factor = Factor::new(1_000_000, 1);
        let resolved = cfg.resolved(&fx.fonts);
        let (displayable, display): (Vec<_>, Vec<_>) = oracle(&fx.extraction.ngrams, fx.cfg.n, &relaxed, &without_directives(&fx.fonts))
            .into_iter()
            .partition(|s| display_ok(s, &resolved, &fx.fonts));

        NearMisses {
            chars_58,
            chars_60,
            words_8,
            words_16,
            display,
            displayable,
        }
    }
}

/// Font metrics without width directives, so the rule widths apply.
pub fn without_directives(fonts: &FontMetrics) -> FontMetrics {
    FontMetrics {
        space_width: None,
        box_width: None,
        ..fonts.clone()
    }
}

/// A random deterministic layered diagram, possibly with dead ends and
/// duplicate subgraphs, together with its paths found by plain DFS.
pub fn random_raw(seed: u64) -> (Mdd, BTreeSet<Vec<Label>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = rng.gen_range(1..=5);
    let mut table = LabelTable::new();
    let ids: Vec<_> = (0..4).map(|i| table.intern(Label::Int(i))).collect();
    let widths: Vec<usize> = (0..=arity)
        .map(|d| if d == 0 || d == arity { 1 } else { rng.gen_range(1..=4) })
        .collect();
    let levels: Vec<Vec<Vec<Edge>>> = (0..arity)
        .map(|d| {
            (0..widths[d])
                .map(|_| {
                    let mut edges = Vec::new();
                    for &l in &ids {
                        if rng.gen_bool(0.6) {
                            edges.push(Edge::new(l, rng.gen_range(0..widths[d + 1]) as u32));
                        }
                    }
                    edges
                })
                .collect()
        })
        .collect();
    let mut paths = BTreeSet::new();
    fn dfs(levels: &[Vec<Vec<Edge>>], d: usize, node: usize, path: &mut Vec<Label>, out: &mut BTreeSet<Vec<Label>>) {
        if d == levels.len() {
            out.insert(path.clone());
            return;
        }
        for e in &levels[d][node] {
            path.push(Label::Int(e.label.0 as i64));
            dfs(levels, d + 1, e.child as usize, path, out);
            path.pop();
        }
    }
    dfs(&levels, 0, 0, &mut Vec::new(), &mut paths);
    (Mdd::from_raw_parts(Arc::new(table), levels, true), paths)
}


/// The fixture rules plus variants that move the box, the spacing, the
/// period and the line count.
pub fn variants(base: &RuleConfig) -> Vec<(&'static str, RuleConfig)> {
    let mut out = vec![("fixture", base.clone())];
    let mut wide = base.clone();
    wide.box_width = 7700;
    out.push(("box 7700", wide));
    let mut narrow = base.clone();
    narrow.box_width = 7300;
    out.push(("box 7300", narrow));
    let mut period = base.clone();
    period.period_in_last_line = true;
    out.push(("period counted", period));
    let mut loose = base.clone();
    loose.space_min_factor = Factor::new(1, 2);
    loose.space_max_factor = Factor::new(2, 1);
    out.push(("loose spaces", loose));
    let mut two = base.clone();
    two.n_lines = 2;
    two.box_width = 11500;
    out.push(("two lines", two));
    let mut short = base.clone();
    short.char_budget = 40;
    short.min_words = 6;
    short.max_words = 10;
    short.box_width = 5200;
    out.push(("short", short));
    out
}

