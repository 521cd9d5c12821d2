//! Sentence rules: word count, character budget and justified display.
//!
//! Widths are integers in font units. Space stretch factors are exact
//! rationals, so deciding whether a line can be justified never involves
//! floating-point rounding.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact non-negative rational such as `0.80` or `5/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor(pub Ratio<i64>);

impl Factor {
    pub fn new(numer: i64, denom: i64) -> Self {
        Factor(Ratio::new(numer, denom))
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("not an exact factor: {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Factor::new(n, d));
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
            return Err(bad());
        }
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Ok(Factor::new(int * scale + frac, scale))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Factor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How apostrophes inside words are tokenized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApostrophePolicy {
    /// `l'école` stays one token.
    #[default]
    KeepElided,
    /// `l'école` becomes `l'` and `école`.
    SplitElided,
}

/// Numeric parameters of the sentence rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleConfig {
    pub min_words: usize,
    pub max_words: usize,
    /// Characters including inter-word spaces, excluding the final period.
    pub char_budget: usize,
    pub n_lines: usize,
    pub space_min_factor: Factor,
    pub space_max_factor: Factor,
    /// Width of the text box in font units. Zero means unset.
    pub box_width: u32,
    /// Width of a normal space in font units. Zero means unset.
    pub space_width: u32,
    pub forbidden_punct: BTreeSet<char>,
    pub non_terminal_words: BTreeSet<String>,
    pub apostrophe_policy: ApostrophePolicy,
    /// Whether the final period's glyph counts towards the last line width.
    pub period_in_last_line: bool,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            min_words: 9,
            max_words: 15,
            char_budget: 59,
            n_lines: 3,
            space_min_factor: Factor::new(4, 5),
            space_max_factor: Factor::new(5, 4),
            box_width: 0,
            space_width: 0,
            forbidden_punct: ",;:\"«»“”„()[]{}…\u{2014}\u{2013}/*&#@%$|<>_~^`+=".chars().collect(),
            non_terminal_words: [
                "a", "an", "the", "and", "or", "to", "of", "but", "if", "that", "with", "for", "in", "on", "at",
                "le", "la", "les", "un", "une", "des", "et", "ou", "de", "du", "à", "au", "aux", "que", "qui", "mais",
            ]
            .into_iter()
            .map(String::from)
            .collect(),
            apostrophe_policy: ApostrophePolicy::KeepElided,
            period_in_last_line: false,
        }
    }
}

impl RuleConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.min_words == 0 || self.min_words > self.max_words {
            return fail("need 0 < min_words <= max_words");
        }
        if self.n_lines == 0 {
            return fail("n_lines must be positive");
        }
        if self.space_min_factor.0 < Ratio::from_integer(0) || self.space_min_factor >= self.space_max_factor {
            return fail("need 0 <= space_min_factor < space_max_factor");
        }
        if self.box_width == 0 {
            return fail("box_width is required (set it in the rules or with a #box_width font directive)");
        }
        if self.space_width == 0 {
            return fail("space_width is required (set it in the rules or with a #space_width font directive)");
        }
        Ok(())
    }

    /// A copy with the font's width directives applied.
    pub fn resolved(&self, fonts: &FontMetrics) -> RuleConfig {
        let mut cfg = self.clone();
        fonts.apply_directives(&mut cfg);
        cfg
    }

    pub fn is_non_terminal(&self, word: &str) -> bool {
        self.non_terminal_words.contains(word) || self.non_terminal_words.contains(&word.to_lowercase())
    }
}

/// Per-character advance widths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FontMetrics {
    pub widths: HashMap<char, u32>,
    pub default_width: Option<u32>,
    /// `#space_width` directive, overrides the rule config when present.
    pub space_width: Option<u32>,
    /// `#box_width` directive, overrides the rule config when present.
    pub box_width: Option<u32>,
}

impl FontMetrics {
    /// Every glyph, including the space, has the same width.
    pub fn monospace(width: u32) -> Self {
        FontMetrics {
            default_width: Some(width),
            space_width: Some(width),
            ..Default::default()
        }
    }

    /// Parses the TSV format: `character<TAB>width` per line, plus
    /// `#space_width N`, `#box_width N` and `#default_width N` directives.
    /// Other lines starting with `#` are comments. The literal words `space`
    /// and `tab` name those characters.
    pub fn parse<R: BufRead>(input: R, origin: &str) -> Result<Self> {
        let mut metrics = FontMetrics::default();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let n = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let number = |s: &str| -> Result<u32> {
                s.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&w| w > 0)
                    .ok_or_else(|| Error::format(origin, n, format!("expected a positive width, got {s:?}")))
            };
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                match (parts.next(), parts.next()) {
                    (Some("space_width"), Some(v)) => metrics.space_width = Some(number(v)?),
                    (Some("box_width"), Some(v)) => metrics.box_width = Some(number(v)?),
                    (Some("default_width"), Some(v)) => metrics.default_width = Some(number(v)?),
                    _ => {}
                }
                continue;
            }
            let (glyph, width) = line
                .split_once('\t')
                .ok_or_else(|| Error::format(origin, n, "expected `character<TAB>width`"))?;
            let glyph = match glyph {
                "space" => ' ',
                "tab" => '\t',
                g => {
                    let mut chars = g.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => c,
                        _ => return Err(Error::format(origin, n, format!("expected one character, got {g:?}"))),
                    }
                }
            };
            metrics.widths.insert(glyph, number(width)?);
        }
        if metrics.space_width.is_none() {
            metrics.space_width = metrics.widths.get(&' ').copied();
        }
        Ok(metrics)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(Error::file(path))?;
        FontMetrics::parse(std::io::BufReader::new(file), &path.display().to_string())
    }

    /// Copies the width directives into `cfg`.
    pub fn apply_directives(&self, cfg: &mut RuleConfig) {
        if let Some(w) = self.space_width {
            cfg.space_width = w;
        }
        if let Some(w) = self.box_width {
            cfg.box_width = w;
        }
    }

    pub fn char_width(&self, c: char) -> Option<u32> {
        self.widths.get(&c).copied().or(self.default_width)
    }

    /// Sum of the glyph widths of `word`, or the first uncovered character.
    pub fn word_width(&self, word: &str) -> std::result::Result<u32, char> {
        word.chars().map(|c| self.char_width(c).ok_or(c)).sum()
    }
}

/// Number of characters a word contributes to the character budget.
pub fn char_len(word: &str) -> usize {
    word.chars().count()
}

/// Range of summed word widths `W` for which a line with `gaps` inter-word
/// spaces can be stretched to exactly `box_width` with every space between
/// `space_min_factor` and `space_max_factor` times its normal width.
pub fn line_window(cfg: &RuleConfig, gaps: usize) -> (Ratio<i64>, Ratio<i64>) {
    let boxw = Ratio::from_integer(i64::from(cfg.box_width));
    let slack = Ratio::from_integer(gaps as i64 * i64::from(cfg.space_width));
    (boxw - cfg.space_max_factor.0 * slack, boxw - cfg.space_min_factor.0 * slack)
}

/// Integer form of [`line_window`] for every gap count up to a maximum:
/// `W` fits with `g` gaps iff `lo[g] <= W <= hi[g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBounds {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LineBounds {
    pub fn new(cfg: &RuleConfig, max_gaps: usize) -> Self {
        let (lo, hi) = (0..=max_gaps)
            .map(|g| {
                let (lo, hi) = line_window(cfg, g);
                (lo.ceil().to_integer(), hi.floor().to_integer())
            })
            .unzip();
        LineBounds { lo, hi }
    }

    pub fn fits(&self, width: i64, gaps: usize) -> bool {
        gaps < self.lo.len() && self.lo[gaps] <= width && width <= self.hi[gaps]
    }

    /// True when no continuation of a line of this width can ever fit again:
    /// adding words only widens the line and narrows the window.
    pub fn overflows(&self, width: i64, gaps: usize) -> bool {
        gaps >= self.hi.len() || width > self.hi[gaps]
    }
}

/// Outcome of [`check_sentence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceVerdict {
    pub word_count: usize,
    /// Characters including spaces, excluding the period.
    pub char_count: usize,
    pub word_count_ok: bool,
    pub char_budget_ok: bool,
    pub display_ok: bool,
    /// Word index at which each line after the first starts, when displayable.
    pub line_breaks: Option<Vec<usize>>,
    /// A character with no width in the font metrics, if any.
    pub unknown_glyph: Option<char>,
}

impl SentenceVerdict {
    pub fn passes(&self) -> bool {
        self.word_count_ok && self.char_budget_ok && self.display_ok
    }
}

/// Checks the word-count, character-budget and display rules directly on a
/// word sequence. The display rule is decided by dynamic programming over
/// line-break positions, comparing exact rational windows. Font directives
/// override the widths in `cfg`.
pub fn check_sentence<S: AsRef<str>>(words: &[S], cfg: &RuleConfig, fonts: &FontMetrics) -> SentenceVerdict {
    let cfg = &cfg.resolved(fonts);
    let count = words.len();
    let char_count = words.iter().map(|w| char_len(w.as_ref())).sum::<usize>() + count.saturating_sub(1);

    let mut unknown_glyph = None;
    let mut widths = Vec::with_capacity(count);
    for w in words {
        match fonts.word_width(w.as_ref()) {
            Ok(width) => widths.push(i64::from(width)),
            Err(c) => {
                unknown_glyph.get_or_insert(c);
                widths.push(0);
            }
        }
    }
    let period = if cfg.period_in_last_line {
        fonts.char_width('.').map(i64::from)
    } else {
        Some(0)
    };
    if period.is_none() {
        unknown_glyph.get_or_insert('.');
    }

    let line_breaks = if unknown_glyph.is_none() && count > 0 {
        display_split(&widths, cfg, period.unwrap_or(0))
    } else {
        None
    };

    SentenceVerdict {
        word_count: count,
        char_count,
        word_count_ok: (cfg.min_words..=cfg.max_words).contains(&count),
        char_budget_ok: char_count == cfg.char_budget,
        display_ok: line_breaks.is_some(),
        line_breaks,
        unknown_glyph,
    }
}

/// Finds a split of `widths` into exactly `cfg.n_lines` non-empty lines,
/// each justifiable. Returns the start index of lines 2..n.
fn display_split(widths: &[i64], cfg: &RuleConfig, period: i64) -> Option<Vec<usize>> {
    let count = widths.len();
    let lines = cfg.n_lines;
    let fits = |from: usize, to: usize, last: bool| {
        let w: i64 = widths[from..to].iter().sum::<i64>() + if last { period } else { 0 };
        let (lo, hi) = line_window(cfg, to - from - 1);
        let w = Ratio::from_integer(w);
        lo <= w && w <= hi
    };
    // parent[l][i]: start of line l when lines 0..=l cover words[..i].
    let mut parent = vec![vec![None::<usize>; count + 1]; lines];
    for (end, slot) in parent[0].iter_mut().enumerate().skip(1) {
        if fits(0, end, lines == 1 && end == count) {
            *slot = Some(0);
        }
    }
    for l in 1..lines {
        for end in 1..=count {
            let last = l + 1 == lines && end == count;
            parent[l][end] = (l..end).find(|&start| parent[l - 1][start].is_some() && fits(start, end, last));
        }
    }
    parent[lines - 1][count]?;
    let mut breaks = Vec::with_capacity(lines - 1);
    let mut end = count;
    for l in (1..lines).rev() {
        let start = parent[l][end]?;
        breaks.push(start);
        end = start;
    }
    breaks.reverse();
    Some(breaks)
}
