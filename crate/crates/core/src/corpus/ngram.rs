use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Token;
use crate::error::{Error, Result};

/// Where an n-gram sat in its sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Initial,
    Middle,
    Final,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Initial, Position::Middle, Position::Final];

    pub fn as_str(self) -> &'static str {
        match self {
            Position::Initial => "initial",
            Position::Middle => "middle",
            Position::Final => "final",
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "initial" => Ok(Position::Initial),
            "middle" => Ok(Position::Middle),
            "final" => Ok(Position::Final),
            _ => Err(Error::Config(format!("unknown n-gram position {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NGram {
    pub position: Position,
    pub words: Vec<Token>,
}

impl NGram {
    pub fn new<S: AsRef<str>>(position: Position, words: &[S]) -> Self {
        NGram {
            position,
            words: words.iter().map(|w| Token::new(w.as_ref())).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.words.len()
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t", self.position)?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&w.surface)?;
        }
        Ok(())
    }
}

/// A deduplicated set of n-grams of one order, kept sorted.
pub type NGramSet = BTreeSet<NGram>;

/// Sliding windows of `n` tokens. The first window is initial, the last is
/// final and the rest are middle; a sentence of exactly `n` tokens yields
/// its single window twice, once initial and once final.
pub fn extract_ngrams(tokens: &[Token], n: usize) -> Vec<NGram> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    let windows = tokens.len() - n + 1;
    let window = |i: usize, position| NGram {
        position,
        words: tokens[i..i + n].to_vec(),
    };
    if windows == 1 {
        return vec![window(0, Position::Initial), window(0, Position::Final)];
    }
    (0..windows)
        .map(|i| {
            let position = match i {
                0 => Position::Initial,
                i if i + 1 == windows => Position::Final,
                _ => Position::Middle,
            };
            window(i, position)
        })
        .collect()
}

/// Writes one `position<TAB>w1 w2 … wn` record per line, in set order.
pub fn write_ngrams<W: Write>(out: &mut W, set: &NGramSet) -> Result<()> {
    for g in set {
        writeln!(out, "{g}")?;
    }
    Ok(())
}

/// Reads the format written by [`write_ngrams`]. Every record must have the
/// same order; returns it (0 for an empty file).
pub fn read_ngrams<R: BufRead>(input: R, origin: &str) -> Result<(usize, NGramSet)> {
    let mut set = NGramSet::new();
    let mut order = None;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (position, words) = line
            .split_once('\t')
            .ok_or_else(|| Error::format(origin, i + 1, "expected `position<TAB>words`"))?;
        let position: Position = position.parse().map_err(|_| Error::format(origin, i + 1, "bad position"))?;
        let words: Vec<&str> = words.split(' ').collect();
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::format(origin, i + 1, "empty word"));
        }
        match order {
            None => order = Some(words.len()),
            Some(n) if n != words.len() => {
                return Err(Error::MixedArity {
                    first: n,
                    other: words.len(),
                })
            }
            _ => {}
        }
        set.insert(NGram::new(position, &words));
    }
    Ok((order.unwrap_or(0), set))
}
