use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::normalize_apostrophes;
use crate::error::{Error, Result};

/// How surface forms are matched against lemmas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CasePolicy {
    /// Try the surface form, then its lowercase form.
    #[default]
    FoldCase,
    /// Only the exact surface form is looked up.
    Exact,
}

/// The allowed vocabulary: lemmas plus an optional surface to lemma map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub allowed_lemmas: BTreeSet<String>,
    pub inflection_map: HashMap<String, String>,
    pub case_policy: CasePolicy,
    unrestricted: bool,
}

impl Lexicon {
    pub fn new(lemmas: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Lexicon {
            allowed_lemmas: lemmas.into_iter().map(|l| normalize(&l.into())).collect(),
            ..Default::default()
        }
    }

    /// Accepts every word and disables the proper-noun check.
    pub fn unrestricted() -> Self {
        Lexicon {
            unrestricted: true,
            ..Default::default()
        }
    }

    pub fn is_unrestricted(&self) -> bool {
        self.unrestricted
    }

    /// Adds `surface -> lemma`. The lemma must already be allowed.
    pub fn add_inflection(&mut self, surface: &str, lemma: &str) -> Result<()> {
        let lemma = normalize(lemma);
        if !self.allowed_lemmas.contains(&lemma) {
            return Err(Error::Config(format!("inflection {surface:?} -> {lemma:?}: unknown lemma")));
        }
        self.inflection_map.insert(normalize(surface), lemma);
        Ok(())
    }

    /// The lemma a token resolves to, if any.
    pub fn lemma_of(&self, token: &str) -> Option<String> {
        let token = normalize(token);
        let mut forms = vec![token.clone()];
        if self.case_policy == CasePolicy::FoldCase {
            let lower = token.to_lowercase();
            if lower != token {
                forms.push(lower);
            }
        }
        for form in &forms {
            if let Some(lemma) = self.inflection_map.get(form) {
                return Some(lemma.clone());
            }
        }
        forms.into_iter().find(|f| self.allowed_lemmas.contains(f))
    }

    /// True if the token, or every piece of it around apostrophes and
    /// hyphens, resolves to an allowed lemma.
    pub fn resolves(&self, token: &str) -> bool {
        if self.unrestricted || self.lemma_of(token).is_some() {
            return true;
        }
        let token = normalize(token);
        let pieces: Vec<String> = split_keep_elision(&token);
        pieces.len() > 1 && pieces.iter().all(|p| self.lemma_of(p).is_some())
    }

    pub fn len(&self) -> usize {
        self.allowed_lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed_lemmas.is_empty()
    }
}

/// `l'école` gives `l'` and `école`; `grand-mère` gives `grand` and `mère`.
fn split_keep_elision(token: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut piece = String::new();
    for c in token.chars() {
        match c {
            '\'' => {
                piece.push(c);
                out.push(std::mem::take(&mut piece));
            }
            '-' => out.push(std::mem::take(&mut piece)),
            _ => piece.push(c),
        }
    }
    out.push(piece);
    out.retain(|p| !p.is_empty());
    out
}

fn normalize(s: &str) -> String {
    normalize_apostrophes(s.trim()).nfc().collect()
}

/// Reads a lemma file (one lemma per line) and an optional two-column TSV
/// inflection file (`surface<TAB>lemma`). Blank lines and lines starting
/// with `#` are skipped.
pub fn build_lexicon(lemma_file: &Path, inflection_file: Option<&Path>) -> Result<Lexicon> {
    let open = |p: &Path| -> Result<std::io::BufReader<std::fs::File>> {
        Ok(std::io::BufReader::new(std::fs::File::open(p).map_err(Error::file(p))?))
    };
    let mut lex = read_lemmas(open(lemma_file)?, &lemma_file.display().to_string())?;
    if let Some(path) = inflection_file {
        read_inflections(&mut lex, open(path)?, &path.display().to_string())?;
    }
    Ok(lex)
}

pub(crate) fn read_lemmas<R: BufRead>(input: R, origin: &str) -> Result<Lexicon> {
    let mut lemmas = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let word = line.trim();
        if word.is_empty() || word.starts_with('#') {
            continue;
        }
        if word.chars().any(char::is_whitespace) {
            return Err(Error::format(origin, i + 1, format!("expected one lemma, got {word:?}")));
        }
        lemmas.push(word.to_owned());
    }
    Ok(Lexicon::new(lemmas))
}

pub(crate) fn read_inflections<R: BufRead>(lex: &mut Lexicon, input: R, origin: &str) -> Result<()> {
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [surface, lemma] = cols[..] else {
            return Err(Error::format(origin, i + 1, "expected `surface<TAB>lemma`"));
        };
        if surface.is_empty() || lemma.is_empty() {
            return Err(Error::format(origin, i + 1, "empty column"));
        }
        lex.add_inflection(surface, lemma)
            .map_err(|_| Error::format(origin, i + 1, format!("lemma {lemma:?} is not in the lemma list")))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemmas_are_deduplicated() {
        let lex = read_lemmas("cat\ncat\ndog\n".as_bytes(), "l").unwrap();
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn empty_lemma_file() {
        let lex = read_lemmas("".as_bytes(), "l").unwrap();
        assert!(lex.is_empty());
        assert!(!lex.resolves("cat"));
    }

    #[test]
    fn inflection_with_unknown_lemma() {
        let mut lex = read_lemmas("cat\n".as_bytes(), "l").unwrap();
        let err = read_inflections(&mut lex, "cats\tcat\nsleeps\tsleep\n".as_bytes(), "i").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn malformed_inflection_line() {
        let mut lex = read_lemmas("cat\n".as_bytes(), "l").unwrap();
        let err = read_inflections(&mut lex, "cats cat\n".as_bytes(), "i").unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }));
    }

    #[test]
    fn resolution() {
        let mut lex = Lexicon::new(["the", "cat", "sleep", "le", "école"]);
        lex.add_inflection("sleeps", "sleep").unwrap();
        assert_eq!(lex.lemma_of("sleeps").as_deref(), Some("sleep"));
        assert_eq!(lex.lemma_of("The").as_deref(), Some("the"));
        assert!(!lex.resolves("l'école"));
        lex.add_inflection("l'", "le").unwrap();
        assert!(lex.resolves("l'école"));
        assert!(lex.resolves("l\u{2019}école"));
        assert!(!lex.resolves("dog"));
    }

    #[test]
    fn exact_case_policy() {
        let mut lex = Lexicon::new(["the"]);
        lex.case_policy = CasePolicy::Exact;
        assert!(!lex.resolves("The"));
        assert!(lex.resolves("the"));
    }
}
