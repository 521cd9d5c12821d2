//! The n-gram trie: one reduced fixed-depth MDD per n-gram position.
//!
//! All three diagrams share one label table, so a word has the same
//! [`LabelId`] whichever position it is looked up in.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{NGram, Position};
use crate::error::{Error, Result};
use crate::mdd::{Label, LabelId, LabelTable, Mdd, TupleBuilder};

/// Which stored positions a successor query accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WantPosition {
    Any,
    Middle,
    Final,
}

/// "Which words can follow these n−1 words?"
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuffixQuery {
    pub words: Vec<String>,
    pub want_position: WantPosition,
}

impl SuffixQuery {
    pub fn new<S: AsRef<str>>(words: &[S], want_position: WantPosition) -> Self {
        SuffixQuery {
            words: words.iter().map(|w| w.as_ref().to_owned()).collect(),
            want_position,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MddTrie {
    n: usize,
    labels: Arc<LabelTable>,
    initial: Mdd,
    middle: Mdd,
    final_: Mdd,
}

impl MddTrie {
    /// Inserts every n-gram as a path of its position's trie and reduces.
    pub fn build<'a, I>(n: usize, ngrams: I) -> Result<MddTrie>
    where
        I: IntoIterator<Item = &'a NGram>,
    {
        let mut table = LabelTable::new();
        let mut builders = [TupleBuilder::new(n), TupleBuilder::new(n), TupleBuilder::new(n)];
        let mut ids = Vec::with_capacity(n);
        for g in ngrams {
            if g.n() != n {
                return Err(Error::MixedArity { first: n, other: g.n() });
            }
            ids.clear();
            ids.extend(g.words.iter().map(|w| table.intern(Label::word(w.surface.as_str()))));
            builders[slot(g.position)].insert(&ids)?;
        }
        let labels = Arc::new(table);
        let [i, m, f] = builders.map(|b| b.build(labels.clone()));
        Ok(MddTrie {
            n,
            labels,
            initial: i,
            middle: m,
            final_: f,
        })
    }

    /// Total node count of the three unreduced prefix trees, for comparison
    /// with the reduced tries.
    pub fn prefix_tree_nodes<'a, I>(n: usize, ngrams: I) -> Result<usize>
    where
        I: IntoIterator<Item = &'a NGram>,
    {
        let mut table = LabelTable::new();
        let mut builders = [TupleBuilder::new(n), TupleBuilder::new(n), TupleBuilder::new(n)];
        for g in ngrams {
            let ids: Vec<LabelId> = g.words.iter().map(|w| table.intern(Label::word(w.surface.as_str()))).collect();
            builders[slot(g.position)].insert(&ids)?;
        }
        let labels = Arc::new(table);
        Ok(builders.iter().map(|b| b.build_prefix_tree(labels.clone()).node_count()).sum())
    }

    /// The n-gram order.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &Arc<LabelTable> {
        &self.labels
    }

    pub fn trie(&self, position: Position) -> &Mdd {
        match position {
            Position::Initial => &self.initial,
            Position::Middle => &self.middle,
            Position::Final => &self.final_,
        }
    }

    pub fn is_empty(&self) -> bool {
        Position::ALL.iter().all(|&p| self.trie(p).is_empty())
    }

    /// Number of stored n-grams; an n-gram stored at two positions counts twice.
    pub fn ngram_count(&self) -> BigUint {
        Position::ALL.iter().map(|&p| self.trie(p).count_paths()).sum()
    }

    /// Words `w` such that `(suffix, w)` is stored at `position`, as label
    /// ids in ascending id order. `suffix` must hold `n − 1` ids.
    pub fn successor_ids(&self, position: Position, suffix: &[LabelId]) -> Vec<LabelId> {
        let trie = self.trie(position);
        match trie.walk(suffix) {
            Some(node) if suffix.len() + 1 == self.n => trie.edges(self.n - 1, node).iter().map(|e| e.label).collect(),
            _ => Vec::new(),
        }
    }

    pub fn successors(&self, q: &SuffixQuery) -> Result<BTreeSet<String>> {
        if q.words.len() + 1 != self.n {
            return Err(Error::Arity {
                expected: self.n.saturating_sub(1),
                found: q.words.len(),
            });
        }
        let Some(suffix) = self.lookup(&q.words) else {
            return Ok(BTreeSet::new());
        };
        let positions: &[Position] = match q.want_position {
            WantPosition::Any => &Position::ALL,
            WantPosition::Middle => &[Position::Middle],
            WantPosition::Final => &[Position::Final],
        };
        Ok(positions
            .iter()
            .flat_map(|&p| self.successor_ids(p, &suffix))
            .filter_map(|id| self.labels.label(id).as_word().map(str::to_owned))
            .collect())
    }

    /// True iff `g` was inserted with its position.
    pub fn membership(&self, g: &NGram) -> Result<bool> {
        if g.n() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                found: g.n(),
            });
        }
        let words: Vec<&str> = g.words.iter().map(|t| t.as_str()).collect();
        Ok(self
            .lookup(&words)
            .and_then(|ids| self.trie(g.position).walk(&ids))
            .is_some())
    }

    /// Label ids of `words`, or `None` if one of them never occurs.
    pub fn lookup<S: AsRef<str>>(&self, words: &[S]) -> Option<Vec<LabelId>> {
        words.iter().map(|w| self.labels.get(&Label::word(w.as_ref()))).collect()
    }

    /// Hex SHA-256 of the label table contents.
    pub fn label_checksum(&self) -> String {
        label_checksum(&self.labels)
    }

    /// Writes `initial.mdd`, `middle.mdd`, `final.mdd` and `manifest.json`
    /// into `dir`, creating it if needed.
    pub fn save(&self, dir: &Path) -> Result<TrieManifest> {
        fs::create_dir_all(dir).map_err(Error::file(dir))?;
        let mut files = BTreeMap::new();
        for p in Position::ALL {
            let name = format!("{p}.mdd");
            let path = dir.join(&name);
            let mut bytes = Vec::new();
            self.trie(p).write_to(&mut bytes)?;
            fs::write(&path, &bytes).map_err(Error::file(&path))?;
            let trie = self.trie(p);
            files.insert(
                p,
                TrieFile {
                    path: name,
                    sha256: hex::encode(Sha256::digest(&bytes)),
                    paths: trie.count_paths().to_string(),
                    nodes: trie.node_count(),
                    arcs: trie.arc_count(),
                },
            );
        }
        let manifest = TrieManifest {
            format: MANIFEST_FORMAT.to_owned(),
            n: self.n,
            labels: self.labels.len(),
            label_checksum: self.label_checksum(),
            files,
        };
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(&manifest).expect("manifest encodes");
        fs::write(&path, json + "\n").map_err(Error::file(&path))?;
        Ok(manifest)
    }

    /// Loads a bundle written by [`MddTrie::save`], verifying file hashes and
    /// that the three diagrams share the recorded label table.
    pub fn load(dir: &Path) -> Result<MddTrie> {
        let path = dir.join("manifest.json");
        let text = fs::read_to_string(&path).map_err(Error::file(&path))?;
        let manifest: TrieManifest =
            serde_json::from_str(&text).map_err(|e| Error::format(path.display().to_string(), e.line(), e.to_string()))?;
        if manifest.format != MANIFEST_FORMAT {
            return Err(Error::format(path.display().to_string(), 1, "unsupported trie bundle format"));
        }
        let mut tries = Vec::with_capacity(3);
        for p in Position::ALL {
            let entry = manifest
                .files
                .get(&p)
                .ok_or_else(|| Error::format(path.display().to_string(), 1, format!("missing {p} trie")))?;
            let file = dir.join(&entry.path);
            let bytes = fs::read(&file).map_err(Error::file(&file))?;
            if hex::encode(Sha256::digest(&bytes)) != entry.sha256 {
                return Err(Error::HashMismatch { path: file });
            }
            let mdd = Mdd::read_from(&bytes[..], &file.display().to_string())?;
            if mdd.arity() != manifest.n {
                return Err(Error::Arity {
                    expected: manifest.n,
                    found: mdd.arity(),
                });
            }
            tries.push(mdd);
        }
        let labels = tries[0].labels().clone();
        if label_checksum(&labels) != manifest.label_checksum {
            return Err(Error::HashMismatch { path });
        }
        let mut shared = tries.into_iter().map(|m| {
            m.share_labels(&labels)
                .ok_or_else(|| Error::Invariant("trie bundle label tables differ".into()))
        });
        let (initial, middle, final_) = (
            shared.next().expect("three tries")?,
            shared.next().expect("three tries")?,
            shared.next().expect("three tries")?,
        );
        Ok(MddTrie {
            n: manifest.n,
            labels,
            initial,
            middle,
            final_,
        })
    }
}

fn slot(p: Position) -> usize {
    match p {
        Position::Initial => 0,
        Position::Middle => 1,
        Position::Final => 2,
    }
}

fn label_checksum(labels: &LabelTable) -> String {
    let mut h = Sha256::new();
    for (_, l) in labels.iter() {
        h.update(serde_json::to_vec(l).expect("label encodes"));
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

const MANIFEST_FORMAT: &str = "mnread-trie 1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrieFile {
    pub path: String,
    pub sha256: String,
    /// Decimal path count.
    pub paths: String,
    pub nodes: usize,
    pub arcs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrieManifest {
    pub format: String,
    pub n: usize,
    pub labels: usize,
    pub label_checksum: String,
    pub files: BTreeMap<Position, TrieFile>,
}

type SuccessorKey = (Position, Box<[LabelId]>);

/// Per-worker cache of successor lists keyed by position and suffix.
#[derive(Debug)]
pub struct SuccessorMemo<'a> {
    trie: &'a MddTrie,
    cache: HashMap<SuccessorKey, Arc<[LabelId]>>,
    hits: usize,
}

impl<'a> SuccessorMemo<'a> {
    pub fn new(trie: &'a MddTrie) -> Self {
        SuccessorMemo {
            trie,
            cache: HashMap::new(),
            hits: 0,
        }
    }

    pub fn get(&mut self, position: Position, suffix: &[LabelId]) -> Arc<[LabelId]> {
        if let Some(hit) = self.cache.get(&(position, Box::from(suffix))) {
            self.hits += 1;
            return hit.clone();
        }
        let found: Arc<[LabelId]> = self.trie.successor_ids(position, suffix).into();
        self.cache.insert((position, Box::from(suffix)), found.clone());
        found
    }

    /// Number of queries answered from the cache.
    pub fn hits(&self) -> usize {
        self.hits
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }
}
