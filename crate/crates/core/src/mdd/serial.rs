//! Line-based serialization.
//!
//! ```text
//! mnread-mdd 1
//! arity 3
//! terminal 1
//! labels 3
//! e
//! i 7
//! w "cat"
//! level 0 1
//! 1:0 2:1
//! ...
//! ```
//!
//! One line per node follows each `level <depth> <nodes>` header, listing
//! `label-id:child` pairs in stored order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use super::{Edge, Label, LabelId, LabelTable, Level, Mdd};
use crate::error::{Error, Result};

const MAGIC: &str = "mnread-mdd";
const VERSION: u32 = 1;

impl Mdd {
    pub fn write_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{MAGIC} {VERSION}")?;
        writeln!(out, "arity {}", self.arity())?;
        writeln!(out, "terminal {}", u8::from(self.terminal))?;
        writeln!(out, "labels {}", self.labels.len())?;
        for (_, label) in self.labels.iter() {
            match label {
                Label::Epsilon => writeln!(out, "e")?,
                Label::Int(v) => writeln!(out, "i {v}")?,
                Label::Word(w) => writeln!(out, "w {}", serde_json::to_string(w).expect("string encodes"))?,
            }
        }
        for (depth, level) in self.levels.iter().enumerate() {
            writeln!(out, "level {depth} {}", level.node_count())?;
            for node in 0..level.node_count() as u32 {
                let mut first = true;
                for e in level.edges(node) {
                    if !first {
                        out.write_all(b" ")?;
                    }
                    first = false;
                    write!(out, "{}:{}", e.label.0, e.child)?;
                }
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R, origin: &str) -> Result<Mdd> {
        let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((n, Ok(line))) => Ok((n, line)),
                Some((_, Err(e))) => Err(e.into()),
                None => Err(Error::format(origin, 0, format!("unexpected end of input, expected {what}"))),
            }
        };
        let header = |line: &(usize, String), key: &str| -> Result<u64> {
            let (n, text) = line;
            let mut parts = text.split_whitespace();
            match (parts.next(), parts.next().map(str::parse::<u64>), parts.next()) {
                (Some(k), Some(Ok(v)), None) if k == key => Ok(v),
                _ => Err(Error::format(origin, *n, format!("expected `{key} <number>`"))),
            }
        };

        let magic = next("header")?;
        if header(&magic, MAGIC)? != u64::from(VERSION) {
            return Err(Error::format(origin, magic.0, "unsupported format version"));
        }
        let arity = header(&next("arity")?, "arity")? as usize;
        let terminal = header(&next("terminal")?, "terminal")? == 1;
        let label_count = header(&next("labels")?, "labels")? as usize;

        let mut table = LabelTable::new();
        for _ in 0..label_count {
            let (n, line) = next("label")?;
            let label = match line.split_once(' ') {
                None if line == "e" => Label::Epsilon,
                Some(("i", v)) => Label::Int(v.parse().map_err(|_| Error::format(origin, n, "bad integer label"))?),
                Some(("w", w)) => Label::Word(serde_json::from_str(w).map_err(|_| Error::format(origin, n, "bad word label"))?),
                _ => return Err(Error::format(origin, n, "unknown label record")),
            };
            if table.intern(label).index() + 1 != table.len() {
                return Err(Error::format(origin, n, "duplicate label"));
            }
        }

        let mut levels = Vec::with_capacity(arity);
        for depth in 0..arity {
            let (n, line) = next("level header")?;
            let mut parts = line.split_whitespace();
            let nodes = match (parts.next(), parts.next().map(str::parse::<usize>), parts.next().map(str::parse::<usize>)) {
                (Some("level"), Some(Ok(d)), Some(Ok(nodes))) if d == depth => nodes,
                _ => return Err(Error::format(origin, n, format!("expected `level {depth} <nodes>`"))),
            };
            let mut level = Level::default();
            for _ in 0..nodes {
                let (n, line) = next("node")?;
                let edges = line
                    .split_whitespace()
                    .map(|pair| {
                        let (l, c) = pair.split_once(':')?;
                        let label = l.parse::<u32>().ok().filter(|&l| (l as usize) < label_count)?;
                        Some(Edge::new(LabelId(label), c.parse().ok()?))
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::format(origin, n, "malformed arc"))?;
                level.push_node(edges);
            }
            levels.push(level);
        }
        Ok(Mdd::from_levels(Arc::new(table), levels, terminal))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(Error::file(path))?;
        let mut out = BufWriter::new(file);
        self.write_to(&mut out).map_err(Error::file(path))?;
        out.flush().map_err(Error::file(path))
    }

    pub fn load(path: &Path) -> Result<Mdd> {
        let file = File::open(path).map_err(Error::file(path))?;
        Mdd::read_from(BufReader::new(file), &path.display().to_string())
    }
}
