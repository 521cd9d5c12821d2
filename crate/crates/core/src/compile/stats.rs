use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::mdd::Mdd;

/// Size and cost figures of a compiled diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileStats {
    pub arcs: usize,
    pub nodes: usize,
    /// Exact solution count in decimal; may exceed 64 bits.
    pub solutions: String,
    /// Peak resident set size of the process, where the platform reports it.
    pub peak_rss_bytes: Option<u64>,
    pub elapsed_ms: u128,
}

pub fn stats(mdd: &Mdd, elapsed: Duration) -> CompileStats {
    CompileStats {
        arcs: mdd.arc_count(),
        nodes: if mdd.is_empty() { 0 } else { mdd.node_count() },
        solutions: mdd.count_paths().to_string(),
        peak_rss_bytes: peak_rss_bytes(),
        elapsed_ms: elapsed.as_millis(),
    }
}

/// High-water mark of resident memory (`VmHWM`), Linux only.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Resets the high-water mark so a later [`peak_rss_bytes`] measures one
/// phase. Returns false where unsupported.
pub fn reset_peak_rss() -> bool {
    std::fs::write("/proc/self/clear_refs", "5").is_ok()
}
