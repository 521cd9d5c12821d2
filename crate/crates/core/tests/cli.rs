mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mnread_mdd::pipeline::{Pipeline, PipelineConfig};
use mnread_mdd::scoring::stub::StubServer;
use tempfile::TempDir;

/// A scratch copy of one fixture language plus the shared font table.
fn workspace(lang: &str) -> (TempDir, PathBuf) {
    let tmp = TempDir::new().unwrap();
    let src = common::fixture_dir(lang);
    let dst = tmp.path().join(lang);
    copy_dir(&src, &dst);
    fs::copy(src.parent().unwrap().join("times.tsv"), tmp.path().join("times.tsv")).unwrap();
    let _ = fs::remove_dir_all(dst.join("out"));
    (tmp, dst)
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn mnread(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mnread"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = mnread(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join("out").join(name)).unwrap()
}

#[test]
fn stages_compose_to_run_deterministically() {
    let (_a, staged) = workspace("en");
    for stage in ["extract", "build-trie", "compile", "enumerate", "score"] {
        ok(&staged, &[stage]);
    }
    let (_b, whole) = workspace("en");
    ok(&whole, &["run", "--jobs", "2"]);
    for name in ["ngrams.tsv", "solutions.mdd", "sentences.txt", "scores.jsonl"] {
        assert_eq!(read(&staged, name), read(&whole, name), "{name}");
    }

    let text = String::from_utf8(read(&staged, "sentences.txt")).unwrap();
    assert_eq!(text.lines().count(), 41);
    let cfg = PipelineConfig::load(&staged.join("mnread.toml")).unwrap();
    let in_memory: Vec<String> = Pipeline::new(cfg)
        .generate()
        .unwrap()
        .iter()
        .map(|w| mnread_mdd::scoring::sentence_text(w))
        .collect();
    assert_eq!(in_memory, text.lines().collect::<Vec<_>>());

    let stats = ok(&staged, &["stats", "--sample", "3"]);
    assert_eq!(stats.lines().filter(|l| l.starts_with("sample: ")).count(), 3);
    assert_eq!(stats, ok(&staged, &["stats", "--sample", "3"]));
}

#[test]
fn tampered_or_missing_inputs_are_refused() {
    let (_t, dir) = workspace("fr");
    let out = mnread(&dir, &["compile"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("build-trie"));

    ok(&dir, &["extract"]);
    let ngrams = dir.join("out/ngrams.tsv");
    let mut text = fs::read_to_string(&ngrams).unwrap();
    text.push_str("initial\tLe chat dort\n");
    fs::write(&ngrams, text).unwrap();
    let out = mnread(&dir, &["build-trie"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hash"), "{}", String::from_utf8_lossy(&out.stderr));

    ok(&dir, &["extract"]);
    ok(&dir, &["build-trie"]);
    ok(&dir, &["compile"]);
    let mdd = dir.join("out/solutions.mdd");
    let mut bytes = fs::read(&mdd).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 1;
    fs::write(&mdd, bytes).unwrap();
    assert_eq!(mnread(&dir, &["enumerate"]).status.code(), Some(1));

    ok(&dir, &["compile"]);
    let cfg = dir.join("mnread.toml");
    let changed = fs::read_to_string(&cfg).unwrap().replace("box_width = 7681", "box_width = 7700");
    fs::write(&cfg, changed).unwrap();
    let out = mnread(&dir, &["enumerate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("different configuration"));
}

#[test]
fn limit_and_jsonl_output() {
    let (_t, dir) = workspace("en");
    ok(&dir, &["extract"]);
    ok(&dir, &["build-trie"]);
    ok(&dir, &["compile"]);
    let out = ok(&dir, &["enumerate", "--limit", "3", "--format", "jsonl"]);
    let manifest: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(manifest["stage"], "enumerate");
    assert_eq!(manifest["stats"]["sentences"], 3);
    assert_eq!(String::from_utf8(read(&dir, "sentences.txt")).unwrap().lines().count(), 3);

    let scores = ok(&dir, &["score", "--format", "jsonl"]);
    let ranks: Vec<u64> = scores
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [1, 2, 3]);
}

#[test]
fn validate_reports_each_line() {
    let (_t, dir) = workspace("en");
    let file = dir.join("check.txt");
    fs::write(
        &file,
        "He saw a big black dog sleeping on the old barn on the hill.\n\nThe cat sat on the mat near the door.\n",
    )
    .unwrap();
    let out = mnread(&dir, &["validate", "check.txt"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("PASS 1:"), "{}", lines[0]);
    assert!(lines[1].starts_with("FAIL 3:") && !lines[1].contains("words") && lines[1].contains("characters"));

    fs::write(&file, "").unwrap();
    assert_eq!(ok(&dir, &["validate", "check.txt"]), "");
}

#[test]
fn scores_through_an_http_service() {
    let server = StubServer::start("stub-lm", |t| t.len() as f64).unwrap();
    let (_t, dir) = workspace("fr");
    ok(&dir, &["run"]);
    let out = ok(&dir, &["score", "--endpoint", &server.url(), "--format", "jsonl"]);
    let records: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 5);
    assert!(records.iter().all(|r| r["scorer_id"] == "http:stub-lm"));
    let ppl: Vec<f64> = records.iter().map(|r| r["ppl"].as_f64().unwrap()).collect();
    assert!(ppl.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(ppl[0], records[0]["text"].as_str().unwrap().len() as f64);
}

#[test]
fn scores_through_a_subprocess() {
    let (_t, dir) = workspace("fr");
    let cfg = dir.join("mnread.toml");
    let text = fs::read_to_string(&cfg).unwrap().replace(
        "scorer = \"markov\"",
        r#"scorer = "subprocess"
command = ["sh", "-c", "sed -E 's/.*\"id\":([0-9]+).*/{\"id\":\\1,\"ppl\":3.5}/'"]"#,
    );
    fs::write(&cfg, text).unwrap();
    ok(&dir, &["run"]);
    let scores = String::from_utf8(read(&dir, "scores.jsonl")).unwrap();
    assert_eq!(scores.lines().count(), 5);
    assert!(scores.lines().all(|l| l.contains("\"ppl\":3.5") && l.contains("subprocess:sh")));
}

#[test]
fn manifests_report_exact_counts() {
    let (_t, dir) = workspace("en");
    let fx = common::Fixture::load("en");
    let expected = common::oracle(&fx.extraction.ngrams, fx.cfg.n, &fx.rules(), &fx.fonts);
    ok(&dir, &["extract"]);
    let trie: serde_json::Value = serde_json::from_str(ok(&dir, &["build-trie", "--format", "jsonl"]).trim()).unwrap();
    assert_eq!(trie["stats"]["total"]["paths"], fx.trie.ngram_count().to_string());
    let compile: serde_json::Value = serde_json::from_str(ok(&dir, &["compile", "--format", "jsonl"]).trim()).unwrap();
    assert_eq!(compile["stats"]["solutions"], expected.len().to_string());
    assert_eq!(compile["config_hash"], trie["config_hash"]);
    assert!(compile["corpus_hash"].is_string());
}

#[test]
fn infeasible_rules_and_empty_corpus_still_succeed() {
    let (_t, dir) = workspace("en");
    let cfg = dir.join("mnread.toml");
    let text = fs::read_to_string(&cfg).unwrap().replace("[rules]", "[rules]\nchar_budget = 300");
    fs::write(&cfg, text).unwrap();
    let out = ok(&dir, &["run"]);
    assert!(out.contains("solutions: \"0\"") && out.contains("no sentence satisfies the rules"), "{out}");
    assert!(read(&dir, "sentences.txt").is_empty());
    assert!(read(&dir, "scores.jsonl").is_empty());

    let (_u, empty) = workspace("en");
    for f in fs::read_dir(empty.join("corpus")).unwrap() {
        fs::remove_file(f.unwrap().path()).unwrap();
    }
    let out = ok(&empty, &["extract"]);
    assert!(out.contains("warning: no .txt files"), "{out}");
    assert!(read(&empty, "ngrams.tsv").is_empty());
    let out = ok(&empty, &["build-trie"]);
    assert!(out.contains("warning: trie is empty"), "{out}");
}

#[test]
fn score_records_share_one_schema() {
    let server = StubServer::start("stub", |_| 2.0).unwrap();
    let (_t, dir) = workspace("fr");
    ok(&dir, &["run"]);
    let keys = |out: &str| -> Vec<Vec<String>> {
        out.lines()
            .map(|l| {
                let v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object().unwrap().keys().cloned().collect()
            })
            .collect()
    };
    let markov = ok(&dir, &["score", "--format", "jsonl"]);
    assert_eq!(markov, ok(&dir, &["score", "--format", "jsonl"]));
    let http = ok(&dir, &["score", "--format", "jsonl", "--endpoint", &server.url()]);
    assert_eq!(keys(&markov), keys(&http));
}

#[test]
fn bad_config_is_reported() {
    let (_t, dir) = workspace("en");
    fs::write(dir.join("bad.toml"), "n = 3\n[rules]\nbox_widht = 1\n").unwrap();
    let out = mnread(&dir, &["--config", "bad.toml", "extract"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("box_widht"));
}
