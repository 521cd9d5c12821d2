//! Acceptance suite: one PASS or FAIL line per criterion, nonzero exit on
//! any failure. Run with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle, padded, random_raw, sentences, variants, Fixture, NearMisses};
use mnread_mdd::compile::{compile_via_intersection, peak_rss_bytes, reset_peak_rss, unfold};
use mnread_mdd::corpus::{synthetic_ngrams, NGram, Position, SyntheticShape};
use mnread_mdd::mdd::{Edge, Label, LabelTable, Mdd};
use mnread_mdd::rules::{check_sentence, FontMetrics, RuleConfig};
use mnread_mdd::scoring::{perplexity, train_markov, ConditionalModel};
use mnread_mdd::trie::{MddTrie, SuffixQuery, WantPosition};

const GIB: u64 = 1 << 30;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn enumerated_len(m: &Mdd) -> usize {
    m.enumerate(None, |_| {})
}

fn sum_oracle() -> Outcome {
    let t = Instant::now();
    let domains = [vec![1, 3, 7], vec![0, 2, 4], vec![2, 3, 4]];
    let mdd = Mdd::sum(&domains, 5, 9);
    let mut brute = BTreeSet::new();
    for &a in &domains[0] {
        for &b in &domains[1] {
            for &c in &domains[2] {
                if (5..=9).contains(&(a + b + c)) {
                    brute.insert(vec![Label::Int(a), Label::Int(b), Label::Int(c)]);
                }
            }
        }
    }
    let elapsed = t.elapsed();
    check(mdd.path_set() == brute, || "path set differs from the 27-tuple brute force".into())?;
    check(mdd.count_paths() == BigUint::from(brute.len()), || "count differs".into())?;
    check(enumerated_len(&mdd) == brute.len(), || "enumeration length differs".into())?;
    check(mdd.contains(&[Label::Int(7), Label::Int(0), Label::Int(2)]), || "(7,0,2) missing".into())?;
    within(elapsed, Duration::from_secs(1), "sum MDD")?;
    Ok(format!("{} of 27 tuples, contains (7,0,2), {elapsed:?}", brute.len()))
}

fn trie_oracle() -> Outcome {
    let t = Instant::now();
    let grams: Vec<NGram> = [
        (Position::Initial, "The black cat"),
        (Position::Initial, "The white cat"),
        (Position::Initial, "A red apple"),
        (Position::Middle, "black cat sleeps"),
        (Position::Middle, "white cat loves"),
        (Position::Final, "cat loves milk"),
    ]
    .iter()
    .map(|(p, s)| NGram::new(*p, &s.split(' ').collect::<Vec<_>>()))
    .collect();
    let trie = MddTrie::build(3, &grams).map_err(|e| e.to_string())?;
    let got = trie
        .successors(&SuffixQuery::new(&["white", "cat"], WantPosition::Any))
        .map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(got == BTreeSet::from(["loves".to_owned()]), || format!("successors(white, cat) = {got:?}"))?;
    within(elapsed, Duration::from_secs(1), "trie query")?;
    Ok(format!("successors(white, cat) = {{loves}}, {elapsed:?}"))
}

fn exactness() -> Outcome {
    let mut notes = Vec::new();
    for lang in ["en", "fr"] {
        let fx = Fixture::load(lang);
        let vocab: BTreeSet<&str> = fx.extraction.ngrams.iter().flat_map(|g| g.words.iter().map(|t| t.as_str())).collect();
        check(fx.extraction.report.sentences <= 60, || format!("{lang}: more than 60 sentences"))?;
        check(vocab.len() <= 120, || format!("{lang}: vocabulary of {}", vocab.len()))?;
        check(fx.cfg.n == 3, || format!("{lang}: n = {}", fx.cfg.n))?;
        let cfg = fx.rules();
        let t = Instant::now();
        let expected = oracle(&fx.extraction.ngrams, fx.cfg.n, &cfg, &fx.fonts);
        let oracle_time = t.elapsed();
        let got = sentences(&unfold(&fx.trie, &cfg, &fx.fonts).map_err(|e| e.to_string())?);
        check(got == expected, || {
            format!(
                "{lang}: {} extra, {} missing",
                got.difference(&expected).count(),
                expected.difference(&got).count()
            )
        })?;
        check(!expected.is_empty(), || format!("{lang}: empty solution set proves little"))?;
        within(oracle_time, Duration::from_secs(60), "oracle")?;
        notes.push(format!("{lang} {} sentences, oracle {:.1?}", expected.len(), oracle_time));
    }
    Ok(notes.join("; "))
}

fn cross_method() -> Outcome {
    let mut checked = 0;
    let mut paths = 0usize;
    for lang in ["en", "fr"] {
        let fx = Fixture::load(lang);
        for (name, cfg) in variants(&fx.rules()) {
            let a = unfold(&fx.trie, &cfg, &fx.fonts).map_err(|e| e.to_string())?;
            let b = compile_via_intersection(&fx.trie, &cfg, &fx.fonts).map_err(|e| e.to_string())?;
            check(a.path_set() == b.path_set(), || format!("{lang} {name}: path sets differ"))?;
            checked += 1;
            paths += enumerated_len(&a);
        }
    }
    Ok(format!("{checked} fixture configurations, {paths} paths"))
}

fn validator_closure() -> Outcome {
    let mut counts = [0usize; 6];
    for lang in ["en", "fr"] {
        let fx = Fixture::load(lang);
        let cfg = fx.rules();
        let mdd = unfold(&fx.trie, &cfg, &fx.fonts).map_err(|e| e.to_string())?;
        for s in sentences(&mdd) {
            check(check_sentence(&s, &cfg, &fx.fonts).passes(), || format!("{lang}: enumerated {s:?} rejected"))?;
            counts[0] += 1;
        }
        let nm = NearMisses::build(&fx, &cfg, 0xACCE);
        for (i, (kind, set)) in [
            ("58 chars", &nm.chars_58),
            ("60 chars", &nm.chars_60),
            ("8 words", &nm.words_8),
            ("16 words", &nm.words_16),
            ("width-infeasible", &nm.display),
        ]
        .into_iter()
        .enumerate()
        {
            check(!set.is_empty(), || format!("{lang}: no {kind} near misses generated"))?;
            for s in set {
                check(!check_sentence(s, &cfg, &fx.fonts).passes(), || format!("{lang} {kind}: {s:?} accepted"))?;
                check(!mdd.contains(&padded(s, mdd.arity())), || format!("{lang} {kind}: {s:?} in the MDD"))?;
            }
            counts[i + 1] += set.len();
        }
    }
    Ok(format!(
        "{} enumerated pass; rejected and absent: {} at 58 chars, {} at 60, {} with 8 words, {} with 16, {} without layout",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]
    ))
}

fn reduction() -> Outcome {
    let mut nonempty = 0;
    for seed in 0..100u64 {
        let (raw, paths) = random_raw(seed);
        check(paths.len() <= 10_000, || format!("seed {seed}: {} paths", paths.len()))?;
        let reduced = raw.reduce();
        check(reduced.path_set() == paths, || format!("seed {seed}: reduce changed the path set"))?;
        check(reduced.reduce() == reduced, || format!("seed {seed}: reduce is not idempotent"))?;
        check(reduced.validate().is_empty(), || format!("seed {seed}: reduced MDD is malformed"))?;
        nonempty += usize::from(!paths.is_empty());
    }
    Ok(format!("100 random MDDs ({nonempty} non-empty)"))
}

fn counting() -> Outcome {
    let mut diagrams: Vec<Mdd> = (0..100).map(|s| random_raw(s).0.reduce()).collect();
    diagrams.push(Mdd::sum(&[vec![1, 3, 7], vec![0, 2, 4], vec![2, 3, 4]], 5, 9));
    for lang in ["en", "fr"] {
        let fx = Fixture::load(lang);
        for (_, cfg) in variants(&fx.rules()) {
            diagrams.push(unfold(&fx.trie, &cfg, &fx.fonts).map_err(|e| e.to_string())?);
        }
        for p in Position::ALL {
            diagrams.push(fx.trie.trie(p).clone());
        }
    }
    for (i, m) in diagrams.iter().enumerate() {
        check(m.count_paths() == BigUint::from(enumerated_len(m)), || format!("diagram {i}: count differs from enumeration"))?;
    }

    // Product construction: every tuple over 24 domains, sizes 7 to 13.
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let sizes: Vec<i64> = (0..24).map(|_| rng.gen_range(7..=13)).collect();
    let product: BigUint = sizes.iter().map(|&s| BigUint::from(s as u64)).product();
    let domains: Vec<Vec<i64>> = sizes.iter().map(|&s| (0..s).collect()).collect();
    let all = Mdd::sum(&domains, 0, sizes.iter().sum());
    let mut table = LabelTable::new();
    let ids: Vec<_> = (0..13).map(|v| table.intern(Label::Int(v))).collect();
    let chain: Vec<Vec<Vec<Edge>>> = sizes
        .iter()
        .map(|&s| vec![ids[..s as usize].iter().map(|&l| Edge::new(l, 0)).collect()])
        .collect();
    let chain = Mdd::from_raw_parts(Arc::new(table), chain, true).reduce();
    check(product > BigUint::from(u64::MAX), || "product does not exceed 2^64".into())?;
    check(all.count_paths() == product, || format!("sum MDD counts {} not {product}", all.count_paths()))?;
    check(chain.count_paths() == product, || format!("chain MDD counts {} not {product}", chain.count_paths()))?;
    Ok(format!("{} diagrams match enumeration; {product} paths counted exactly", diagrams.len()))
}

struct Constant(f64);

impl ConditionalModel for Constant {
    fn log_prob(&self, _: &[&str], _: &str) -> f64 {
        self.0.ln()
    }
}

fn perplexity_identities() -> Outcome {
    for len in 1..=50 {
        let words = vec!["w"; len];
        let half = perplexity(&Constant(0.5), &words).unwrap();
        check((half - 2.0).abs() <= 1e-9, || format!("p = 0.5, length {len}: {half}"))?;
        let one = perplexity(&Constant(1.0), &words).unwrap();
        check((one - 1.0).abs() <= 1e-9, || format!("p = 1, length {len}: {one}"))?;
    }
    // Bigram model, alpha 0.1, outcomes {a, b, c, </s>, <unk>}:
    // P(a | <s>) = (2 + 0.1) / (2 + 0.5), P(b | a) = (1 + 0.1) / (2 + 0.5).
    let model = train_markov([["a", "b"], ["a", "c"]], 1, 0.1).map_err(|e| e.to_string())?;
    let got = perplexity(&model, &["a", "b"]).unwrap();
    let hand = (2.1f64 / 2.5 * (1.1 / 2.5)).powf(-0.5);
    check((got - hand).abs() <= 1e-9, || format!("toy Markov {got}, by hand {hand}"))?;
    // P(<unk> | a) = 0.1 / 2.5 for a word never seen.
    let unseen = perplexity(&model, &["a", "zzz"]).unwrap();
    let hand = (2.1f64 / 2.5 * (0.1 / 2.5)).powf(-0.5);
    check((unseen - hand).abs() <= 1e-9, || format!("unseen word {unseen}, by hand {hand}"))?;
    Ok(format!("constant 0.5 -> 2 and 1 -> 1 for lengths 1..50; toy Markov {got:.12}"))
}

fn performance() -> Outcome {
    let shape = SyntheticShape::default();
    let grams = synthetic_ngrams(&shape);
    check(grams.len() == 700_000, || format!("{} n-grams generated", grams.len()))?;

    let measured = reset_peak_rss();
    let t = Instant::now();
    let trie = MddTrie::build(5, &grams).map_err(|e| e.to_string())?;
    let build = t.elapsed();
    let build_peak = peak_rss_bytes().ok_or("peak memory is not reported on this platform")?;
    check(measured, || "cannot reset the peak memory counter".into())?;
    within(build, Duration::from_secs(60), "trie build")?;
    check(build_peak < 4 * GIB, || format!("trie build peaked at {build_peak} bytes"))?;
    drop(grams);

    let fonts = FontMetrics::load(&common::fixture_dir("times.tsv")).map_err(|e| e.to_string())?;
    let cfg = RuleConfig {
        box_width: 7681,
        ..RuleConfig::default()
    };
    reset_peak_rss();
    let t = Instant::now();
    let mdd = unfold(&trie, &cfg, &fonts).map_err(|e| e.to_string())?;
    let compile = t.elapsed();
    let compile_peak = peak_rss_bytes().ok_or("peak memory is not reported")?;
    check(compile_peak < 16 * GIB, || format!("compile peaked at {compile_peak} bytes"))?;
    Ok(format!(
        "700000 5-grams: trie in {build:.1?} at {:.2} GiB; compile in {compile:.1?} at {:.2} GiB, {} solutions",
        build_peak as f64 / GIB as f64,
        compile_peak as f64 / GIB as f64,
        mdd.count_paths()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("sum MDD oracle", sum_oracle),
        ("trie successor oracle", trie_oracle),
        ("exactness against brute force", exactness),
        ("cross-method equality", cross_method),
        ("validator closure", validator_closure),
        ("reduction soundness", reduction),
        ("exact counting", counting),
        ("perplexity identities", perplexity_identities),
        ("performance shape", performance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{:.1?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{:.1?}]", t.elapsed());
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
