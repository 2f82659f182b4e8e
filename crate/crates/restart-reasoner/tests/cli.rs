//! End-to-end tests of the command-line interface: exit codes, output
//! wording, config overrides, and report determinism.

use std::path::Path;
use std::process::{Command, Output};

use restart_reasoner::level::{BirdKind, Block, Bounds, Level, Material, Point};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_restart-reasoner"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env_remove("RESTART_REASONER_CONFIG")
        .output()
        .expect("binary runs")
}

fn exposed_level() -> Level {
    Level {
        sling: Point::new(0.5, 2.0),
        birds: vec![BirdKind::Red],
        bounds: Bounds {
            width: 20.0,
            height: 14.0,
        },
        blocks: vec![
            Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
            Block::new(1, Material::Pig, 10.0, 1.0, 0.5, 0.5),
        ],
    }
}

/// A pig reachable only through a two-hop direct chain (wall, then a short
/// block), covered from above by a slab cantilevered off a far column.
/// Lossless contact delivers the full impact; halving the contact loss
/// factor starves the pig below a 0.7 kill threshold.
fn chain_level() -> Level {
    Level {
        sling: Point::new(0.5, 2.0),
        birds: vec![BirdKind::Red],
        bounds: Bounds {
            width: 20.0,
            height: 14.0,
        },
        blocks: vec![
            Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
            Block::new(1, Material::Stone, 10.0, 1.0, 1.0, 2.5),
            Block::new(2, Material::Wood, 11.0, 1.0, 1.0, 0.5),
            Block::new(3, Material::Pig, 12.0, 1.0, 0.5, 0.5),
            Block::new(4, Material::Stone, 9.5, 4.0, 5.5, 0.5),
            Block::new(5, Material::Stone, 14.0, 1.0, 1.0, 3.0),
        ],
    }
}

#[test]
fn validate_accepts_a_valid_level() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ok.json"), exposed_level().to_canonical_json()).unwrap();
    let out = run(&["validate", "ok.json"], dir.path());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_lists_violations_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut level = exposed_level();
    level.blocks.retain(|b| !b.is_pig());
    std::fs::write(dir.path().join("nopigs.json"), level.to_canonical_json()).unwrap();
    let out = run(&["validate", "nopigs.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no pigs"));
}

#[test]
fn validate_rejects_malformed_files_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"sling\": [").unwrap();
    let out = run(&["validate", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["validate", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solvable_reports_the_witness_for_an_exposed_pig() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pig.json"), exposed_level().to_canonical_json()).unwrap();
    let out = run(&["solvable", "pig.json"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("solvable"));
    assert!(text.contains("block 1"));
}

#[test]
fn solvable_names_unreachable_pigs_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let vault = Level {
        sling: Point::new(0.5, 2.0),
        birds: vec![BirdKind::Red],
        bounds: Bounds {
            width: 20.0,
            height: 14.0,
        },
        blocks: vec![
            Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
            Block::new(1, Material::Stone, 9.0, 1.0, 1.0, 1.5),
            Block::new(2, Material::Stone, 14.0, 1.0, 1.0, 1.5),
            Block::new(3, Material::Stone, 8.5, 2.5, 7.0, 0.5),
            Block::new(4, Material::Pig, 11.75, 1.0, 0.5, 0.5),
        ],
    };
    std::fs::write(dir.path().join("vault.json"), vault.to_canonical_json()).unwrap();
    let out = run(&["solvable", "vault.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("unsolvable"));
    assert!(text.contains('4'));
}

#[test]
fn solvable_rejects_invalid_levels_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut level = exposed_level();
    level.birds.clear();
    std::fs::write(dir.path().join("nobirds.json"), level.to_canonical_json()).unwrap();
    let out = run(&["solvable", "nobirds.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_override_flips_a_marginal_level() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("chain.json"), chain_level().to_canonical_json()).unwrap();
    std::fs::write(
        dir.path().join("tough-pig.toml"),
        "[propagation.kill]\npig = 0.7\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("tough-pig-lossy.toml"),
        "[propagation]\ndirect_loss = 0.5\n[propagation.kill]\npig = 0.7\n",
    )
    .unwrap();

    let lossless = run(
        &["solvable", "chain.json", "--config", "tough-pig.toml"],
        dir.path(),
    );
    assert!(
        lossless.status.success(),
        "{}",
        String::from_utf8_lossy(&lossless.stderr)
    );

    let lossy = run(
        &["solvable", "chain.json", "--config", "tough-pig-lossy.toml"],
        dir.path(),
    );
    assert_eq!(lossy.status.code(), Some(1));
}

#[test]
fn config_comes_from_the_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("chain.json"), chain_level().to_canonical_json()).unwrap();
    std::fs::write(
        dir.path().join("env.toml"),
        "[propagation]\ndirect_loss = 0.5\n[propagation.kill]\npig = 0.7\n",
    )
    .unwrap();
    let out = bin()
        .args(["solvable", "chain.json"])
        .current_dir(dir.path())
        .env("RESTART_REASONER_CONFIG", dir.path().join("env.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_config_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ok.json"), exposed_level().to_canonical_json()).unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[propagation]\nunknown_key = 1\n").unwrap();
    let out = run(
        &["solvable", "ok.json", "--config", "bad.toml"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run(
        &["solvable", "ok.json", "--config", "absent.toml"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_writes_parseable_canonical_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["generate", "--count", "3", "--seed", "9", "--out", "corpus"],
        dir.path(),
    );
    assert!(out.status.success());
    for i in 0..3 {
        let path = dir.path().join(format!("corpus/level-{i:03}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        let level = Level::parse(&text).unwrap();
        assert_eq!(level.to_canonical_json(), text);
    }
}

#[test]
fn evaluate_is_byte_deterministic_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    for (out_dir, jobs) in [("a", "1"), ("b", "1"), ("c", "3")] {
        let out = run(
            &[
                "evaluate",
                "--corpus",
                "gen:42,5",
                "--policy",
                "naive",
                "--trials",
                "6",
                "--jobs",
                jobs,
                "--out",
                out_dir,
            ],
            dir.path(),
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for file in ["report.csv", "report.md", "trials.jsonl"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        let c = std::fs::read(dir.path().join("c").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
        assert_eq!(a, c, "{file} differs across job counts");
    }
}

#[test]
fn evaluate_reads_a_level_directory() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(
        &["generate", "--count", "4", "--seed", "5", "--out", "levels"],
        dir.path(),
    );
    assert!(gen.status.success());
    let out = run(
        &[
            "evaluate",
            "--corpus",
            "levels",
            "--policy",
            "greedy",
            "--trials",
            "3",
            "--out",
            "rep",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("rep/report.csv")).unwrap();
    assert!(csv.starts_with("level,TP,TN,FP,FN,TR,n\n"));
}

#[test]
fn evaluate_rejects_an_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("empty")).unwrap();
    let out = run(
        &[
            "evaluate",
            "--corpus",
            "empty",
            "--policy",
            "naive",
            "--out",
            "rep",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run(
        &["evaluate", "--corpus", "gen:1,0", "--out", "rep"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}
