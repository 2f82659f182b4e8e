//! Command-line front end: validate level files, query one-shot
//! solvability, generate corpora, and run the paired evaluation protocol.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a negative
//! verdict or failed validation, 2 for usage and data errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use restart_reasoner::config::GlobalConfig;
use restart_reasoner::generator::generate_corpus;
use restart_reasoner::harness::{evaluate_corpus, EvaluationOptions, PredictorKind};
use restart_reasoner::heuristics::solvable_one_shot;
use restart_reasoner::level::{Level, LevelState};
use restart_reasoner::oracle::{AgentPolicy, PolicyKind};

#[derive(Parser)]
#[command(
    name = "restart-reasoner",
    about = "Qualitative solvability analysis and restart policies for rectangle-world physics puzzles",
    version
)]
struct Cli {
    /// Config file (TOML). Falls back to $RESTART_REASONER_CONFIG, then
    /// built-in defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a level file against every level invariant.
    Validate {
        /// Level file (JSON).
        level: PathBuf,
    },
    /// Predict one-shot solvability of a level.
    Solvable {
        /// Level file (JSON).
        level: PathBuf,
    },
    /// Generate a deterministic level corpus into a directory.
    Generate {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run the paired with/without-restart evaluation and write reports.
    Evaluate {
        /// Level directory, or `gen:SEED,COUNT` for a generated corpus.
        #[arg(long)]
        corpus: String,
        #[arg(long, value_enum, default_value_t = PolicyArg::Naive)]
        policy: PolicyArg,
        /// Trials per level and group (default from config).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = PredictorArg::Heuristic)]
        predictor: PredictorArg,
        /// Worker threads; any value yields identical reports.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Base seed for trial derivation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Naive,
    Greedy,
}

impl From<PolicyArg> for PolicyKind {
    fn from(arg: PolicyArg) -> Self {
        match arg {
            PolicyArg::Naive => PolicyKind::NaiveRandomPig,
            PolicyArg::Greedy => PolicyKind::GreedyMaxDamage,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PredictorArg {
    Heuristic,
    Oracle,
}

impl From<PredictorArg> for PredictorKind {
    fn from(arg: PredictorArg) -> Self {
        match arg {
            PredictorArg::Heuristic => PredictorKind::Heuristic,
            PredictorArg::Oracle => PredictorKind::Oracle,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match GlobalConfig::resolve(cli.config.as_deref()) {
        Ok((config, warnings)) => {
            for warning in warnings {
                eprintln!("warning: {warning}");
            }
            config
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    match cli.command {
        Command::Validate { level } => validate_command(&level),
        Command::Solvable { level } => solvable_command(&level, &config),
        Command::Generate { count, seed, out } => generate_command(count, seed, &out, &config),
        Command::Evaluate {
            corpus,
            policy,
            trials,
            out,
            predictor,
            jobs,
            seed,
        } => evaluate_command(
            &corpus,
            policy.into(),
            trials,
            &out,
            predictor.into(),
            jobs,
            seed,
            &config,
        ),
    }
}

fn read_level(path: &Path) -> Result<Level, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    Level::parse(&text).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn validate_command(path: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    // Parse the syntax only, so every invariant violation lists individually.
    let level = match Level::parse_lenient(&text) {
        Ok(level) => level,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let violations = level.validate();
    if violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        for violation in violations {
            println!("{violation}");
        }
        ExitCode::from(1)
    }
}

fn solvable_command(path: &Path, config: &GlobalConfig) -> ExitCode {
    let level = match read_level(path) {
        Ok(level) => level,
        Err(code) => return code,
    };
    let state = LevelState::new(level);
    match solvable_one_shot(&state, &config.propagation, &config.trajectory) {
        Ok(verdict) if verdict.solvable => {
            let (shot, _) = verdict.witness.expect("solvable verdicts carry a witness");
            println!(
                "solvable via block {} {} ({} arc, angle {:.4} rad)",
                shot.target_block,
                shot.target_point.as_str(),
                shot.arc.as_str(),
                shot.angle
            );
            ExitCode::SUCCESS
        }
        Ok(verdict) => {
            let pigs: Vec<String> = verdict
                .pigs_unkillable
                .iter()
                .map(|id| id.to_string())
                .collect();
            println!("unsolvable; pigs out of reach: {}", pigs.join(", "));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn generate_command(count: usize, seed: u64, out: &Path, config: &GlobalConfig) -> ExitCode {
    if count == 0 {
        eprintln!("error: --count must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return ExitCode::from(2);
    }
    let params = config.harness.corpus.params(Some(count));
    for (i, level) in generate_corpus(&params, seed).iter().enumerate() {
        let path = out.join(format!("level-{i:03}.json"));
        if let Err(e) = std::fs::write(&path, level.to_canonical_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    println!("wrote {count} levels to {}", out.display());
    ExitCode::SUCCESS
}

fn load_corpus(spec: &str, config: &GlobalConfig) -> Result<Vec<(String, Level)>, String> {
    if let Some(args) = spec.strip_prefix("gen:") {
        let (seed, count) = args
            .split_once(',')
            .ok_or_else(|| "expected gen:SEED,COUNT".to_string())?;
        let seed: u64 = seed.trim().parse().map_err(|_| "bad seed".to_string())?;
        let count: usize = count.trim().parse().map_err(|_| "bad count".to_string())?;
        if count == 0 {
            return Err("empty corpus".to_string());
        }
        let params = config.harness.corpus.params(Some(count));
        return Ok(generate_corpus(&params, seed)
            .into_iter()
            .enumerate()
            .map(|(i, level)| (format!("gen{seed}-{i:03}"), level))
            .collect());
    }
    let dir = Path::new(spec);
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    entries.sort();
    let mut levels = Vec::new();
    for path in entries {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let level = Level::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        levels.push((name, level));
    }
    if levels.is_empty() {
        return Err(format!("no .json levels under {}", dir.display()));
    }
    Ok(levels)
}

#[allow(clippy::too_many_arguments)]
fn evaluate_command(
    corpus: &str,
    policy: PolicyKind,
    trials: Option<usize>,
    out: &Path,
    predictor: PredictorKind,
    jobs: usize,
    seed: u64,
    config: &GlobalConfig,
) -> ExitCode {
    if jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let levels = match load_corpus(corpus, config) {
        Ok(levels) => levels,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let options = EvaluationOptions {
        policy: AgentPolicy::new(policy, seed),
        predictor,
        trials,
        jobs,
        base_seed: seed,
    };
    let report = match evaluate_corpus(&levels, config, &options) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return ExitCode::from(2);
    }
    for (name, contents) in [
        ("report.csv", report.to_csv()),
        ("report.md", report.to_markdown()),
        ("trials.jsonl", report.audit_lines()),
    ] {
        let path = out.join(name);
        if let Err(e) = std::fs::write(&path, contents) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if !report.excluded.is_empty() {
        eprintln!("excluded levels: {}", report.excluded.join(", "));
    }
    println!(
        "evaluated {} levels x {} trials; average TP {:.2} TN {:.2} FP {:.2} FN {:.2} TR {}",
        report.rows.len(),
        report.trials_per_level,
        report.average.true_positive,
        report.average.true_negative,
        report.average.false_positive,
        report.average.false_negative,
        report
            .average
            .time_ratio
            .map(|tr| format!("{tr:.2}"))
            .unwrap_or_else(|| "N/A".to_string()),
    );
    ExitCode::SUCCESS
}
