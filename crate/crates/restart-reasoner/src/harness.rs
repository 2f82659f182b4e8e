//! Trial harness: paired with/without-restart play-throughs, confusion-
//! matrix labeling, time ratios, and per-level report aggregation.
//!
//! A trial plays one level with one seed until it is solved or the restart
//! cap runs out. The control group restarts only when forced (out of birds
//! with pigs alive); the test group also restarts whenever the policy
//! signals. Both consume the same per-shot seed stream, so their shot
//! sequences agree up to the first restart signal.
//!
//! The solvability prediction is recorded at the first decision point with
//! exactly one bird left, and the record's `solved` flag reports how the
//! attempt carrying that prediction ended. Crossing the two yields the
//! confusion-matrix label: an unsolvable belief against a solved attempt is
//! a false positive, and so on. Per level, the time ratio compares the mean
//! control duration to the mean test duration; levels where the module never
//! signaled report no ratio.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::GlobalConfig;
use crate::error::{Error, Result};
use crate::heuristics::{decide_restart, solvable_one_shot, ShotOutcome};
use crate::level::{Level, LevelState};
use crate::oracle::{apply_shot, mix_seed, next_shot, oracle_solvable, AgentPolicy};
use crate::trajectory::Shot;

/// The solvability belief recorded at the last bird.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prediction {
    Solvable,
    Unsolvable,
}

/// Which verdict feeds the restart policy during trials.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictorKind {
    /// The rule-based one-shot solvability heuristic.
    Heuristic,
    /// The ground-truth oracle itself (perfect-predictor mode).
    Oracle,
}

/// Compact identity of one executed shot, for audit logs and pairing checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ShotKey {
    pub block: u32,
    pub point: crate::trajectory::TargetPoint,
    pub arc: crate::trajectory::ArcKind,
}

impl From<&Shot> for ShotKey {
    fn from(shot: &Shot) -> Self {
        ShotKey {
            block: shot.target_block.0,
            point: shot.target_point,
            arc: shot.arc,
        }
    }
}

/// Everything observed in one trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub level: String,
    pub seed: u64,
    /// Whether this trial acted on restart signals (test group) or ignored
    /// them (control group).
    pub with_restarts: bool,
    /// Total shots fired across all attempts.
    pub shots: usize,
    /// Belief recorded at the first last-bird decision point.
    pub prediction: Option<Prediction>,
    /// How the attempt carrying the prediction ended; trial outcome when no
    /// prediction was ever recorded.
    pub solved: bool,
    /// Whether the trial as a whole ended with every pig dead.
    pub level_solved: bool,
    pub final_score: u64,
    /// Synthetic duration, set on the matching group's field.
    pub time_with: Option<f64>,
    pub time_without: Option<f64>,
    /// All restarts performed, and the subset triggered by the policy.
    pub restarts: usize,
    pub signaled_restarts: usize,
    /// Nothing was reachable at the initial decision point.
    pub degenerate: bool,
    pub shot_log: Vec<ShotKey>,
    /// Global shot indices at which signaled restarts happened.
    pub restart_shot_indices: Vec<usize>,
}

/// Play one level with one seed until solved or the restart cap runs out.
/// The control variant (`use_restarts = false`) still evaluates the policy
/// so the prediction is recorded, but never acts on it.
pub fn run_trial(
    level_name: &str,
    level: &Level,
    policy: AgentPolicy,
    use_restarts: bool,
    predictor: PredictorKind,
    config: &GlobalConfig,
    seed: u64,
) -> Result<TrialRecord> {
    let cap = config.harness.restart_cap;
    let mut state = LevelState::new(level.clone());
    let mut time = 0.0_f64;
    let mut shots_fired = 0usize;
    let mut restarts = 0usize;
    let mut signaled_restarts = 0usize;
    let mut shot_log = Vec::new();
    let mut restart_shot_indices = Vec::new();
    let mut prediction: Option<Prediction> = None;
    let mut prediction_attempt_open = false;
    let mut prediction_attempt_solved: Option<bool> = None;
    let mut last_outcome: Option<ShotOutcome> = None;
    let mut level_solved = false;
    let mut degenerate = false;
    // Last-bird verdicts repeat across attempts on identical states; key by
    // the surviving block ids.
    let mut verdict_cache: BTreeMap<Vec<u32>, bool> = BTreeMap::new();

    'trial: loop {
        if state.alive_pigs().next().is_none() {
            level_solved = true;
            if prediction_attempt_open {
                prediction_attempt_solved = Some(true);
            }
            break;
        }
        if state.remaining_birds.is_empty() {
            // Failed attempt: forced restart.
            if prediction_attempt_open {
                prediction_attempt_solved = Some(false);
                prediction_attempt_open = false;
            }
            restarts += 1;
            if restarts > cap {
                break;
            }
            time += config.oracle.restart_seconds;
            state = state.restart();
            last_outcome = None;
            continue;
        }

        // Decision point: evaluate the last-bird verdict with the selected
        // predictor, grade the last outcome, and maybe restart.
        let verdict = if state.remaining_birds.len() == 1 {
            let key: Vec<u32> = state.alive_blocks.iter().map(|b| b.id.0).collect();
            let solvable = *verdict_cache.entry(key).or_insert_with(|| match predictor {
                PredictorKind::Heuristic => {
                    solvable_one_shot(&state, &config.propagation, &config.trajectory)
                        .map(|v| v.solvable)
                        .unwrap_or(true)
                }
                PredictorKind::Oracle => {
                    oracle_solvable(&state, &config.oracle, &config.trajectory)
                }
            });
            Some(solvable)
        } else {
            None
        };
        if prediction.is_none() {
            if let Some(solvable) = verdict {
                prediction = Some(if solvable {
                    Prediction::Solvable
                } else {
                    Prediction::Unsolvable
                });
                prediction_attempt_open = true;
            }
        }
        let signal = decide_restart(verdict, last_outcome.as_ref(), &config.restart);
        if use_restarts && signal.restart {
            signaled_restarts += 1;
            restarts += 1;
            restart_shot_indices.push(shots_fired);
            if prediction_attempt_open {
                prediction_attempt_solved = Some(false);
                prediction_attempt_open = false;
            }
            if restarts > cap {
                break;
            }
            time += config.oracle.restart_seconds;
            state = state.restart();
            last_outcome = None;
            continue;
        }

        // Fire the next shot from the evolving per-trial seed stream.
        let shot_policy = policy.with_seed(mix_seed(seed, shots_fired as u64));
        let shot = match next_shot(&shot_policy, &state, &config.oracle, &config.trajectory) {
            Ok(shot) => shot,
            Err(Error::NothingReachable) => {
                if shots_fired == 0 && restarts == 0 {
                    degenerate = true;
                    break 'trial;
                }
                // Stuck mid-attempt: treat as a failed attempt.
                if prediction_attempt_open {
                    prediction_attempt_solved = Some(false);
                    prediction_attempt_open = false;
                }
                restarts += 1;
                if restarts > cap {
                    break;
                }
                time += config.oracle.restart_seconds;
                state = state.restart();
                last_outcome = None;
                continue;
            }
            Err(other) => return Err(other),
        };
        let (next_state, outcome) = apply_shot(&state, &shot, &config.oracle, &config.trajectory)?;
        shot_log.push(ShotKey::from(&shot));
        shots_fired += 1;
        time += config.oracle.shot_seconds;
        state = next_state;
        last_outcome = Some(outcome);
    }

    Ok(TrialRecord {
        level: level_name.to_string(),
        seed,
        with_restarts: use_restarts,
        shots: shots_fired,
        prediction,
        solved: prediction_attempt_solved.unwrap_or(level_solved),
        level_solved,
        final_score: state.accumulated_score,
        time_with: use_restarts.then_some(time),
        time_without: (!use_restarts).then_some(time),
        restarts,
        signaled_restarts,
        degenerate,
        shot_log,
        restart_shot_indices,
    })
}

/// Confusion-matrix label of one record. Positive means "predicted
/// unsolvable".
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Outcome {
    TruePositive,
    TrueNegative,
    FalsePositive,
    FalseNegative,
}

/// Cross the prediction with how the predicted attempt actually ended.
pub fn classify(record: &TrialRecord) -> Result<Outcome> {
    let prediction = record.prediction.ok_or(Error::MissingPrediction)?;
    Ok(match (prediction, record.solved) {
        (Prediction::Unsolvable, true) => Outcome::FalsePositive,
        (Prediction::Solvable, false) => Outcome::FalseNegative,
        (Prediction::Unsolvable, false) => Outcome::TruePositive,
        (Prediction::Solvable, true) => Outcome::TrueNegative,
    })
}

/// Mean control-group duration over mean test-group duration for one level.
/// `None` (reported as N/A) when either group is missing, the policy never
/// signaled a restart, or the denominator vanishes.
pub fn time_ratio(records: &[TrialRecord]) -> Option<f64> {
    let without: Vec<f64> = records.iter().filter_map(|r| r.time_without).collect();
    let with: Vec<f64> = records.iter().filter_map(|r| r.time_with).collect();
    if without.is_empty() || with.is_empty() {
        return None;
    }
    if !records
        .iter()
        .any(|r| r.time_with.is_some() && r.signaled_restarts > 0)
    {
        return None;
    }
    let mean_without = without.iter().sum::<f64>() / without.len() as f64;
    let mean_with = with.iter().sum::<f64>() / with.len() as f64;
    (mean_with > 0.0).then(|| mean_without / mean_with)
}

/// One report row: outcome rates and the time ratio for a level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRow {
    pub level: String,
    pub true_positive: f64,
    pub true_negative: f64,
    pub false_positive: f64,
    pub false_negative: f64,
    pub time_ratio: Option<f64>,
    /// Classified trials behind the rates.
    pub n: usize,
}

impl LevelRow {
    pub fn rates_sum(&self) -> f64 {
        self.true_positive + self.true_negative + self.false_positive + self.false_negative
    }
}

/// Average row over per-level rows: arithmetic mean of each rate column; the
/// time ratio averages only the rows that have one.
pub fn aggregate(rows: &[LevelRow]) -> LevelRow {
    assert!(!rows.is_empty(), "cannot aggregate an empty report");
    let count = rows.len() as f64;
    let mean = |f: fn(&LevelRow) -> f64| rows.iter().map(f).sum::<f64>() / count;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.time_ratio).collect();
    let time_ratio = if ratios.is_empty() {
        None
    } else {
        Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
    };
    LevelRow {
        level: "average".to_string(),
        true_positive: mean(|r| r.true_positive),
        true_negative: mean(|r| r.true_negative),
        false_positive: mean(|r| r.false_positive),
        false_negative: mean(|r| r.false_negative),
        time_ratio,
        n: rows.iter().map(|r| r.n).sum(),
    }
}

/// A full evaluation: per-level rows, the average row, and every trial
/// record for audit.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluationReport {
    pub rows: Vec<LevelRow>,
    pub average: LevelRow,
    /// Trials requested per level and group.
    pub trials_per_level: usize,
    /// Levels excluded because nothing was reachable or no trial ever
    /// produced a prediction.
    pub excluded: Vec<String>,
    pub records: Vec<TrialRecord>,
}

impl EvaluationReport {
    /// CSV rendering: `level,TP,TN,FP,FN,TR,n`, one row per level plus the
    /// average row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,TP,TN,FP,FN,TR,n\n");
        for row in self.rows.iter().chain(std::iter::once(&self.average)) {
            out.push_str(&format!(
                "{},{:.4},{:.4},{:.4},{:.4},{},{}\n",
                row.level,
                row.true_positive,
                row.true_negative,
                row.false_positive,
                row.false_negative,
                row.time_ratio
                    .map(|tr| format!("{tr:.4}"))
                    .unwrap_or_else(|| "N/A".to_string()),
                row.n
            ));
        }
        out
    }

    /// Aligned Markdown table with the same columns.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Level | TP | TN | FP | FN | TR | n |\n");
        out.push_str("|---|---|---|---|---|---|---|\n");
        for row in self.rows.iter().chain(std::iter::once(&self.average)) {
            out.push_str(&format!(
                "| {} | {:.2} | {:.2} | {:.2} | {:.2} | {} | {} |\n",
                row.level,
                row.true_positive,
                row.true_negative,
                row.false_positive,
                row.false_negative,
                row.time_ratio
                    .map(|tr| format!("{tr:.2}"))
                    .unwrap_or_else(|| "N/A".to_string()),
                row.n
            ));
        }
        if !self.excluded.is_empty() {
            out.push_str(&format!(
                "\nExcluded (degenerate or never predicted): {}\n",
                self.excluded.join(", ")
            ));
        }
        out
    }

    /// Line-delimited JSON audit log, one record per line.
    pub fn audit_lines(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// Evaluation options beyond the config file.
#[derive(Clone, Copy, Debug)]
pub struct EvaluationOptions {
    pub policy: AgentPolicy,
    pub predictor: PredictorKind,
    /// Trials per level and group; defaults to the config's harness.trials.
    pub trials: Option<usize>,
    /// Worker threads; 1 runs inline. Any value produces identical output.
    pub jobs: usize,
    /// Base seed for the per-trial seed derivation.
    pub base_seed: u64,
}

/// Run the full paired protocol over a corpus and aggregate the report.
/// Deterministic for fixed inputs regardless of `jobs`.
pub fn evaluate_corpus(
    levels: &[(String, Level)],
    config: &GlobalConfig,
    options: &EvaluationOptions,
) -> Result<EvaluationReport> {
    if levels.is_empty() {
        return Err(Error::Config("empty corpus".to_string()));
    }
    let trials = options.trials.unwrap_or(config.harness.trials);

    let mut tasks = Vec::new();
    for (level_index, (name, level)) in levels.iter().enumerate() {
        for trial_index in 0..trials {
            let trial_seed = mix_seed(
                options.base_seed,
                (level_index as u64) << 32 | trial_index as u64,
            );
            tasks.push((name.as_str(), level, trial_seed));
        }
    }

    let run_pair = |(name, level, trial_seed): &(&str, &Level, u64)| -> Result<(TrialRecord, TrialRecord)> {
        let control = run_trial(
            name,
            level,
            options.policy,
            false,
            options.predictor,
            config,
            *trial_seed,
        )?;
        let test = run_trial(
            name,
            level,
            options.policy,
            true,
            options.predictor,
            config,
            *trial_seed,
        )?;
        Ok((control, test))
    };

    let pairs: Vec<(TrialRecord, TrialRecord)> = if options.jobs <= 1 {
        tasks.iter().map(run_pair).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| tasks.par_iter().map(run_pair).collect::<Result<_>>())?
    };

    let mut records = Vec::with_capacity(pairs.len() * 2);
    for (control, test) in pairs {
        records.push(control);
        records.push(test);
    }

    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for (name, _) in levels {
        let level_records: Vec<&TrialRecord> =
            records.iter().filter(|r| &r.level == name).collect();
        if level_records.iter().any(|r| r.degenerate) {
            excluded.push(name.clone());
            continue;
        }
        // Rates come from the control group: it executes the final shot, so
        // its attempt outcome is the observable truth for the prediction.
        let mut counts = [0usize; 4];
        for record in level_records.iter().filter(|r| !r.with_restarts) {
            if record.prediction.is_none() {
                continue;
            }
            match classify(record)? {
                Outcome::TruePositive => counts[0] += 1,
                Outcome::TrueNegative => counts[1] += 1,
                Outcome::FalsePositive => counts[2] += 1,
                Outcome::FalseNegative => counts[3] += 1,
            }
        }
        let n: usize = counts.iter().sum();
        if n == 0 {
            excluded.push(name.clone());
            continue;
        }
        let owned: Vec<TrialRecord> = level_records.iter().map(|r| (*r).clone()).collect();
        rows.push(LevelRow {
            level: name.clone(),
            true_positive: counts[0] as f64 / n as f64,
            true_negative: counts[1] as f64 / n as f64,
            false_positive: counts[2] as f64 / n as f64,
            false_negative: counts[3] as f64 / n as f64,
            time_ratio: time_ratio(&owned),
            n,
        });
    }
    if rows.is_empty() {
        return Err(Error::Config(
            "every level in the corpus was degenerate".to_string(),
        ));
    }
    let average = aggregate(&rows);
    Ok(EvaluationReport {
        rows,
        average,
        trials_per_level: trials,
        excluded,
        records,
    })
}
