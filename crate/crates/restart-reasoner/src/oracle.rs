//! Ground-truth toy physics: shot transitions, exhaustive solvability, and
//! the built-in agent policies.
//!
//! The oracle runs the same rule family as the solvability heuristic but
//! with strictly attenuated loss factors, so the heuristic's verdicts
//! dominate the truth by construction: whatever the oracle can solve, the
//! lossless heuristic also believes solvable. Scores and times are a
//! synthetic model (points per pig, per block, per unused bird; seconds per
//! shot and per restart).

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heuristics::ShotOutcome;
use crate::level::{BlockId, LevelState};
use crate::propagation::{PropagationConstants, Propagator};
use crate::trajectory::{reachable_blocks, trace, Shot, TrajectoryParams};

/// Synthetic scoring model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringRules {
    pub pig_points: u64,
    pub block_points: u64,
    pub unused_bird_points: u64,
}

impl Default for ScoringRules {
    fn default() -> Self {
        ScoringRules {
            pig_points: 10_000,
            block_points: 500,
            unused_bird_points: 10_000,
        }
    }
}

/// The "true" physics: attenuated propagation constants plus the synthetic
/// score and time models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConstants {
    pub propagation: PropagationConstants,
    pub scoring: ScoringRules,
    /// Synthetic seconds consumed by one shot.
    pub shot_seconds: f64,
    /// Synthetic seconds consumed by one restart.
    pub restart_seconds: f64,
}

impl Default for OracleConstants {
    fn default() -> Self {
        OracleConstants {
            propagation: PropagationConstants {
                direct_loss: 0.8,
                falling_loss: 0.8,
                travel_loss: 0.9,
                ..PropagationConstants::default()
            },
            scoring: ScoringRules::default(),
            shot_seconds: 10.0,
            restart_seconds: 5.0,
        }
    }
}

impl OracleConstants {
    /// Range checks, plus the dominance requirement: every oracle loss
    /// factor must stay at or below the matching heuristic factor.
    pub fn check(&self, heuristic: &PropagationConstants) -> std::result::Result<(), String> {
        self.propagation.check()?;
        if self.shot_seconds <= 0.0 || self.restart_seconds <= 0.0 {
            return Err("shot_seconds and restart_seconds must be positive".to_string());
        }
        for (name, ours, theirs) in [
            ("direct_loss", self.propagation.direct_loss, heuristic.direct_loss),
            (
                "falling_loss",
                self.propagation.falling_loss,
                heuristic.falling_loss,
            ),
            ("travel_loss", self.propagation.travel_loss, heuristic.travel_loss),
        ] {
            if ours > theirs {
                return Err(format!(
                    "oracle {name} ({ours}) exceeds the heuristic's ({theirs}); \
                     the dominance property needs attenuated oracle constants"
                ));
            }
        }
        if self.propagation.force_floor < heuristic.force_floor {
            return Err("oracle force_floor below the heuristic's breaks dominance".to_string());
        }
        Ok(())
    }
}

/// Built-in agent behaviors.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    /// Picks a random reachable pig shot (any reachable block when no pig is
    /// reachable).
    NaiveRandomPig,
    /// Picks the shot maximizing the immediate score gain, ties to the
    /// lowest block id.
    GreedyMaxDamage,
}

/// A deterministic agent: behavior kind plus RNG seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AgentPolicy {
    pub kind: PolicyKind,
    pub seed: u64,
}

impl AgentPolicy {
    pub fn new(kind: PolicyKind, seed: u64) -> Self {
        AgentPolicy { kind, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        AgentPolicy { seed, ..self }
    }
}

/// Execute one shot: trace to the first impact, propagate with the oracle
/// constants, remove what died, and score it. Consumes one bird and advances
/// synthetic time. The input state is untouched.
pub fn apply_shot(
    state: &LevelState,
    shot: &Shot,
    oracle: &OracleConstants,
    trajectory: &TrajectoryParams,
) -> Result<(LevelState, ShotOutcome)> {
    if state.remaining_birds.is_empty() {
        return Err(Error::NoBirdsRemaining);
    }
    let mut next = state.clone();
    let bird = next.remaining_birds.remove(0);
    next.elapsed_time += oracle.shot_seconds;
    let birds_remaining_after = next.remaining_birds.len();

    let impact = trace(shot, &state.scene(), trajectory.gravity, trajectory.step);
    let Some((impact_block, _)) = impact else {
        // Contract is a verified shot; a miss still costs the bird.
        let outcome = ShotOutcome {
            score_delta: 0,
            change_fraction: 0.0,
            hit_material: None,
            bird,
            birds_remaining_after,
        };
        return Ok((next, outcome));
    };

    let hit_material = state
        .alive_blocks
        .iter()
        .find(|b| b.id == impact_block)
        .map(|b| b.material);
    let propagator = Propagator::new(&state.alive_blocks, &oracle.propagation);
    let map = propagator.propagate(impact_block, 1.0)?;

    let pre_count = state.alive_blocks.iter().filter(|b| !b.is_ground()).count();
    let destroyed: BTreeSet<BlockId> = map.destroyed.clone();
    let pigs_killed = state
        .alive_blocks
        .iter()
        .filter(|b| b.is_pig() && destroyed.contains(&b.id))
        .count() as u64;
    let blocks_destroyed = destroyed.len() as u64 - pigs_killed;

    next.alive_blocks.retain(|b| !destroyed.contains(&b.id));

    // Blocks never move in this transition, so the change fraction counts
    // destruction only; the displacement clause exists for future motion.
    let displaced = 0usize;
    let change_fraction = if pre_count == 0 {
        0.0
    } else {
        (destroyed.len() + displaced) as f64 / pre_count as f64
    };

    let mut score_delta =
        pigs_killed * oracle.scoring.pig_points + blocks_destroyed * oracle.scoring.block_points;
    if next.alive_pigs().next().is_none() {
        score_delta += birds_remaining_after as u64 * oracle.scoring.unused_bird_points;
    }
    next.accumulated_score += score_delta;

    let outcome = ShotOutcome {
        score_delta,
        change_fraction,
        hit_material,
        bird,
        birds_remaining_after,
    };
    Ok((next, outcome))
}

/// Ground-truth one-shot solvability: try a shot at every reachable block
/// (one per block suffices, since the impact block alone fixes the force
/// map) and ask whether any of them kills every pig.
pub fn oracle_solvable(
    state: &LevelState,
    oracle: &OracleConstants,
    trajectory: &TrajectoryParams,
) -> bool {
    if state.alive_pigs().next().is_none() {
        return true;
    }
    if state.remaining_birds.is_empty() {
        return false;
    }
    let reachable = reachable_blocks(&state.scene(), trajectory);
    for shots in reachable.values() {
        let Ok((after, _)) = apply_shot(state, &shots[0], oracle, trajectory) else {
            continue;
        };
        if after.alive_pigs().next().is_none() {
            return true;
        }
    }
    false
}

/// All candidate shots of the current state in deterministic scan order
/// (block id, then target point, then arc), each tagged with whether it
/// targets a pig.
fn candidate_shots(state: &LevelState, trajectory: &TrajectoryParams) -> Vec<(Shot, bool)> {
    let reachable = reachable_blocks(&state.scene(), trajectory);
    let mut out = Vec::new();
    for (&id, shots) in &reachable {
        let is_pig = state
            .alive_blocks
            .iter()
            .any(|b| b.id == id && b.is_pig());
        for shot in shots {
            out.push((shot.clone(), is_pig));
        }
    }
    out
}

/// Choose the policy's next shot for this state. Fully deterministic given
/// the policy seed and the state.
pub fn next_shot(
    policy: &AgentPolicy,
    state: &LevelState,
    oracle: &OracleConstants,
    trajectory: &TrajectoryParams,
) -> Result<Shot> {
    let candidates = candidate_shots(state, trajectory);
    if candidates.is_empty() {
        return Err(Error::NothingReachable);
    }
    match policy.kind {
        PolicyKind::NaiveRandomPig => {
            let pig_shots: Vec<&(Shot, bool)> =
                candidates.iter().filter(|(_, pig)| *pig).collect();
            let pool: Vec<&Shot> = if pig_shots.is_empty() {
                candidates.iter().map(|(s, _)| s).collect()
            } else {
                pig_shots.iter().map(|(s, _)| s).collect()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
            Ok(pool[rng.gen_range(0..pool.len())].clone())
        }
        PolicyKind::GreedyMaxDamage => {
            let mut best: Option<(u64, Shot)> = None;
            for (shot, _) in &candidates {
                let (_, outcome) = apply_shot(state, shot, oracle, trajectory)?;
                if best
                    .as_ref()
                    .map(|(s, _)| outcome.score_delta > *s)
                    .unwrap_or(true)
                {
                    best = Some((outcome.score_delta, shot.clone()));
                }
            }
            Ok(best.expect("candidates are nonempty").1)
        }
    }
}

/// Mix two seeds into one; used to derive per-shot and per-trial seeds.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    splitmix(a ^ splitmix(b))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
