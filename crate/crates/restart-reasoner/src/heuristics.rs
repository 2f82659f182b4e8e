//! Restart heuristics: one-shot solvability, score shortfall, shot use, and
//! the combined weighted restart score.
//!
//! The solvability verdict is the pre-shot heuristic: the level counts as
//! one-shot solvable when hitting some reachable block propagates lethal
//! force to every surviving pig. Because the default constants assume
//! lossless transfer, the verdict overestimates solvability; that is the
//! safe direction for a restart policy, since restarting a winnable level
//! wastes far more time than finishing a lost one.
//!
//! The post-shot terms grade the shot just made: how much of the level it
//! changed, whether the bird struck a material it is effective against, and
//! how far the score gain fell short of the per-bird threshold. The weighted
//! sum of all four terms against a fixed threshold is the restart signal,
//! with one hard override: a single bird left and an unsolvable verdict
//! always means restart.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::{BirdKind, BlockId, LevelState, Material};
use crate::propagation::{ForceMap, PropagationConstants, Propagator};
use crate::trajectory::{reachable_blocks, Shot, TrajectoryParams};

/// What one shot did to the level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShotOutcome {
    /// Score gained by the shot.
    pub score_delta: u64,
    /// Fraction of the pre-shot blocks destroyed or displaced beyond the
    /// move tolerance, in [0, 1].
    pub change_fraction: f64,
    /// Material of the first block the bird struck; absent when the shot hit
    /// nothing.
    pub hit_material: Option<Material>,
    /// The bird that was fired.
    pub bird: BirdKind,
    pub birds_remaining_after: usize,
}

/// Weights of the four restart terms. They should sum to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RestartWeights {
    pub change: f64,
    pub block_type: f64,
    pub score: f64,
    pub unsolvable: f64,
}

impl Default for RestartWeights {
    fn default() -> Self {
        RestartWeights {
            change: 0.2,
            block_type: 0.2,
            score: 0.2,
            unsolvable: 0.4,
        }
    }
}

impl RestartWeights {
    pub fn sum(&self) -> f64 {
        self.change + self.block_type + self.score + self.unsolvable
    }
}

/// Tunables of the restart policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RestartConfig {
    /// Per-bird score thresholds: a shot gaining less than this is graded as
    /// falling short.
    pub score_thresholds: BTreeMap<BirdKind, f64>,
    pub weights: RestartWeights,
    /// Restart when the weighted score strictly exceeds this.
    pub restart_threshold: f64,
    /// Materials each bird is considered effective against.
    pub effectiveness: BTreeMap<BirdKind, BTreeSet<Material>>,
    /// Displacement below this does not count as a changed block.
    pub move_tolerance: f64,
}

impl Default for RestartConfig {
    fn default() -> Self {
        let score_thresholds = BTreeMap::from([
            (BirdKind::Red, 5000.0),
            (BirdKind::Blue, 6000.0),
            (BirdKind::Yellow, 7000.0),
            (BirdKind::Black, 10000.0),
            (BirdKind::White, 5000.0),
        ]);
        let any: BTreeSet<Material> =
            BTreeSet::from([Material::Wood, Material::Ice, Material::Stone]);
        let effectiveness = BTreeMap::from([
            (BirdKind::Red, any.clone()),
            (BirdKind::White, any),
            (BirdKind::Blue, BTreeSet::from([Material::Ice])),
            (BirdKind::Yellow, BTreeSet::from([Material::Wood])),
            (BirdKind::Black, BTreeSet::from([Material::Stone])),
        ]);
        RestartConfig {
            score_thresholds,
            weights: RestartWeights::default(),
            restart_threshold: 0.5,
            effectiveness,
            move_tolerance: 0.1,
        }
    }
}

impl RestartConfig {
    pub fn threshold_for(&self, bird: BirdKind) -> f64 {
        self.score_thresholds.get(&bird).copied().unwrap_or(5000.0)
    }

    /// Hard errors plus soft warnings (weights off unit sum).
    pub fn check(&self) -> std::result::Result<Vec<String>, String> {
        for (bird, t) in &self.score_thresholds {
            if *t <= 0.0 {
                return Err(format!("score threshold for {bird} must be positive"));
            }
        }
        for (name, w) in [
            ("change", self.weights.change),
            ("block_type", self.weights.block_type),
            ("score", self.weights.score),
            ("unsolvable", self.weights.unsolvable),
        ] {
            if !(0.0..=1.0).contains(&w) {
                return Err(format!("weight {name} must be in [0, 1], got {w}"));
            }
        }
        if !(0.0..=1.0).contains(&self.restart_threshold) {
            return Err("restart_threshold must be in [0, 1]".to_string());
        }
        if self.move_tolerance < 0.0 {
            return Err("move_tolerance cannot be negative".to_string());
        }
        let mut warnings = Vec::new();
        if (self.weights.sum() - 1.0).abs() > 1e-9 {
            warnings.push(format!(
                "restart weights sum to {}, not 1",
                self.weights.sum()
            ));
        }
        Ok(warnings)
    }
}

/// Outcome of the one-shot solvability scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolvabilityVerdict {
    pub solvable: bool,
    /// First shot (in scan order) whose propagation destroys every pig,
    /// with the force map that proves it.
    pub witness: Option<(Shot, ForceMap)>,
    /// Pigs standing in the way of a one-shot win: empty iff solvable. When
    /// no single examined impact covers every pig, these are the pigs missed
    /// by the best-covering impact.
    pub pigs_unkillable: BTreeSet<BlockId>,
}

/// Decide one-shot solvability of the current state: hit every reachable
/// block with a unit impact, propagate, and ask whether some single impact
/// destroys all surviving pigs. The scan is ordered by block id, then target
/// point, then arc, and the first witness wins.
pub fn solvable_one_shot(
    state: &LevelState,
    constants: &PropagationConstants,
    trajectory: &TrajectoryParams,
) -> Result<SolvabilityVerdict> {
    let pigs = state.alive_pig_ids();
    if pigs.is_empty() {
        return Err(Error::NoPigsAlive);
    }
    debug_assert!(
        !state.remaining_birds.is_empty(),
        "solvability is asked before a shot, so a bird must remain"
    );

    let scene = state.scene();
    let reachable = reachable_blocks(&scene, trajectory);
    let propagator = Propagator::new(&state.alive_blocks, constants);

    let mut unkillable_anywhere = pigs.clone();
    let mut best: Option<(usize, BTreeSet<BlockId>)> = None; // (kills, missed)
    for (&block_id, shots) in &reachable {
        let map = propagator.propagate(block_id, 1.0)?;
        let killed: BTreeSet<BlockId> = pigs.intersection(&map.destroyed).copied().collect();
        if killed.len() == pigs.len() {
            let witness_shot = shots[0].clone();
            return Ok(SolvabilityVerdict {
                solvable: true,
                witness: Some((witness_shot, map)),
                pigs_unkillable: BTreeSet::new(),
            });
        }
        unkillable_anywhere.retain(|id| !killed.contains(id));
        if best.as_ref().is_none_or(|(k, _)| killed.len() > *k) {
            best = Some((
                killed.len(),
                pigs.difference(&killed).copied().collect(),
            ));
        }
    }

    // Prefer naming the pigs no impact can kill; when every pig dies to some
    // shot but never all to one, fall back to the best single impact's
    // leftovers so an unsolvable verdict always names at least one pig.
    let pigs_unkillable = if !unkillable_anywhere.is_empty() {
        unkillable_anywhere
    } else {
        best.map(|(_, missed)| missed).unwrap_or(pigs)
    };
    Ok(SolvabilityVerdict {
        solvable: false,
        witness: None,
        pigs_unkillable,
    })
}

/// Normalized shortfall of a score gain below the per-bird threshold:
/// 1 means no progress, 0 means the threshold was met.
pub fn score_shortfall(score_delta: f64, threshold: f64) -> f64 {
    assert!(threshold > 0.0, "score threshold must be positive");
    assert!(score_delta >= 0.0);
    (threshold - score_delta).max(0.0) / threshold
}

/// Post-shot use terms: `(change_term, type_term)`. The change term is high
/// when little changed; the type term is 1 when the bird missed every
/// material it is effective against.
pub fn good_use_terms(outcome: &ShotOutcome, config: &RestartConfig) -> (f64, f64) {
    let change_term = 1.0 - outcome.change_fraction;
    let effective = outcome.hit_material.is_some_and(|m| {
        config
            .effectiveness
            .get(&outcome.bird)
            .is_some_and(|set| set.contains(&m))
    });
    let type_term = if effective { 0.0 } else { 1.0 };
    (change_term, type_term)
}

/// The combined restart score: a weighted sum of the four terms, each in
/// [0, 1].
pub fn restart_score(
    change_term: f64,
    type_term: f64,
    score_term: f64,
    unsolvable_term: f64,
    weights: &RestartWeights,
) -> f64 {
    debug_assert!([change_term, type_term, score_term, unsolvable_term]
        .iter()
        .all(|t| (0.0..=1.0).contains(t)));
    weights.change * change_term
        + weights.block_type * type_term
        + weights.score * score_term
        + weights.unsolvable * unsolvable_term
}

/// The four graded terms feeding the restart score.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RestartTerms {
    pub change: f64,
    pub block_type: f64,
    pub score: f64,
    pub unsolvable: f64,
}

/// The bare restart signal: decision, weighted score, and term breakdown.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RestartSignal {
    pub restart: bool,
    pub score: f64,
    pub terms: RestartTerms,
}

/// A restart decision with its full breakdown.
#[derive(Clone, Debug, Serialize)]
pub struct RestartDecision {
    pub restart: bool,
    pub score: f64,
    pub terms: RestartTerms,
    /// The solvability verdict, present only when it was evaluated (exactly
    /// one bird remaining).
    pub verdict: Option<SolvabilityVerdict>,
}

/// Decide whether to restart right now. The solvability verdict is evaluated
/// only on the last bird; post-shot terms come from the last outcome and are
/// all zero before the first shot. Hard rule: one bird left and an
/// unsolvable verdict forces a restart regardless of the weighted score.
pub fn should_restart(
    state: &LevelState,
    outcome: Option<&ShotOutcome>,
    config: &RestartConfig,
    constants: &PropagationConstants,
    trajectory: &TrajectoryParams,
) -> RestartDecision {
    let verdict = if state.remaining_birds.len() == 1 && state.alive_pigs().next().is_some() {
        solvable_one_shot(state, constants, trajectory).ok()
    } else {
        None
    };
    let signal = decide_restart(verdict.as_ref().map(|v| v.solvable), outcome, config);
    RestartDecision {
        restart: signal.restart,
        score: signal.score,
        terms: signal.terms,
        verdict,
    }
}

/// The decision core, reusable with a last-bird verdict computed elsewhere
/// (for instance by the ground-truth oracle). `solvable` is absent when the
/// verdict was not evaluated.
pub fn decide_restart(
    solvable: Option<bool>,
    outcome: Option<&ShotOutcome>,
    config: &RestartConfig,
) -> RestartSignal {
    let (change, block_type, score_term) = match outcome {
        Some(o) => {
            let (change_term, type_term) = good_use_terms(o, config);
            let shortfall = score_shortfall(o.score_delta as f64, config.threshold_for(o.bird));
            (change_term, type_term, shortfall)
        }
        None => (0.0, 0.0, 0.0),
    };
    let unsolvable = match solvable {
        Some(false) => 1.0,
        _ => 0.0,
    };
    let terms = RestartTerms {
        change,
        block_type,
        score: score_term,
        unsolvable,
    };
    let score = restart_score(change, block_type, score_term, unsolvable, &config.weights);
    let hard_rule = solvable == Some(false);
    RestartSignal {
        restart: hard_rule || score > config.restart_threshold,
        score,
        terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::{Block, BirdKind, Bounds, Level, Point};

    fn level_from(blocks: Vec<Block>, birds: Vec<BirdKind>) -> Level {
        Level {
            sling: Point::new(0.5, 2.0),
            birds,
            bounds: Bounds {
                width: 20.0,
                height: 14.0,
            },
            blocks,
        }
    }

    fn ground() -> Block {
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0)
    }

    #[test]
    fn exposed_pig_is_one_shot_solvable() {
        let level = level_from(
            vec![ground(), Block::new(1, Material::Pig, 10.0, 1.0, 0.5, 0.5)],
            vec![BirdKind::Red],
        );
        let state = LevelState::new(level);
        let verdict = solvable_one_shot(
            &state,
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        )
        .unwrap();
        assert!(verdict.solvable);
        let (shot, map) = verdict.witness.as_ref().unwrap();
        assert_eq!(shot.target_block, BlockId(1));
        assert!(map.destroyed.contains(&BlockId(1)));
        assert!(verdict.pigs_unkillable.is_empty());
    }

    /// A pig sealed under a stone roof on two walls, placed so that no rule
    /// chain carries lethal force inside even with lossless constants: the
    /// walls are too large to be thrown, the pig is beyond the left wall's
    /// fall arc and reach, and nothing touches it.
    pub(crate) fn vault_level(birds: Vec<BirdKind>) -> Level {
        level_from(
            vec![
                ground(),
                Block::new(1, Material::Stone, 9.0, 1.0, 1.0, 1.5),
                Block::new(2, Material::Stone, 14.0, 1.0, 1.0, 1.5),
                Block::new(3, Material::Stone, 8.5, 2.5, 7.0, 0.5),
                Block::new(4, Material::Pig, 11.75, 1.0, 0.5, 0.5),
            ],
            birds,
        )
    }

    #[test]
    fn sealed_vault_is_unsolvable_and_names_the_pig() {
        // Exhaustive check on the fixture: every reachable impact leaves the
        // pig without lethal force.
        let state = LevelState::new(vault_level(vec![BirdKind::Red]));
        let constants = PropagationConstants::default();
        let trajectory = TrajectoryParams::default();
        let scene = state.scene();
        let reachable = reachable_blocks(&scene, &trajectory);
        assert!(!reachable.contains_key(&BlockId(4)), "pig must be occluded");
        let propagator = Propagator::new(&state.alive_blocks, &constants);
        for &id in reachable.keys() {
            let map = propagator.propagate(id, 1.0).unwrap();
            assert!(!map.destroyed.contains(&BlockId(4)));
        }
        let verdict = solvable_one_shot(&state, &constants, &trajectory).unwrap();
        assert!(!verdict.solvable);
        assert!(verdict.witness.is_none());
        assert_eq!(verdict.pigs_unkillable, BTreeSet::from([BlockId(4)]));
    }

    #[test]
    fn split_pigs_cannot_die_to_one_shot() {
        // Two isolated pigs far apart: each is individually killable, but no
        // single impact reaches both, so one-shot solvability fails and the
        // verdict names the pigs missed by the best shot.
        let level = level_from(
            vec![
                ground(),
                Block::new(1, Material::Pig, 6.0, 1.0, 0.5, 0.5),
                Block::new(2, Material::Pig, 16.0, 1.0, 0.5, 0.5),
            ],
            vec![BirdKind::Red],
        );
        let state = LevelState::new(level);
        let verdict = solvable_one_shot(
            &state,
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        )
        .unwrap();
        assert!(!verdict.solvable);
        assert_eq!(verdict.pigs_unkillable.len(), 1);
    }

    #[test]
    fn no_pigs_alive_is_an_error() {
        let level = level_from(
            vec![ground(), Block::new(1, Material::Pig, 10.0, 1.0, 0.5, 0.5)],
            vec![BirdKind::Red],
        );
        let mut state = LevelState::new(level);
        state.alive_blocks.retain(|b| !b.is_pig());
        assert!(matches!(
            solvable_one_shot(
                &state,
                &PropagationConstants::default(),
                &TrajectoryParams::default()
            ),
            Err(Error::NoPigsAlive)
        ));
    }

    #[test]
    fn score_shortfall_anchors() {
        assert_eq!(score_shortfall(0.0, 5000.0), 1.0);
        assert_eq!(score_shortfall(2500.0, 5000.0), 0.5);
        assert_eq!(score_shortfall(6000.0, 5000.0), 0.0);
    }

    #[test]
    fn score_shortfall_is_nonincreasing_and_piecewise_linear() {
        let t = 7000.0;
        let mut last = f64::INFINITY;
        for delta in (0..=16000).step_by(250) {
            let v = score_shortfall(delta as f64, t);
            assert!(v <= last);
            assert!((0.0..=1.0).contains(&v));
            last = v;
        }
        // Linear segment: halfway between two points on the ramp.
        let a = score_shortfall(1000.0, t);
        let b = score_shortfall(3000.0, t);
        assert!((score_shortfall(2000.0, t) - (a + b) / 2.0).abs() < 1e-12);
    }

    fn outcome(
        score_delta: u64,
        change_fraction: f64,
        hit: Option<Material>,
        bird: BirdKind,
    ) -> ShotOutcome {
        ShotOutcome {
            score_delta,
            change_fraction,
            hit_material: hit,
            bird,
            birds_remaining_after: 1,
        }
    }

    #[test]
    fn good_use_grades_change_and_material() {
        let config = RestartConfig::default();
        // Yellow into wood destroying 40% of the level: effective hit.
        let (change, kind) = good_use_terms(
            &outcome(0, 0.4, Some(Material::Wood), BirdKind::Yellow),
            &config,
        );
        assert!((change - 0.6).abs() < 1e-12);
        assert_eq!(kind, 0.0);
        // Blue into stone moving nothing: the canonical wasted shot.
        let (change, kind) = good_use_terms(
            &outcome(0, 0.0, Some(Material::Stone), BirdKind::Blue),
            &config,
        );
        assert_eq!(change, 1.0);
        assert_eq!(kind, 1.0);
        // Everything destroyed: change term collapses to zero.
        let (change, _) = good_use_terms(
            &outcome(0, 1.0, Some(Material::Stone), BirdKind::Black),
            &config,
        );
        assert_eq!(change, 0.0);
    }

    #[test]
    fn restart_score_anchors() {
        let w = RestartWeights::default();
        assert!((restart_score(1.0, 1.0, 1.0, 1.0, &w) - 1.0).abs() < 1e-12);
        assert_eq!(restart_score(0.0, 0.0, 0.0, 0.0, &w), 0.0);
        assert!((restart_score(1.0, 0.0, 1.0, 0.0, &w) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn restart_score_is_monotone_in_terms_and_weights() {
        let w = RestartWeights::default();
        let base = restart_score(0.3, 0.5, 0.2, 0.0, &w);
        assert!(restart_score(0.4, 0.5, 0.2, 0.0, &w) >= base);
        assert!(restart_score(0.3, 0.6, 0.2, 0.0, &w) >= base);
        assert!(restart_score(0.3, 0.5, 0.3, 0.0, &w) >= base);
        assert!(restart_score(0.3, 0.5, 0.2, 0.5, &w) >= base);
        let heavier = RestartWeights {
            change: 0.3,
            ..RestartWeights::default()
        };
        assert!(restart_score(0.3, 0.5, 0.2, 0.0, &heavier) >= base);
    }

    #[test]
    fn last_bird_unsolvable_forces_restart() {
        let state = LevelState::new(vault_level(vec![BirdKind::Red]));
        let decision = should_restart(
            &state,
            None,
            &RestartConfig::default(),
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        );
        assert!(decision.restart);
        assert_eq!(decision.terms.unsolvable, 1.0);
        assert!(!decision.verdict.unwrap().solvable);
        // The hard rule holds for any weight vector, even all-zero weights.
        let zero = RestartConfig {
            weights: RestartWeights {
                change: 0.0,
                block_type: 0.0,
                score: 0.0,
                unsolvable: 0.0,
            },
            ..RestartConfig::default()
        };
        let state = LevelState::new(vault_level(vec![BirdKind::Red]));
        let decision = should_restart(
            &state,
            None,
            &zero,
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        );
        assert!(decision.restart);
        assert_eq!(decision.score, 0.0);
    }

    #[test]
    fn plenty_of_birds_and_a_good_shot_keeps_playing() {
        let state = LevelState::new(vault_level(vec![
            BirdKind::Red,
            BirdKind::Red,
            BirdKind::Red,
        ]));
        let good = ShotOutcome {
            score_delta: 20000,
            change_fraction: 1.0,
            hit_material: Some(Material::Stone),
            bird: BirdKind::Black,
            birds_remaining_after: 2,
        };
        let decision = should_restart(
            &state,
            Some(&good),
            &RestartConfig::default(),
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        );
        assert!(!decision.restart);
        assert_eq!(decision.score, 0.0);
        assert!(decision.verdict.is_none());
    }

    #[test]
    fn weighted_terms_cross_the_threshold_mid_level() {
        // Two birds left: the verdict is not consulted; a fully wasted shot
        // scores 0.6 with the default weights and trips the 0.5 threshold.
        let state = LevelState::new(vault_level(vec![BirdKind::Red, BirdKind::Red]));
        let wasted = outcome(0, 0.0, Some(Material::Stone), BirdKind::Blue);
        let decision = should_restart(
            &state,
            Some(&wasted),
            &RestartConfig::default(),
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        );
        assert!((decision.score - 0.6).abs() < 1e-12);
        assert!(decision.restart);
        assert!(decision.verdict.is_none());
        assert_eq!(decision.terms.unsolvable, 0.0);
    }

    #[test]
    fn before_any_shot_all_terms_are_zero() {
        let state = LevelState::new(vault_level(vec![BirdKind::Red, BirdKind::Red]));
        let decision = should_restart(
            &state,
            None,
            &RestartConfig::default(),
            &PropagationConstants::default(),
            &TrajectoryParams::default(),
        );
        assert_eq!(decision.score, 0.0);
        assert!(!decision.restart);
    }

    #[test]
    fn solvability_grows_with_the_loss_factors() {
        // Superset direction: anything solvable under attenuated constants
        // stays solvable under the lossless defaults.
        let level = level_from(
            vec![
                ground(),
                Block::new(1, Material::Wood, 10.0, 1.0, 1.0, 1.0),
                Block::new(2, Material::Pig, 11.0, 1.0, 0.5, 0.5),
            ],
            vec![BirdKind::Red],
        );
        let state = LevelState::new(level);
        let trajectory = TrajectoryParams::default();
        let attenuated = PropagationConstants {
            direct_loss: 0.5,
            falling_loss: 0.5,
            travel_loss: 0.5,
            ..PropagationConstants::default()
        };
        let weak = solvable_one_shot(&state, &attenuated, &trajectory).unwrap();
        let strong =
            solvable_one_shot(&state, &PropagationConstants::default(), &trajectory).unwrap();
        if weak.solvable {
            assert!(strong.solvable);
        }
        assert!(strong.solvable);
    }
}
