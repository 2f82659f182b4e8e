//! The restart policy: shot-use grading, score shortfall, the weighted
//! restart score, and the hard last-bird rule.
//!
//! ```bash
//! cargo run -p restart-reasoner --example restart_policy
//! ```

use restart_reasoner::heuristics::{
    good_use_terms, score_shortfall, should_restart, RestartConfig, ShotOutcome,
};
use restart_reasoner::level::{BirdKind, Block, Bounds, Level, LevelState, Material, Point};
use restart_reasoner::propagation::PropagationConstants;
use restart_reasoner::trajectory::TrajectoryParams;

fn main() {
    let config = RestartConfig::default();

    println!("score shortfall against the red-bird threshold (5000):");
    for delta in [0u64, 1500, 2500, 5000, 9000] {
        println!("  gained {delta:>5} -> {:.2}", score_shortfall(delta as f64, 5000.0));
    }

    let wasted = ShotOutcome {
        score_delta: 180,
        change_fraction: 0.02,
        hit_material: Some(Material::Stone),
        bird: BirdKind::Blue,
        birds_remaining_after: 1,
    };
    let (change_term, type_term) = good_use_terms(&wasted, &config);
    println!(
        "\na blue bird grazing stone: change term {change_term:.2}, wrong-material term {type_term}"
    );

    let effective = ShotOutcome {
        score_delta: 12_000,
        change_fraction: 0.55,
        hit_material: Some(Material::Wood),
        bird: BirdKind::Yellow,
        birds_remaining_after: 1,
    };
    let (change_term, type_term) = good_use_terms(&effective, &config);
    println!("a yellow bird shredding wood: change term {change_term:.2}, wrong-material term {type_term}");

    // Mid-level decision: two birds left, terms only.
    let vault = Level {
        sling: Point::new(0.5, 2.0),
        birds: vec![BirdKind::Red, BirdKind::Red],
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
    let constants = PropagationConstants::default();
    let trajectory = TrajectoryParams::default();

    let mid = LevelState::new(vault.clone());
    let decision = should_restart(&mid, Some(&wasted), &config, &constants, &trajectory);
    println!(
        "\ntwo birds left after the wasted shot: score {:.2} vs threshold {} -> restart: {}",
        decision.score, config.restart_threshold, decision.restart
    );

    // Last bird against a sealed vault: the hard rule overrides everything.
    let mut last = LevelState::new(vault);
    last.remaining_birds.pop();
    let decision = should_restart(&last, Some(&effective), &config, &constants, &trajectory);
    println!(
        "last bird, sealed vault, even after a great shot: score {:.2} -> restart: {} (hard rule)",
        decision.score, decision.restart
    );
}
