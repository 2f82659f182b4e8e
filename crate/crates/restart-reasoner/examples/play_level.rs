//! Playing a level with the toy physics: policies choose shots, shots
//! destroy blocks and bank points.
//!
//! ```bash
//! cargo run -p restart-reasoner --example play_level
//! ```

use restart_reasoner::level::{BirdKind, Block, Bounds, Level, LevelState, Material, Point};
use restart_reasoner::oracle::{apply_shot, next_shot, oracle_solvable, AgentPolicy, OracleConstants, PolicyKind};
use restart_reasoner::trajectory::TrajectoryParams;

fn main() {
    let level = Level {
        sling: Point::new(0.5, 2.0),
        birds: vec![BirdKind::Red, BirdKind::Yellow, BirdKind::Blue],
        bounds: Bounds {
            width: 22.0,
            height: 14.0,
        },
        blocks: vec![
            Block::new(0, Material::Ground, 0.0, 0.0, 22.0, 1.0),
            Block::new(1, Material::Wood, 9.0, 1.0, 1.0, 2.0),
            Block::new(2, Material::Wood, 8.5, 3.0, 2.0, 0.5),
            Block::new(3, Material::Pig, 10.5, 1.0, 0.5, 0.5),
            Block::new(4, Material::Ice, 13.0, 1.0, 1.0, 1.0),
            Block::new(5, Material::Pig, 14.5, 1.0, 0.5, 0.5),
        ],
    };

    let oracle = OracleConstants::default();
    let trajectory = TrajectoryParams::default();

    for (name, kind) in [
        ("naive (random pig)", PolicyKind::NaiveRandomPig),
        ("greedy (max damage)", PolicyKind::GreedyMaxDamage),
    ] {
        println!("=== {name} ===");
        let mut state = LevelState::new(level.clone());
        let mut shot_index = 0u64;
        while !state.remaining_birds.is_empty() && state.alive_pigs().next().is_some() {
            let policy = AgentPolicy::new(kind, 40 + shot_index);
            let shot = match next_shot(&policy, &state, &oracle, &trajectory) {
                Ok(shot) => shot,
                Err(e) => {
                    println!("  stuck: {e}");
                    break;
                }
            };
            let (next, outcome) = apply_shot(&state, &shot, &oracle, &trajectory).unwrap();
            println!(
                "  {:?} at block {} ({}, {} arc): +{} points, {:.0}% of blocks changed, {} pigs left",
                outcome.bird,
                shot.target_block,
                shot.target_point.as_str(),
                shot.arc.as_str(),
                outcome.score_delta,
                outcome.change_fraction * 100.0,
                next.alive_pigs().count(),
            );
            state = next;
            shot_index += 1;
        }
        println!(
            "  finished: solved={} score={} time={:.0}s\n",
            state.alive_pigs().next().is_none(),
            state.accumulated_score,
            state.elapsed_time
        );
    }

    let state = LevelState::new(level);
    println!(
        "ground truth before any shot: one-shot solvable = {}",
        oracle_solvable(&state, &oracle, &trajectory)
    );
}
