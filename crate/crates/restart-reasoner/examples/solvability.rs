//! One-shot solvability verdicts: a witness shot when the level can fall in
//! one impact, the blocking pigs when it cannot.
//!
//! ```bash
//! cargo run -p restart-reasoner --example solvability
//! ```

use restart_reasoner::heuristics::solvable_one_shot;
use restart_reasoner::level::{BirdKind, Block, Bounds, Level, LevelState, Material, Point};
use restart_reasoner::propagation::PropagationConstants;
use restart_reasoner::trajectory::TrajectoryParams;

fn base(blocks: Vec<Block>) -> LevelState {
    LevelState::new(Level {
        sling: Point::new(0.5, 2.0),
        birds: vec![BirdKind::Red],
        bounds: Bounds {
            width: 20.0,
            height: 14.0,
        },
        blocks,
    })
}

fn report(name: &str, state: &LevelState, constants: &PropagationConstants) {
    let verdict = solvable_one_shot(state, constants, &TrajectoryParams::default()).unwrap();
    if verdict.solvable {
        let (shot, map) = verdict.witness.unwrap();
        println!(
            "{name}: solvable — hit block {} at {} ({} arc); {} blocks destroyed",
            shot.target_block,
            shot.target_point.as_str(),
            shot.arc.as_str(),
            map.destroyed.len()
        );
    } else {
        println!(
            "{name}: unsolvable — pigs out of reach: {:?}",
            verdict.pigs_unkillable.iter().map(|id| id.0).collect::<Vec<_>>()
        );
    }
}

fn main() {
    let constants = PropagationConstants::default();

    // A pig behind a crate: the crate chain carries the impact through.
    let sheltered = base(vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
        Block::new(1, Material::Wood, 9.0, 1.0, 1.0, 1.0),
        Block::new(2, Material::Pig, 10.0, 1.0, 0.5, 0.5),
    ]);
    report("crate-shielded pig", &sheltered, &constants);

    // A stone vault: walls too big to throw, the pig outside every fall
    // arc, nothing touching it. No rule chain gets force inside.
    let vault = base(vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
        Block::new(1, Material::Stone, 9.0, 1.0, 1.0, 1.5),
        Block::new(2, Material::Stone, 14.0, 1.0, 1.0, 1.5),
        Block::new(3, Material::Stone, 8.5, 2.5, 7.0, 0.5),
        Block::new(4, Material::Pig, 11.75, 1.0, 0.5, 0.5),
    ]);
    report("sealed vault", &vault, &constants);

    // Two pigs on opposite ends: each dies to some shot, never both to one.
    let split = base(vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
        Block::new(1, Material::Pig, 6.0, 1.0, 0.5, 0.5),
        Block::new(2, Material::Pig, 16.0, 1.0, 0.5, 0.5),
    ]);
    report("split pigs", &split, &constants);

    // Solvability is monotone in the loss factors: a pig that needs 0.7 of
    // the impact through a two-hop chain dies under lossless transfer but
    // survives once each contact halves the force.
    let chain = base(vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
        Block::new(1, Material::Stone, 10.0, 1.0, 1.0, 2.5),
        Block::new(2, Material::Wood, 11.0, 1.0, 1.0, 0.5),
        Block::new(3, Material::Pig, 12.0, 1.0, 0.5, 0.5),
        Block::new(4, Material::Stone, 9.5, 4.0, 5.5, 0.5),
        Block::new(5, Material::Stone, 14.0, 1.0, 1.0, 3.0),
    ]);
    let mut tough = PropagationConstants::default();
    tough.kill.pig = 0.7;
    let lossy = PropagationConstants {
        direct_loss: 0.5,
        ..tough.clone()
    };
    println!("\na covered chain with a tough pig (kill threshold 0.7):");
    report("  lossless contact", &chain, &tough);
    report("  half per contact", &chain, &lossy);
}
