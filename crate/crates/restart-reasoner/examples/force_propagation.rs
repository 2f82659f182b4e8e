//! Force propagation: the four transfer rules, a full force map, and the
//! all-pairs propagation matrix.
//!
//! ```bash
//! cargo run -p restart-reasoner --example force_propagation
//! ```

use restart_reasoner::level::{Block, Material};
use restart_reasoner::propagation::{PropagationConstants, Propagator};

fn main() {
    // A row of crates, a tower leaning over a pig, and a scrap of debris:
    //
    //                      [4]
    //                      [3]      (7)
    //            [1][2]    [t]  (d)  pig
    //   ground ─────────────────────────────
    let blocks = vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 24.0, 1.0),
        Block::new(1, Material::Wood, 4.0, 1.0, 1.0, 1.0),
        Block::new(2, Material::Wood, 5.0, 1.0, 1.0, 1.0),
        Block::new(3, Material::Stone, 10.0, 1.0, 1.0, 2.0),
        Block::new(4, Material::Stone, 10.0, 3.0, 1.0, 1.0),
        Block::new(5, Material::Wood, 12.5, 1.0, 0.5, 0.5),
        Block::new(7, Material::Pig, 14.0, 1.0, 0.5, 0.5),
    ];

    let constants = PropagationConstants::default(); // lossless regime
    let propagator = Propagator::new(&blocks, &constants);

    println!("direct push targets:");
    for block in &blocks {
        if !block.is_ground() {
            let targets: Vec<u32> = propagator
                .direct_targets(block.id)
                .iter()
                .map(|id| id.0)
                .collect();
            println!("  block {} -> {targets:?}", block.id);
        }
    }

    println!("\nrule gates from the tower base (block 3):");
    for target in [5u32, 7] {
        use restart_reasoner::level::BlockId;
        println!(
            "  to {target}: falling={} structure={} thrown={}",
            propagator.falling_applies(BlockId(3), BlockId(target)),
            propagator.structure_falling_applies(BlockId(3), BlockId(target)),
            propagator.thrown_applies(BlockId(3), BlockId(target)),
        );
    }

    let map = propagator
        .propagate(restart_reasoner::level::BlockId(3), 1.0)
        .expect("unit impact");
    println!("\nunit impact on the tower base:");
    for (id, force) in &map.forces {
        let mark = if map.destroyed.contains(id) { " destroyed" } else { "" };
        println!("  block {id}: force {force:.4}{mark}");
    }

    let matrix = propagator.matrix();
    println!("\npropagation matrix (rows = impact block):");
    print!("      ");
    for id in &matrix.block_ids {
        print!("{:>7}", id.0);
    }
    println!();
    for &source in &matrix.block_ids {
        print!("  {:>3} ", source.0);
        for &target in &matrix.block_ids {
            print!("{:>7.3}", matrix.force(source, target));
        }
        println!();
    }

    // Attenuated constants dissipate along the chain.
    let lossy = PropagationConstants {
        direct_loss: 0.8,
        falling_loss: 0.8,
        travel_loss: 0.9,
        ..PropagationConstants::default()
    };
    let lossy_map = Propagator::new(&blocks, &lossy)
        .propagate(restart_reasoner::level::BlockId(1), 1.0)
        .unwrap();
    println!("\nlossy chain from block 1: 1 -> {:.2}", lossy_map.force(restart_reasoner::level::BlockId(2)));
}
