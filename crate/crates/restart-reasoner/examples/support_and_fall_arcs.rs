//! Contact graphs, support structures, and the fall arcs that drive the
//! falling rules.
//!
//! ```bash
//! cargo run -p restart-reasoner --example support_and_fall_arcs
//! ```

use restart_reasoner::geometry::{
    fall_arc, support_structure, ContactGraph, FallDirection, DEFAULT_CONTACT_TOLERANCE,
};
use restart_reasoner::level::{Block, BlockId, Material};

fn main() {
    // A beam across two columns with a pig camped beside the right column.
    let blocks = vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
        Block::new(1, Material::Stone, 6.0, 1.0, 1.0, 1.0),
        Block::new(2, Material::Stone, 6.0, 2.0, 1.0, 1.0),
        Block::new(3, Material::Stone, 10.0, 1.0, 1.0, 1.0),
        Block::new(4, Material::Stone, 10.0, 2.0, 1.0, 1.0),
        Block::new(5, Material::Wood, 5.5, 3.0, 6.0, 0.5),
        Block::new(6, Material::Pig, 11.5, 1.0, 0.5, 0.5),
    ];

    let graph = ContactGraph::build(&blocks, DEFAULT_CONTACT_TOLERANCE);
    println!("contact edges:");
    for block in &blocks {
        for contact in graph.contacts(block.id) {
            if contact.other > block.id {
                println!(
                    "  {} <-> {} ({:?} of {})",
                    block.id, contact.other, contact.placement, block.id
                );
            }
        }
    }

    let support = support_structure(BlockId(5), &blocks, &graph);
    println!(
        "\nsupport structure of the beam: {:?}",
        support.iter().map(|id| id.0).collect::<Vec<_>>()
    );

    let pig = &blocks[6];
    println!("\nwhose fall arc reaches the pig?");
    for id in support {
        let block = blocks.iter().find(|b| b.id == id).unwrap();
        let arc = fall_arc(block, FallDirection::Rightward);
        println!(
            "  block {} (pivot ({}, {}), radius {}): {}",
            id,
            arc.pivot.x,
            arc.pivot.y,
            arc.radius,
            arc.intersects_block(pig)
        );
    }

    // The quarter-disc geometry itself.
    let column = Block::new(9, Material::Stone, 0.0, 0.0, 1.0, 3.0);
    let arc = fall_arc(&column, FallDirection::Rightward);
    println!("\nheight-3 column arc samples:");
    for (x, y) in [(1.5, 0.5), (3.5, 0.5), (1.5, 2.5), (4.5, 0.5)] {
        println!("  contains ({x}, {y}): {}", arc.contains(x, y));
    }
}
