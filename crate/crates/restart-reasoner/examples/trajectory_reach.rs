//! Trajectories: launch-angle solving, parabola tracing, and occlusion-aware
//! reachability.
//!
//! ```bash
//! cargo run -p restart-reasoner --example trajectory_reach
//! ```

use restart_reasoner::level::{Block, Bounds, Material, Point, Scene};
use restart_reasoner::trajectory::{launch_angles, reachable_blocks, TrajectoryParams};

fn main() {
    let params = TrajectoryParams::default();
    let origin = Point::new(0.5, 2.0);

    println!("launch solutions (speed 20, gravity {}):", params.gravity);
    for target in [
        Point::new(10.0, 2.0),
        Point::new(30.0, 2.0),
        Point::new(60.0, 2.0),
    ] {
        match launch_angles(target, 20.0, params.gravity, origin) {
            Ok(angles) if angles.is_empty() => println!("  x={}: out of range", target.x),
            Ok(angles) => println!(
                "  x={}: {}",
                target.x,
                angles
                    .iter()
                    .map(|a| format!("{:.3} rad", a))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            Err(e) => println!("  x={}: {e}", target.x),
        }
    }

    // A wall shields the pig's left face; the shelf above leaves only a
    // steep approach to the wood block.
    let blocks = vec![
        Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
        Block::new(1, Material::Stone, 9.0, 1.0, 1.0, 2.5),
        Block::new(2, Material::Wood, 10.2, 1.0, 1.0, 1.0),
        Block::new(3, Material::Pig, 13.0, 1.0, 0.5, 0.5),
    ];
    let scene = Scene {
        sling: origin,
        bounds: Bounds {
            width: 20.0,
            height: 14.0,
        },
        blocks: &blocks,
    };

    println!("\nreachable blocks and their verified shots:");
    for (id, shots) in reachable_blocks(&scene, &params) {
        println!("  block {id}:");
        for shot in shots {
            println!(
                "    {} / {} arc, angle {:.3} rad, speed {:.1}",
                shot.target_point.as_str(),
                shot.arc.as_str(),
                shot.angle,
                shot.speed
            );
        }
    }
    println!("\nthe sheltered wood block (2) accepts only top-center shots;");
    println!("the wall (1) and the pig (3) keep their open faces.");
}
