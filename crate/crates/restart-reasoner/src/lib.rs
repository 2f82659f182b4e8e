//! Qualitative physical reasoning and restart policies for 2D
//! rectangle-world physics puzzles.
//!
//! Levels are axis-aligned blocks (wood, ice, stone, pigs, ground) on a
//! plane, attacked by a queue of birds launched from a slingshot. Instead of
//! simulating rigid-body dynamics, the engine reasons qualitatively: a
//! single impact propagates a rightward force through contact chains, fall
//! arcs, collapsing support structures, and thrown debris. On top of that
//! sit four decision heuristics (one-shot solvability, score shortfall,
//! shot use, and their weighted combination into a restart signal), a
//! deterministic toy-physics oracle for ground truth, and an evaluation
//! harness that scores the predictor with confusion-matrix rates and time
//! ratios over paired with/without-restart trials.
//!
//! ## Start with the examples
//!
//! Each major capability has one runnable example:
//!
//! ```text
//! examples/
//! ├── parse_and_validate.rs    # level files, invariants, canonical JSON
//! ├── force_propagation.rs     # the four rules, force maps, matrices
//! ├── support_and_fall_arcs.rs # contact graph, supports, quarter-disc arcs
//! ├── trajectory_reach.rs      # launch angles, tracing, occlusion
//! ├── solvability.rs           # one-shot verdicts with witnesses
//! ├── restart_policy.rs        # graded terms and the weighted signal
//! ├── play_level.rs            # toy-physics transitions under a policy
//! ├── generate_corpus.rs       # deterministic level corpora by style
//! └── evaluate_report.rs       # the full paired evaluation protocol
//! ```
//!
//! ```bash
//! cargo run -p restart-reasoner --example force_propagation
//! cargo run -p restart-reasoner --example evaluate_report
//! ```
//!
//! ## Quick taste
//!
//! ```
//! use restart_reasoner::heuristics::solvable_one_shot;
//! use restart_reasoner::level::{BirdKind, Block, Bounds, Level, LevelState, Material, Point};
//! use restart_reasoner::propagation::PropagationConstants;
//! use restart_reasoner::trajectory::TrajectoryParams;
//!
//! let level = Level {
//!     sling: Point::new(0.5, 2.0),
//!     birds: vec![BirdKind::Red],
//!     bounds: Bounds { width: 20.0, height: 14.0 },
//!     blocks: vec![
//!         Block::new(0, Material::Ground, 0.0, 0.0, 20.0, 1.0),
//!         Block::new(1, Material::Wood, 9.0, 1.0, 1.0, 1.0),
//!         Block::new(2, Material::Pig, 10.0, 1.0, 0.5, 0.5),
//!     ],
//! };
//! let verdict = solvable_one_shot(
//!     &LevelState::new(level),
//!     &PropagationConstants::default(),
//!     &TrajectoryParams::default(),
//! )
//! .unwrap();
//! assert!(verdict.solvable);
//! ```
//!
//! A thin `restart-reasoner` binary wraps the same entry points as
//! `validate`, `solvable`, `generate`, and `evaluate` subcommands; see the
//! repository README.

pub mod config;
pub mod error;
pub mod generator;
pub mod geometry;
pub mod harness;
pub mod heuristics;
pub mod level;
pub mod oracle;
pub mod propagation;
pub mod trajectory;

pub use error::{Error, Result};
