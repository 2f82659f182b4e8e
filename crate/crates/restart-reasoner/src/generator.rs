//! Deterministic procedural level corpus.
//!
//! Every level gets a ground row, one to three block structures, and pigs
//! placed by style. Styles pin the ground truth where it matters: exposed
//! pig clusters are verified one-shot solvable, sealed vaults are verified
//! unsolvable, and under-shelf placements land wherever the rules put them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::level::{quantize, BirdKind, Block, Bounds, Level, LevelState, Material, Point};
use crate::oracle::{mix_seed, oracle_solvable, OracleConstants};
use crate::trajectory::TrajectoryParams;

/// Pig placement style of one generated level.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureStyle {
    /// A pig cluster in the open; one-shot solvable by construction.
    Exposed,
    /// Pigs sheltered under a shelf on columns; solvability varies.
    UnderShelf,
    /// A pig sealed in a stone vault; one-shot unsolvable by construction.
    SealedVault,
}

/// Corpus generation parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusParams {
    pub count: usize,
    /// Range of non-ground, non-pig blocks per level.
    pub blocks: (usize, usize),
    /// Range of pigs per level.
    pub pigs: (usize, usize),
    /// Range of birds per level.
    pub birds: (usize, usize),
    pub styles: Vec<StructureStyle>,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            count: 50,
            blocks: (3, 9),
            pigs: (1, 3),
            birds: (1, 2),
            styles: vec![
                StructureStyle::Exposed,
                StructureStyle::UnderShelf,
                StructureStyle::SealedVault,
            ],
        }
    }
}

const WORLD: Bounds = Bounds {
    width: 24.0,
    height: 16.0,
};
const SLING: Point = Point { x: 0.5, y: 2.0 };
const GROUND_TOP: f64 = 1.0;

/// Generate `params.count` levels deterministically from the seed. Every
/// emitted level passes validation; style-pinned levels are re-rolled until
/// the oracle agrees with the style's ground truth.
pub fn generate_corpus(params: &CorpusParams, seed: u64) -> Vec<Level> {
    assert!(params.count > 0, "empty corpus requested");
    assert!(params.blocks.0 <= params.blocks.1 && params.pigs.0 <= params.pigs.1);
    assert!(params.pigs.0 >= 1 && params.birds.0 >= 1 && params.birds.1 >= params.birds.0);
    let oracle = OracleConstants::default();
    let trajectory = TrajectoryParams::default();
    (0..params.count)
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, index as u64));
            // Re-roll until the level validates and matches its style's
            // pinned ground truth; the rng stream advances, so retries stay
            // deterministic.
            loop {
                let style = params.styles[rng.gen_range(0..params.styles.len())];
                let level = generate_level(params, style, &mut rng);
                if !level.validate().is_empty() {
                    continue;
                }
                let truth = oracle_solvable(&LevelState::new(level.clone()), &oracle, &trajectory);
                let acceptable = match style {
                    StructureStyle::Exposed => truth,
                    StructureStyle::SealedVault => !truth,
                    StructureStyle::UnderShelf => true,
                };
                if acceptable {
                    return level;
                }
            }
        })
        .collect()
}

fn generate_level(params: &CorpusParams, style: StructureStyle, rng: &mut ChaCha8Rng) -> Level {
    let mut builder = LevelBuilder::new();
    let birds = {
        let n = rng.gen_range(params.birds.0..=params.birds.1);
        (0..n).map(|_| random_bird(rng)).collect()
    };

    match style {
        StructureStyle::Exposed => {
            let pigs = rng.gen_range(params.pigs.0..=params.pigs.1);
            let mut x = 8.0 + rng.gen_range(0..13) as f64 * 0.5;
            for _ in 0..pigs.min(4) {
                builder.push(Material::Pig, x, GROUND_TOP, 0.5, 0.5);
                x += 0.5; // touching cluster so one hit chains through all
            }
            // Decorative structures strictly behind the cluster.
            let extras = rng.gen_range(params.blocks.0..=params.blocks.1);
            builder.scatter_columns(rng, extras, x + 1.5, WORLD.width - 2.0);
        }
        StructureStyle::UnderShelf => {
            let x = 8.0 + rng.gen_range(0..12) as f64 * 0.5;
            let column_h = 1.0 + rng.gen_range(0..3) as f64 * 0.5;
            let span = 2.5 + rng.gen_range(0..3) as f64 * 0.5;
            let material = random_solid(rng);
            builder.push(material, x, GROUND_TOP, 1.0, column_h);
            builder.push(material, x + span + 1.0, GROUND_TOP, 1.0, column_h);
            builder.push(
                random_solid(rng),
                x - 0.5,
                GROUND_TOP + column_h,
                span + 3.0,
                0.5,
            );
            let pigs = rng.gen_range(params.pigs.0..=params.pigs.1).min(2);
            let mut px = x + 1.5;
            for _ in 0..pigs {
                builder.push(Material::Pig, px, GROUND_TOP, 0.5, 0.5);
                px += 0.75;
            }
            let extras = rng
                .gen_range(params.blocks.0..=params.blocks.1)
                .saturating_sub(3);
            builder.scatter_columns(rng, extras, x + span + 3.0, WORLD.width - 2.0);
        }
        StructureStyle::SealedVault => {
            let x = 8.0 + rng.gen_range(0..10) as f64 * 0.5;
            let wall_h = 1.5;
            let gap = 4.0 + rng.gen_range(0..3) as f64 * 0.5;
            builder.push(Material::Stone, x, GROUND_TOP, 1.0, wall_h);
            builder.push(Material::Stone, x + 1.0 + gap, GROUND_TOP, 1.0, wall_h);
            builder.push(
                Material::Stone,
                x - 0.5,
                GROUND_TOP + wall_h,
                gap + 3.0,
                0.5,
            );
            // The pig stays outside the left wall's fall arc and reach.
            builder.push(Material::Pig, x + 1.0 + gap / 2.0, GROUND_TOP, 0.5, 0.5);
            let extras = rng
                .gen_range(params.blocks.0..=params.blocks.1)
                .saturating_sub(3);
            builder.scatter_columns(rng, extras, x + gap + 3.5, WORLD.width - 2.0);
        }
    }

    builder.finish(birds)
}

fn random_bird(rng: &mut ChaCha8Rng) -> BirdKind {
    match rng.gen_range(0..5) {
        0 => BirdKind::Red,
        1 => BirdKind::Blue,
        2 => BirdKind::Yellow,
        3 => BirdKind::Black,
        _ => BirdKind::White,
    }
}

fn random_solid(rng: &mut ChaCha8Rng) -> Material {
    match rng.gen_range(0..3) {
        0 => Material::Wood,
        1 => Material::Ice,
        _ => Material::Stone,
    }
}

struct LevelBuilder {
    blocks: Vec<Block>,
    next_id: u32,
}

impl LevelBuilder {
    fn new() -> Self {
        let ground = Block::new(0, Material::Ground, 0.0, 0.0, WORLD.width, GROUND_TOP);
        LevelBuilder {
            blocks: vec![ground],
            next_id: 1,
        }
    }

    fn push(&mut self, material: Material, x: f64, y: f64, w: f64, h: f64) {
        let block = Block::new(
            self.next_id,
            material,
            quantize(x),
            quantize(y),
            quantize(w),
            quantize(h),
        );
        self.next_id += 1;
        self.blocks.push(block);
    }

    /// Add small stacked columns inside `[from, to]`, skipping positions
    /// that would overlap existing blocks.
    fn scatter_columns(&mut self, rng: &mut ChaCha8Rng, budget: usize, from: f64, to: f64) {
        let mut remaining = budget;
        let mut guard = 0;
        while remaining > 0 && guard < 40 {
            guard += 1;
            if to - from < 1.5 {
                break;
            }
            let slots = ((to - from - 1.0) / 0.5) as u64;
            if slots == 0 {
                break;
            }
            let x = from + rng.gen_range(0..=slots) as f64 * 0.5;
            let height = rng.gen_range(1..=3.min(remaining)) as f64;
            let candidate = Block::new(0, Material::Wood, x, GROUND_TOP, 1.0, height);
            let clear = self.blocks.iter().all(|b| {
                b.is_ground()
                    || candidate.x_max() + 0.25 <= b.x
                    || b.x_max() + 0.25 <= candidate.x
            });
            if !clear {
                continue;
            }
            let stack = height as usize;
            let material = random_solid(rng);
            for i in 0..stack {
                self.push(material, x, GROUND_TOP + i as f64, 1.0, 1.0);
            }
            remaining -= stack;
        }
    }

    fn finish(self, birds: Vec<BirdKind>) -> Level {
        Level {
            sling: SLING,
            birds,
            bounds: WORLD,
            blocks: self.blocks,
        }
    }
}
