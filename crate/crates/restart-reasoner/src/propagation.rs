//! Force propagation: the four transfer rules and the fixpoint algorithm
//! that turns a single rightward impact into per-block received forces.
//!
//! # Rules
//!
//! Starting from the struck block, force spreads through four channels, each
//! gated by a geometric predicate and attenuated by its own loss factor:
//!
//! 1. **Direct contact** — a pushed block passes force to every contact
//!    neighbor placed right-of, above, or below it; the force splits evenly
//!    among the `n` receivers and loses a contact factor.
//! 2. **Falling** — a pushed block may topple rightward onto anything inside
//!    its fall arc and within one block-height of horizontal reach; the
//!    transferred force scales with `sin(pi * d / h)` of the toppling sweep.
//! 3. **Structure falling** — if the receiver sits in the fall arc of any
//!    block supporting the pushed block, the whole structure may come down on
//!    it; the force passes through undiminished.
//! 4. **Thrown debris** — a sufficiently small pushed block can fly rightward
//!    and strike anything within a reach window, losing a per-unit-traveled
//!    factor along the way.
//!
//! Contributions to one block combine by maximum. Expansion is best-first and
//! stops once no block's recorded force can improve by at least the
//! quantization step, or once everything pending is below the force floor.
//!
//! With every loss factor at 1 the engine deliberately overestimates: any
//! chain that could carry force is assumed to carry it fully. Ground rows
//! neither receive nor forward force.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    fall_arc, support_structure, ContactGraph, FallArc, FallDirection, Placement,
    DEFAULT_CONTACT_TOLERANCE,
};
use crate::level::{Block, BlockId, Material};

/// Recorded forces live on this grid; improvements smaller than one step are
/// ignored, which bounds the number of re-expansions.
const FORCE_QUANTUM: f64 = 1e-6;

/// Hard cap on best-first pops. Unreachable under the exponential thrown law
/// (forces never grow along a chain); guards against runaway amplification
/// when the multiplicative thrown law is selected with large reach settings.
const EXPANSION_BUDGET: usize = 1_000_000;

/// How the thrown-debris force decays with the distance traveled.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThrownForceLaw {
    /// Per-unit exponential decay: each traveled unit multiplies by the
    /// travel loss factor. The default.
    Exponential,
    /// Single multiplication by travel loss times distance. Kept for
    /// comparison; grows with distance, so use with care.
    Literal,
}

/// Minimum received force that destroys a block of each material. Ground is
/// indestructible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KillThresholds {
    pub ice: f64,
    pub wood: f64,
    pub stone: f64,
    pub pig: f64,
}

impl Default for KillThresholds {
    fn default() -> Self {
        KillThresholds {
            ice: 0.2,
            wood: 0.3,
            stone: 0.7,
            pig: 0.1,
        }
    }
}

impl KillThresholds {
    pub fn for_material(&self, material: Material) -> Option<f64> {
        match material {
            Material::Ice => Some(self.ice),
            Material::Wood => Some(self.wood),
            Material::Stone => Some(self.stone),
            Material::Pig => Some(self.pig),
            Material::Ground => None,
        }
    }
}

/// Every constant the four rules and the fixpoint loop consume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConstants {
    /// Loss factor applied on every direct-contact transfer.
    pub direct_loss: f64,
    /// Loss factor applied when a block topples onto a neighbor.
    pub falling_loss: f64,
    /// Per-unit-traveled loss factor for thrown debris.
    pub travel_loss: f64,
    /// Contact tolerance: gap at or below this counts as touching.
    pub contact_tolerance: f64,
    /// Blocks with area below this can be thrown.
    pub thrown_area_limit: f64,
    /// Horizontal reach window for thrown debris.
    pub thrown_reach_x: f64,
    /// Vertical reach window for thrown debris.
    pub thrown_reach_y: f64,
    /// Forces below this floor are dropped and stop propagating.
    pub force_floor: f64,
    pub kill: KillThresholds,
    pub thrown_law: ThrownForceLaw,
}

impl Default for PropagationConstants {
    /// The overestimating regime: every loss factor at 1, so any chain that
    /// could carry force is assumed to carry it fully.
    fn default() -> Self {
        PropagationConstants {
            direct_loss: 1.0,
            falling_loss: 1.0,
            travel_loss: 1.0,
            contact_tolerance: DEFAULT_CONTACT_TOLERANCE,
            thrown_area_limit: 1.0,
            thrown_reach_x: 3.0,
            thrown_reach_y: 2.0,
            force_floor: 0.01,
            kill: KillThresholds::default(),
            thrown_law: ThrownForceLaw::Exponential,
        }
    }
}

impl PropagationConstants {
    /// Range-check every field against its invariant.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (name, v) in [
            ("direct_loss", self.direct_loss),
            ("falling_loss", self.falling_loss),
            ("travel_loss", self.travel_loss),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(format!("{name} must be in (0, 1], got {v}"));
            }
        }
        if !(self.force_floor > 0.0 && self.force_floor <= 1.0) {
            return Err(format!(
                "force_floor must be in (0, 1], got {}",
                self.force_floor
            ));
        }
        if self.contact_tolerance <= 0.0 {
            return Err("contact_tolerance must be positive".to_string());
        }
        if self.thrown_area_limit <= 0.0 || self.thrown_reach_x <= 0.0 || self.thrown_reach_y <= 0.0
        {
            return Err("thrown gates must be positive".to_string());
        }
        for (name, v) in [
            ("kill.ice", self.kill.ice),
            ("kill.wood", self.kill.wood),
            ("kill.stone", self.kill.stone),
            ("kill.pig", self.kill.pig),
        ] {
            if v <= 0.0 {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Per-block force received from one impact, plus the blocks that force
/// destroys.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForceMap {
    pub impact_block: BlockId,
    /// Maximum force each block received over all rule chains. Every entry is
    /// at or above the force floor.
    pub forces: BTreeMap<BlockId, f64>,
    /// Blocks whose received force meets their material's kill threshold.
    pub destroyed: BTreeSet<BlockId>,
}

impl ForceMap {
    pub fn force(&self, id: BlockId) -> f64 {
        self.forces.get(&id).copied().unwrap_or(0.0)
    }
}

/// Direct-contact transfer: the pushed force splits evenly among the `n`
/// receivers, attenuated by the direct loss factor.
pub fn direct_force(f1: f64, n: usize, constants: &PropagationConstants) -> f64 {
    assert!(n >= 1, "direct transfer needs at least one receiver");
    (f1 / n as f64) * constants.direct_loss
}

/// Falling transfer: a block of height `faller_height` toppling onto a
/// neighbor `distance` to its right. Largest mid-sweep, zero at either end,
/// clamped below at zero.
pub fn falling_force(
    f1: f64,
    distance: f64,
    faller_height: f64,
    constants: &PropagationConstants,
) -> f64 {
    assert!(faller_height > 0.0, "degenerate block height");
    (f1 * constants.falling_loss * (PI * distance / faller_height).sin()).max(0.0)
}

/// Thrown-debris transfer over `travel` horizontal units.
pub fn thrown_force(f1: f64, travel: f64, constants: &PropagationConstants) -> f64 {
    assert!(travel >= 0.0, "thrown travel distance cannot be negative");
    match constants.thrown_law {
        ThrownForceLaw::Exponential => {
            f1 * constants.direct_loss * constants.travel_loss.powf(travel)
        }
        ThrownForceLaw::Literal => f1 * constants.direct_loss * constants.travel_loss * travel,
    }
}

fn quantize_force(v: f64) -> f64 {
    (v / FORCE_QUANTUM).round() * FORCE_QUANTUM
}

/// Rule evaluation context over one block set: the contact graph, support
/// structures, and fall arcs are computed once and shared by every query.
pub struct Propagator<'a> {
    blocks: &'a [Block],
    constants: &'a PropagationConstants,
    graph: ContactGraph,
    by_id: BTreeMap<BlockId, usize>,
    arcs: BTreeMap<BlockId, FallArc>,
    supports: BTreeMap<BlockId, BTreeSet<BlockId>>,
}

impl<'a> Propagator<'a> {
    pub fn new(blocks: &'a [Block], constants: &'a PropagationConstants) -> Self {
        let graph = ContactGraph::build(blocks, constants.contact_tolerance);
        let by_id = blocks.iter().enumerate().map(|(i, b)| (b.id, i)).collect();
        let arcs = blocks
            .iter()
            .filter(|b| !b.is_ground())
            .map(|b| (b.id, fall_arc(b, FallDirection::Rightward)))
            .collect();
        let supports = blocks
            .iter()
            .filter(|b| !b.is_ground())
            .map(|b| (b.id, support_structure(b.id, blocks, &graph)))
            .collect();
        Propagator {
            blocks,
            constants,
            graph,
            by_id,
            arcs,
            supports,
        }
    }

    pub fn graph(&self) -> &ContactGraph {
        &self.graph
    }

    fn block(&self, id: BlockId) -> &Block {
        &self.blocks[self.by_id[&id]]
    }

    /// Blocks that receive the rightward push from a direct contact: every
    /// non-ground contact neighbor placed right-of, above, or below the
    /// pushed block. Neighbors strictly to the left receive nothing, and an
    /// immovable ground row transmits nothing.
    pub fn direct_targets(&self, id: BlockId) -> Vec<BlockId> {
        if self.block(id).is_ground() {
            return Vec::new();
        }
        self.graph
            .contacts(id)
            .iter()
            .filter(|c| {
                matches!(
                    c.placement,
                    Placement::RightOf | Placement::Above | Placement::Below
                ) && !self.block(c.other).is_ground()
            })
            .map(|c| c.other)
            .collect()
    }

    /// Falling rule gate: not a direct receiver, within one block-height of
    /// horizontal reach, and inside the pushed block's rightward fall arc.
    pub fn falling_applies(&self, source: BlockId, target: BlockId) -> bool {
        if source == target {
            return false;
        }
        let o1 = self.block(source);
        let o2 = self.block(target);
        if o1.is_ground() || o2.is_ground() {
            return false;
        }
        if self.direct_targets(source).contains(&target) {
            return false;
        }
        o2.x < o1.x + o1.height && self.arcs[&source].intersects_block(o2)
    }

    /// Structure-falling gate: the target intersects the fall arc of at
    /// least one block in the source's support structure.
    pub fn structure_falling_applies(&self, source: BlockId, target: BlockId) -> bool {
        if source == target {
            return false;
        }
        let o2 = self.block(target);
        if self.block(source).is_ground() || o2.is_ground() {
            return false;
        }
        self.supports[&source]
            .iter()
            .any(|s| self.arcs[s].intersects_block(o2))
    }

    /// Thrown-debris gate: the source is small enough to fly, the target is
    /// to its right, and the target sits within the reach window.
    pub fn thrown_applies(&self, source: BlockId, target: BlockId) -> bool {
        if source == target {
            return false;
        }
        let o1 = self.block(source);
        let o2 = self.block(target);
        if o1.is_ground() || o2.is_ground() {
            return false;
        }
        o1.area() < self.constants.thrown_area_limit
            && o1.x < o2.x
            && o2.x < o1.x + self.constants.thrown_reach_x
            && o2.y < o1.y + self.constants.thrown_reach_y
    }

    /// Run the full propagation from one impact. Best-first over pending
    /// blocks; each expansion applies all four rules; a target's recorded
    /// force is the maximum over all contributions, quantized, and the target
    /// re-enters the queue only on strict improvement at or above the floor.
    pub fn propagate(&self, impact: BlockId, initial_force: f64) -> Result<ForceMap> {
        if initial_force < self.constants.force_floor {
            return Err(Error::ForceBelowFloor {
                force: initial_force,
                floor: self.constants.force_floor,
            });
        }
        assert!(self.by_id.contains_key(&impact), "impact block not in world");

        let mut forces: BTreeMap<BlockId, f64> = BTreeMap::new();
        let mut heap: BinaryHeap<Pending> = BinaryHeap::new();
        let seed = quantize_force(initial_force);
        forces.insert(impact, seed);
        heap.push(Pending {
            force: seed,
            id: impact,
        });

        let mut budget = EXPANSION_BUDGET;
        while let Some(Pending { force: f1, id }) = heap.pop() {
            if budget == 0 {
                break;
            }
            budget -= 1;
            if f1 < forces[&id] {
                continue; // stale queue entry
            }

            let offer = |target: BlockId, raw: f64, forces: &mut BTreeMap<BlockId, f64>,
                         heap: &mut BinaryHeap<Pending>| {
                let value = quantize_force(raw);
                if value < self.constants.force_floor {
                    return;
                }
                let current = forces.get(&target).copied().unwrap_or(0.0);
                if value > current {
                    forces.insert(target, value);
                    heap.push(Pending {
                        force: value,
                        id: target,
                    });
                }
            };

            let targets = self.direct_targets(id);
            if !targets.is_empty() {
                let child = direct_force(f1, targets.len(), self.constants);
                for &t in &targets {
                    offer(t, child, &mut forces, &mut heap);
                }
            }

            let source = self.block(id);
            if source.is_ground() {
                continue;
            }
            for other in self.blocks {
                if other.id == id || other.is_ground() {
                    continue;
                }
                if self.falling_applies(id, other.id) {
                    let distance = (other.x - source.x).clamp(0.0, source.height);
                    offer(
                        other.id,
                        falling_force(f1, distance, source.height, self.constants),
                        &mut forces,
                        &mut heap,
                    );
                }
                if self.structure_falling_applies(id, other.id) {
                    offer(other.id, f1, &mut forces, &mut heap);
                }
                if self.thrown_applies(id, other.id) {
                    let travel = other.x - source.x;
                    offer(
                        other.id,
                        thrown_force(f1, travel, self.constants),
                        &mut forces,
                        &mut heap,
                    );
                }
            }
        }

        let destroyed = forces
            .iter()
            .filter(|(&id, &f)| {
                self.constants
                    .kill
                    .for_material(self.block(id).material)
                    .is_some_and(|threshold| f >= threshold)
            })
            .map(|(&id, _)| id)
            .collect();

        Ok(ForceMap {
            impact_block: impact,
            forces,
            destroyed,
        })
    }

    /// One propagation row per block from a unit impact. The diagonal is 1.
    pub fn matrix(&self) -> PropagationMatrix {
        let block_ids: Vec<BlockId> = self.blocks.iter().map(|b| b.id).collect();
        let rows = block_ids
            .iter()
            .map(|&id| {
                self.propagate(id, 1.0)
                    .expect("unit impact is above any valid force floor")
                    .forces
            })
            .collect();
        PropagationMatrix { block_ids, rows }
    }
}

/// Which blocks are affected, and how hard, when each block takes a unit
/// impact. Row order follows `block_ids`.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagationMatrix {
    pub block_ids: Vec<BlockId>,
    pub rows: Vec<BTreeMap<BlockId, f64>>,
}

impl PropagationMatrix {
    pub fn force(&self, source: BlockId, target: BlockId) -> f64 {
        self.block_ids
            .iter()
            .position(|&id| id == source)
            .and_then(|row| self.rows[row].get(&target).copied())
            .unwrap_or(0.0)
    }
}

/// Max-heap entry ordered by force, ties broken toward the smaller block id.
#[derive(Copy, Clone, Debug)]
struct Pending {
    force: f64,
    id: BlockId,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.force
            .total_cmp(&other.force)
            .then_with(|| other.id.cmp(&self.id))
    }
}
