//! Rectangle predicates, the contact graph, fall arcs, and support
//! structures.
//!
//! Contact is tolerance-based: two blocks are in contact when their
//! rectangles, each dilated by half the contact tolerance, intersect with a
//! positive-length overlap on at least one axis. Every contact edge carries a
//! relative placement label (left-of / right-of / above / below) chosen by
//! the axis the blocks actually touch on; pure corner-point contacts carry no
//! usable placement and produce no edge.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::level::{Block, BlockId, Point};

/// Default contact tolerance in world units. Blocks whose gap is at most this
/// are in contact; interpenetration deeper than this is a level violation.
pub const DEFAULT_CONTACT_TOLERANCE: f64 = 0.05;

/// True iff the closed intervals `[a_lo, a_hi]` and `[b_lo, b_hi]` share at
/// least one point.
pub fn intervals_overlap(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> bool {
    debug_assert!(a_lo <= a_hi && b_lo <= b_hi);
    a_lo <= b_hi && b_lo <= a_hi
}

/// Placement of a contact neighbor relative to the block that owns the edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Placement {
    LeftOf,
    RightOf,
    Above,
    Below,
}

impl Placement {
    /// The label carried by the reverse direction of the same edge.
    pub fn converse(self) -> Placement {
        match self {
            Placement::LeftOf => Placement::RightOf,
            Placement::RightOf => Placement::LeftOf,
            Placement::Above => Placement::Below,
            Placement::Below => Placement::Above,
        }
    }
}

/// One directed half of a contact edge: `other` sits `placement` relative to
/// the block whose adjacency list holds this entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contact {
    pub other: BlockId,
    pub placement: Placement,
}

/// Symmetric contact graph over a block set, with placement-labeled edges.
#[derive(Clone, Debug, Default)]
pub struct ContactGraph {
    adjacency: BTreeMap<BlockId, Vec<Contact>>,
}

impl ContactGraph {
    /// Build the graph over `blocks` with the given contact tolerance.
    pub fn build(blocks: &[Block], tolerance: f64) -> ContactGraph {
        let mut adjacency: BTreeMap<BlockId, Vec<Contact>> = BTreeMap::new();
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                if let Some(placement) = classify_contact(a, b, tolerance) {
                    adjacency.entry(a.id).or_default().push(Contact {
                        other: b.id,
                        placement,
                    });
                    adjacency.entry(b.id).or_default().push(Contact {
                        other: a.id,
                        placement: placement.converse(),
                    });
                }
            }
        }
        for contacts in adjacency.values_mut() {
            contacts.sort_by_key(|c| c.other);
        }
        ContactGraph { adjacency }
    }

    pub fn contacts(&self, id: BlockId) -> &[Contact] {
        self.adjacency.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn neighbors_with(&self, id: BlockId, placement: Placement) -> impl Iterator<Item = BlockId> + '_ {
        self.contacts(id)
            .iter()
            .filter(move |c| c.placement == placement)
            .map(|c| c.other)
    }
}

/// Classify the contact between two blocks, if any. Returns the placement of
/// `b` relative to `a`.
fn classify_contact(a: &Block, b: &Block, tolerance: f64) -> Option<Placement> {
    let overlap_x = a.x_max().min(b.x_max()) - a.x.max(b.x);
    let overlap_y = a.y_max().min(b.y_max()) - a.y.max(b.y);
    if overlap_x < -tolerance || overlap_y < -tolerance {
        return None;
    }
    // A contact needs a positive-length overlap on one axis; the touching
    // axis (the smaller overlap) decides the label.
    if overlap_x.max(overlap_y) <= 0.0 {
        return None;
    }
    let placement = if overlap_x < overlap_y {
        if b.center_x() >= a.center_x() {
            Placement::RightOf
        } else {
            Placement::LeftOf
        }
    } else if b.center_y() >= a.center_y() {
        Placement::Above
    } else {
        Placement::Below
    };
    Some(placement)
}

/// Which way a block topples.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FallDirection {
    Rightward,
    Leftward,
}

/// The quarter-disc region a toppling block sweeps: pivot at the bottom
/// corner on the fall side, radius equal to the block height, swept from
/// vertical to horizontal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FallArc {
    pub pivot: Point,
    pub radius: f64,
    pub direction: FallDirection,
}

impl FallArc {
    /// True iff the point lies inside the closed quarter disc.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if y < self.pivot.y {
            return false;
        }
        match self.direction {
            FallDirection::Rightward if x < self.pivot.x => return false,
            FallDirection::Leftward if x > self.pivot.x => return false,
            _ => {}
        }
        let dx = x - self.pivot.x;
        let dy = y - self.pivot.y;
        dx * dx + dy * dy <= self.radius * self.radius
    }

    /// Exact closed-set intersection test against a block rectangle: clamp
    /// the rectangle to the quadrant, then compare the nearest corner to the
    /// pivot against the radius.
    pub fn intersects_block(&self, block: &Block) -> bool {
        let (lo_x, hi_x) = match self.direction {
            FallDirection::Rightward => (block.x.max(self.pivot.x), block.x_max()),
            FallDirection::Leftward => (block.x, block.x_max().min(self.pivot.x)),
        };
        if lo_x > hi_x {
            return false;
        }
        let lo_y = block.y.max(self.pivot.y);
        if lo_y > block.y_max() {
            return false;
        }
        let nearest_x = match self.direction {
            FallDirection::Rightward => lo_x,
            FallDirection::Leftward => hi_x,
        };
        let dx = nearest_x - self.pivot.x;
        let dy = lo_y - self.pivot.y;
        dx * dx + dy * dy <= self.radius * self.radius
    }
}

/// The fall arc of a block. Ground rows do not topple.
pub fn fall_arc(block: &Block, direction: FallDirection) -> FallArc {
    assert!(!block.is_ground(), "fall arc is undefined for ground blocks");
    let pivot = match direction {
        FallDirection::Rightward => Point::new(block.x_max(), block.y),
        FallDirection::Leftward => Point::new(block.x, block.y),
    };
    FallArc {
        pivot,
        radius: block.height,
        direction,
    }
}

/// The support structure of a block: every non-ground block reachable by
/// repeatedly following below-contacts. A block resting only on ground has an
/// empty support structure. Closure over a visited set, so side-contact
/// cycles terminate.
pub fn support_structure(
    start: BlockId,
    blocks: &[Block],
    graph: &ContactGraph,
) -> BTreeSet<BlockId> {
    let ground: BTreeSet<BlockId> = blocks.iter().filter(|b| b.is_ground()).map(|b| b.id).collect();
    let mut support = BTreeSet::new();
    let mut queue = VecDeque::new();
    queue.push_back(start);
    let mut visited = BTreeSet::new();
    visited.insert(start);
    while let Some(id) = queue.pop_front() {
        for below in graph.neighbors_with(id, Placement::Below) {
            if ground.contains(&below) || !visited.insert(below) {
                continue;
            }
            support.insert(below);
            queue.push_back(below);
        }
    }
    support
}
