//! Level model: blocks, bird queues, level states, and the level file format.
//!
//! A level is a set of axis-aligned rectangles (blocks) on a world plane with
//! y increasing upward and x increasing rightward. The slingshot sits at small
//! x and shoots rightward. Pigs are ordinary blocks with `Material::Pig`, and
//! the ground is an explicit immovable block row, so contact and support
//! queries need no special cases.
//!
//! Level files are UTF-8 JSON with a canonical serialization: fixed key order
//! (`sling`, `birds`, `bounds`, `blocks`), blocks sorted by id, and numbers
//! printed with at most six decimal digits. `parse` then `serialize` is the
//! identity on canonical files.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a block, unique within a level.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockId(pub u32);

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Block material. Pigs are blocks; ground rows are immovable and
/// indestructible.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Wood,
    Ice,
    Stone,
    Pig,
    Ground,
}

impl Material {
    pub fn as_str(self) -> &'static str {
        match self {
            Material::Wood => "wood",
            Material::Ice => "ice",
            Material::Stone => "stone",
            Material::Pig => "pig",
            Material::Ground => "ground",
        }
    }

    pub fn is_ground(self) -> bool {
        matches!(self, Material::Ground)
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bird colors in launch order. Special powers are modeled as plain impacts.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BirdKind {
    Red,
    Blue,
    Yellow,
    Black,
    White,
}

impl BirdKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BirdKind::Red => "red",
            BirdKind::Blue => "blue",
            BirdKind::Yellow => "yellow",
            BirdKind::Black => "black",
            BirdKind::White => "white",
        }
    }
}

impl fmt::Display for BirdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point in world coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// World rectangle `[0, width] x [0, height]` that must contain every block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub width: f64,
    pub height: f64,
}

/// An axis-aligned block. `x`/`y` locate the bottom-left corner.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub id: BlockId,
    pub material: Material,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Block {
    pub fn new(id: u32, material: Material, x: f64, y: f64, width: f64, height: f64) -> Self {
        Block {
            id: BlockId(id),
            material,
            x,
            y,
            width,
            height,
        }
    }

    pub fn x_max(&self) -> f64 {
        self.x + self.width
    }

    pub fn y_max(&self) -> f64 {
        self.y + self.height
    }

    pub fn center_x(&self) -> f64 {
        self.x + self.width / 2.0
    }

    pub fn center_y(&self) -> f64 {
        self.y + self.height / 2.0
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn is_ground(&self) -> bool {
        self.material.is_ground()
    }

    pub fn is_pig(&self) -> bool {
        self.material == Material::Pig
    }

    /// Closed-rectangle containment test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x && x <= self.x_max() && y >= self.y && y <= self.y_max()
    }

    /// Midpoint of the top face, one of the two aim points.
    pub fn top_center(&self) -> Point {
        Point::new(self.center_x(), self.y_max())
    }

    /// Midpoint of the left face, the other aim point.
    pub fn left_center(&self) -> Point {
        Point::new(self.x, self.center_y())
    }
}

/// A read-only view of a world: launch origin, bounds, and the blocks that
/// currently exist. Built from either a [`Level`] or a [`LevelState`].
#[derive(Clone, Copy, Debug)]
pub struct Scene<'a> {
    pub sling: Point,
    pub bounds: Bounds,
    pub blocks: &'a [Block],
}

/// A complete level: slingshot, bird queue, blocks (including ground and
/// pigs), and world bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub sling: Point,
    pub birds: Vec<BirdKind>,
    pub bounds: Bounds,
    pub blocks: Vec<Block>,
}

/// Slack allowed when checking that blocks sit inside the world bounds.
const BOUNDS_EPSILON: f64 = 1e-9;

impl Level {
    /// Parse a level file. The returned level satisfies every level
    /// invariant; invariant violations are reported as errors naming the
    /// offending entities.
    pub fn parse(text: &str) -> Result<Level> {
        let level = Self::parse_lenient(text)?;
        let violations = level.validate();
        if violations.is_empty() {
            Ok(level)
        } else {
            Err(Error::InvalidLevel(violations.join("; ")))
        }
    }

    /// Parse the file syntax only, leaving invariant checking to the caller.
    pub fn parse_lenient(text: &str) -> Result<Level> {
        let raw: RawLevel = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let level = Level {
            sling: Point::new(raw.sling[0], raw.sling[1]),
            birds: raw.birds,
            bounds: Bounds {
                width: raw.bounds[0],
                height: raw.bounds[1],
            },
            blocks: raw
                .blocks
                .into_iter()
                .map(|b| Block {
                    id: BlockId(b.id),
                    material: b.material,
                    x: b.x,
                    y: b.y,
                    width: b.w,
                    height: b.h,
                })
                .collect(),
        };
        Ok(level)
    }

    /// Canonical serialization: fixed key order, blocks sorted by id, numbers
    /// with at most six decimal digits.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::with_capacity(256);
        out.push_str("{\"sling\":[");
        out.push_str(&fmt_num(self.sling.x));
        out.push(',');
        out.push_str(&fmt_num(self.sling.y));
        out.push_str("],\"birds\":[");
        for (i, bird) in self.birds.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('"');
            out.push_str(bird.as_str());
            out.push('"');
        }
        out.push_str("],\"bounds\":[");
        out.push_str(&fmt_num(self.bounds.width));
        out.push(',');
        out.push_str(&fmt_num(self.bounds.height));
        out.push_str("],\"blocks\":[");
        let mut sorted: Vec<&Block> = self.blocks.iter().collect();
        sorted.sort_by_key(|b| b.id);
        for (i, b) in sorted.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"id\":{},\"material\":\"{}\",\"x\":{},\"y\":{},\"w\":{},\"h\":{}}}",
                b.id,
                b.material,
                fmt_num(b.x),
                fmt_num(b.y),
                fmt_num(b.width),
                fmt_num(b.height)
            ));
        }
        out.push_str("]}");
        out
    }

    /// Check every level invariant. Returns an empty list iff the level is
    /// valid; each violation names the rule and the entities involved.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();

        for b in &self.blocks {
            if ![b.x, b.y, b.width, b.height].iter().all(|v| v.is_finite()) {
                violations.push(format!("non-finite geometry: id {}", b.id));
            } else if b.width <= 0.0 || b.height <= 0.0 {
                violations.push(format!("nonpositive extent: id {}", b.id));
            }
        }

        let mut seen = BTreeSet::new();
        for b in &self.blocks {
            if !seen.insert(b.id) {
                violations.push(format!("duplicate block id: {}", b.id));
            }
        }

        if !self.blocks.iter().any(|b| b.is_pig()) {
            violations.push("no pigs".to_string());
        }
        if self.birds.is_empty() {
            violations.push("no birds".to_string());
        }

        // Non-ground blocks may touch (or overlap within the contact
        // tolerance) but must not interpenetrate deeper than that.
        let non_ground: Vec<&Block> = self.blocks.iter().filter(|b| !b.is_ground()).collect();
        for (i, a) in non_ground.iter().enumerate() {
            for b in &non_ground[i + 1..] {
                let overlap_x = a.x_max().min(b.x_max()) - a.x.max(b.x);
                let overlap_y = a.y_max().min(b.y_max()) - a.y.max(b.y);
                let depth = overlap_x.min(overlap_y);
                if overlap_x > 0.0
                    && overlap_y > 0.0
                    && depth > crate::geometry::DEFAULT_CONTACT_TOLERANCE
                {
                    let (lo, hi) = if a.id < b.id { (a.id, b.id) } else { (b.id, a.id) };
                    violations.push(format!("interpenetration: ids {},{}", lo, hi));
                }
            }
        }

        for b in &self.blocks {
            if b.x < -BOUNDS_EPSILON
                || b.y < -BOUNDS_EPSILON
                || b.x_max() > self.bounds.width + BOUNDS_EPSILON
                || b.y_max() > self.bounds.height + BOUNDS_EPSILON
            {
                violations.push(format!("out of bounds: id {}", b.id));
            }
        }

        violations
    }

    pub fn block(&self, id: BlockId) -> Option<&Block> {
        self.blocks.iter().find(|b| b.id == id)
    }

    pub fn pigs(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.is_pig())
    }

    pub fn scene(&self) -> Scene<'_> {
        Scene {
            sling: self.sling,
            bounds: self.bounds,
            blocks: &self.blocks,
        }
    }
}

/// Quantize a number to the six-decimal grid used by the file format.
pub fn quantize(v: f64) -> f64 {
    let q = (v * 1e6).round() / 1e6;
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

fn fmt_num(v: f64) -> String {
    format!("{}", quantize(v))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    sling: [f64; 2],
    birds: Vec<BirdKind>,
    bounds: [f64; 2],
    blocks: Vec<RawBlock>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    id: u32,
    material: Material,
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

/// A level mid-play: the surviving blocks, the birds not yet fired, and the
/// synthetic score/time accumulated so far. Restarting rebuilds the state
/// from the initial level exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelState {
    pub level: Level,
    pub remaining_birds: Vec<BirdKind>,
    pub alive_blocks: Vec<Block>,
    pub accumulated_score: u64,
    pub elapsed_time: f64,
}

impl LevelState {
    pub fn new(level: Level) -> Self {
        let remaining_birds = level.birds.clone();
        let alive_blocks = level.blocks.clone();
        LevelState {
            level,
            remaining_birds,
            alive_blocks,
            accumulated_score: 0,
            elapsed_time: 0.0,
        }
    }

    /// Reset to the untouched initial level.
    pub fn restart(&self) -> LevelState {
        LevelState::new(self.level.clone())
    }

    pub fn alive_pigs(&self) -> impl Iterator<Item = &Block> {
        self.alive_blocks.iter().filter(|b| b.is_pig())
    }

    pub fn alive_pig_ids(&self) -> BTreeSet<BlockId> {
        self.alive_pigs().map(|b| b.id).collect()
    }

    pub fn current_bird(&self) -> Option<BirdKind> {
        self.remaining_birds.first().copied()
    }

    pub fn scene(&self) -> Scene<'_> {
        Scene {
            sling: self.level.sling,
            bounds: self.level.bounds,
            blocks: &self.alive_blocks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_text() -> String {
        let level = Level {
            sling: Point::new(0.5, 2.0),
            birds: vec![BirdKind::Red],
            bounds: Bounds {
                width: 10.0,
                height: 8.0,
            },
            blocks: vec![
                Block::new(0, Material::Ground, 0.0, 0.0, 10.0, 1.0),
                Block::new(1, Material::Wood, 5.0, 1.0, 1.0, 1.0),
                Block::new(2, Material::Pig, 6.5, 1.0, 0.5, 0.5),
            ],
        };
        level.to_canonical_json()
    }

    #[test]
    fn parses_minimal_fixture() {
        let level = Level::parse(&fixture_text()).unwrap();
        assert_eq!(level.birds, vec![BirdKind::Red]);
        // One wood block and one pig besides the ground row.
        assert_eq!(level.blocks.iter().filter(|b| !b.is_ground()).count(), 2);
        assert_eq!(level.pigs().count(), 1);
    }

    #[test]
    fn duplicate_id_is_rejected_by_name() {
        let text = fixture_text().replace("\"id\":2", "\"id\":1");
        let err = Level::parse(&text).unwrap_err();
        assert!(matches!(err, Error::InvalidLevel(_)));
        assert!(err.to_string().contains("duplicate block id: 1"));
    }

    #[test]
    fn syntax_error_reports_line_and_column() {
        let err = Level::parse("{\"sling\": [0, ").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => {
                assert!(line >= 1);
                assert!(column >= 1);
            }
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = fixture_text().replace("\"sling\"", "\"slingshot\"");
        assert!(Level::parse(&text).is_err());
    }

    #[test]
    fn canonical_roundtrip_is_identity() {
        let text = fixture_text();
        let level = Level::parse(&text).unwrap();
        assert_eq!(level.to_canonical_json(), text);
        let reparsed = Level::parse(&level.to_canonical_json()).unwrap();
        assert_eq!(reparsed, level);
    }

    #[test]
    fn canonical_form_sorts_blocks_by_id() {
        let mut level = Level::parse(&fixture_text()).unwrap();
        level.blocks.reverse();
        let text = level.to_canonical_json();
        let ids: Vec<usize> = ["\"id\":0", "\"id\":1", "\"id\":2"]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(ids[0] < ids[1] && ids[1] < ids[2]);
    }

    #[test]
    fn validate_flags_missing_pigs() {
        let mut level = Level::parse(&fixture_text()).unwrap();
        level.blocks.retain(|b| !b.is_pig());
        assert_eq!(level.validate(), vec!["no pigs".to_string()]);
    }

    #[test]
    fn validate_flags_deep_interpenetration() {
        // Two unit squares overlapping by 3k in x while fully overlapping in
        // y: penetration depth 3k exceeds the tolerance k.
        let k = crate::geometry::DEFAULT_CONTACT_TOLERANCE;
        let level = Level {
            sling: Point::new(0.5, 2.0),
            birds: vec![BirdKind::Red],
            bounds: Bounds {
                width: 10.0,
                height: 8.0,
            },
            blocks: vec![
                Block::new(4, Material::Wood, 2.0, 1.0, 1.0, 1.0),
                Block::new(7, Material::Wood, 3.0 - 3.0 * k, 1.0, 1.0, 1.0),
                Block::new(8, Material::Pig, 6.0, 1.0, 0.5, 0.5),
            ],
        };
        assert_eq!(level.validate(), vec!["interpenetration: ids 4,7".to_string()]);
    }

    #[test]
    fn touching_blocks_are_not_interpenetrating() {
        let level = Level::parse(&fixture_text()).unwrap();
        assert!(level.validate().is_empty());
    }

    #[test]
    fn validate_flags_out_of_bounds() {
        let mut level = Level::parse(&fixture_text()).unwrap();
        level.blocks[1].x = 9.5;
        assert_eq!(level.validate(), vec!["out of bounds: id 1".to_string()]);
    }

    #[test]
    fn numbers_use_at_most_six_decimals() {
        let mut level = Level::parse(&fixture_text()).unwrap();
        level.blocks[1].x = 5.123456789;
        let text = level.to_canonical_json();
        assert!(text.contains("\"x\":5.123457"));
    }

    #[test]
    fn restart_resets_to_initial_level() {
        let level = Level::parse(&fixture_text()).unwrap();
        let canonical = level.to_canonical_json();
        let mut state = LevelState::new(level);
        state.alive_blocks.retain(|b| !b.is_pig());
        state.accumulated_score = 1234;
        state.elapsed_time = 42.0;
        state.remaining_birds.clear();
        let fresh = state.restart();
        assert_eq!(fresh.level.to_canonical_json(), canonical);
        assert_eq!(fresh.accumulated_score, 0);
        assert_eq!(fresh.elapsed_time, 0.0);
        assert_eq!(fresh.alive_blocks.len(), 3);
        assert_eq!(fresh.remaining_birds, vec![BirdKind::Red]);
    }
}
