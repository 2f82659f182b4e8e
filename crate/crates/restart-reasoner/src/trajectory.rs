//! Parabolic trajectory solving and occlusion-aware reachability.
//!
//! Shots launch from the sling as point projectiles on an ideal parabola.
//! For every block we only ever aim at two points, the top center and the
//! left center, and keep a shot only when marching along its parabola
//! actually reaches the intended block close to the intended point. Blocks
//! hiding behind walls or under shelves come out unreachable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::{Block, BlockId, Bounds, Point, Scene};

/// Which of the two aim points a shot targets.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetPoint {
    TopCenter,
    LeftCenter,
}

impl TargetPoint {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetPoint::TopCenter => "top-center",
            TargetPoint::LeftCenter => "left-center",
        }
    }
}

/// Low (flat) or high (lobbed) solution of the launch equation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Low,
    High,
}

impl ArcKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArcKind::Low => "low",
            ArcKind::High => "high",
        }
    }
}

/// A fully specified launch: angle, speed, and what it is aimed at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Shot {
    /// Launch angle in radians from horizontal; rightward shots are in
    /// (0, pi/2).
    pub angle: f64,
    pub speed: f64,
    pub target_block: BlockId,
    pub target_point: TargetPoint,
    pub arc: ArcKind,
}

/// Tunable trajectory parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryParams {
    pub gravity: f64,
    /// Fixed launch speed. When absent, speed is derived per level so the
    /// maximum range is 1.5 times the level width.
    pub launch_speed: Option<f64>,
    /// Horizontal marching step for tracing.
    pub step: f64,
    /// A traced impact counts as hitting the aim point when it lands within
    /// this distance of it.
    pub hit_tolerance: f64,
}

impl Default for TrajectoryParams {
    fn default() -> Self {
        TrajectoryParams {
            gravity: 9.8,
            launch_speed: None,
            step: 0.02,
            hit_tolerance: 0.1,
        }
    }
}

impl TrajectoryParams {
    /// Launch speed for a level of the given bounds.
    pub fn speed_for(&self, bounds: Bounds) -> f64 {
        self.launch_speed
            .unwrap_or_else(|| (1.5 * bounds.width * self.gravity).sqrt())
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        if self.gravity <= 0.0 {
            return Err("gravity must be positive".to_string());
        }
        if let Some(v) = self.launch_speed {
            if v <= 0.0 {
                return Err("launch_speed must be positive".to_string());
            }
        }
        if self.step <= 0.0 {
            return Err("step must be positive".to_string());
        }
        if self.hit_tolerance <= 0.0 {
            return Err("hit_tolerance must be positive".to_string());
        }
        Ok(())
    }
}

/// Height of the parabola at horizontal offset `dx` from the origin.
pub fn parabola_height(angle: f64, speed: f64, gravity: f64, dx: f64) -> f64 {
    let cos = angle.cos();
    dx * angle.tan() - gravity * dx * dx / (2.0 * speed * speed * cos * cos)
}

/// Launch angles that pass through `target`: none beyond range, one at
/// maximum range, two otherwise, lower angle first.
pub fn launch_angles(target: Point, speed: f64, gravity: f64, origin: Point) -> Result<Vec<f64>> {
    assert!(speed > 0.0 && gravity > 0.0);
    let dx = target.x - origin.x;
    let dy = target.y - origin.y;
    if dx <= 0.0 {
        return Err(Error::TargetBehindOrigin {
            x: target.x,
            y: target.y,
        });
    }
    // In u = tan(angle) the launch equation is quadratic:
    //   q u^2 - dx u + (dy + q) = 0   with   q = g dx^2 / (2 v^2).
    let q = gravity * dx * dx / (2.0 * speed * speed);
    let mut disc = dx * dx - 4.0 * q * (dy + q);
    if disc < 0.0 && disc > -1e-9 * dx * dx {
        disc = 0.0; // grazing the range envelope up to roundoff
    }
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    if disc == 0.0 {
        return Ok(vec![(dx / (2.0 * q)).atan()]);
    }
    let root = disc.sqrt();
    let low = ((dx - root) / (2.0 * q)).atan();
    let high = ((dx + root) / (2.0 * q)).atan();
    Ok(vec![low, high])
}

/// Slack for containment tests along a traced curve, so samples grazing a
/// face at the aim point register as hits.
const TRACE_EPSILON: f64 = 1e-9;

fn contains_with_slack(block: &Block, x: f64, y: f64) -> bool {
    x >= block.x - TRACE_EPSILON
        && x <= block.x_max() + TRACE_EPSILON
        && y >= block.y - TRACE_EPSILON
        && y <= block.y_max() + TRACE_EPSILON
}

/// March the shot's parabola rightward in horizontal increments and return
/// the first non-ground block containing a sample point, with that point.
/// `None` when the trajectory leaves the scene without touching anything.
pub fn trace(shot: &Shot, scene: &Scene<'_>, gravity: f64, step: f64) -> Option<(BlockId, Point)> {
    assert!(step > 0.0);
    let mut i: u64 = 0;
    loop {
        i += 1;
        let x = scene.sling.x + i as f64 * step;
        if x > scene.bounds.width {
            return None;
        }
        let y = scene.sling.y + parabola_height(shot.angle, shot.speed, gravity, x - scene.sling.x);
        if y < 0.0 {
            return None;
        }
        let hit = scene
            .blocks
            .iter()
            .filter(|b| !b.is_ground() && contains_with_slack(b, x, y))
            .min_by_key(|b| b.id);
        if let Some(block) = hit {
            return Some((block.id, Point::new(x, y)));
        }
    }
}

/// For every block, the verified shots that reach it: for each of the two aim
/// points and each launch solution, the shot is kept iff tracing it hits that
/// block within the hit tolerance of the aim point. Blocks with no surviving
/// shot are absent from the map.
pub fn reachable_blocks(
    scene: &Scene<'_>,
    params: &TrajectoryParams,
) -> BTreeMap<BlockId, Vec<Shot>> {
    let speed = params.speed_for(scene.bounds);
    let mut reachable = BTreeMap::new();
    let mut order: Vec<&Block> = scene.blocks.iter().filter(|b| !b.is_ground()).collect();
    order.sort_by_key(|b| b.id);
    for block in order {
        let mut shots = Vec::new();
        for target_point in [TargetPoint::TopCenter, TargetPoint::LeftCenter] {
            let aim = match target_point {
                TargetPoint::TopCenter => block.top_center(),
                TargetPoint::LeftCenter => block.left_center(),
            };
            let Ok(angles) = launch_angles(aim, speed, params.gravity, scene.sling) else {
                continue;
            };
            for (i, &angle) in angles.iter().enumerate() {
                if angle <= 0.0 || angle >= std::f64::consts::FRAC_PI_2 {
                    continue;
                }
                let arc = if i == 0 { ArcKind::Low } else { ArcKind::High };
                let shot = Shot {
                    angle,
                    speed,
                    target_block: block.id,
                    target_point,
                    arc,
                };
                if let Some((hit, at)) = trace(&shot, scene, params.gravity, params.step) {
                    if hit == block.id && at.distance(aim) <= params.hit_tolerance {
                        shots.push(shot);
                    }
                }
            }
        }
        if !shots.is_empty() {
            reachable.insert(block.id, shots);
        }
    }
    reachable
}
