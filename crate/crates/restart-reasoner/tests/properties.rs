//! Property tests over generated worlds: serialization round-trips, contact
//! monotonicity, propagation dissipation and monotonicity, and the shape of
//! the decision functions.

use proptest::prelude::*;

use restart_reasoner::geometry::{intervals_overlap, ContactGraph, DEFAULT_CONTACT_TOLERANCE};
use restart_reasoner::heuristics::{restart_score, score_shortfall, RestartWeights};
use restart_reasoner::level::{BirdKind, Block, BlockId, Bounds, Level, Material, Point};
use restart_reasoner::propagation::{PropagationConstants, Propagator};

/// A valid level built from non-overlapping columns on a half-unit grid.
/// Slot 0 holds a pig; the rest hold one- to three-block stacks.
fn level_strategy() -> impl Strategy<Value = Level> {
    (
        proptest::collection::vec(1usize..=3, 1..=5),
        proptest::collection::vec(0usize..3, 1..=5),
        1usize..=3,
    )
        .prop_map(|(stacks, materials, birds)| {
            let mut blocks = vec![Block::new(0, Material::Ground, 0.0, 0.0, 24.0, 1.0)];
            let mut id = 1;
            blocks.push(Block::new(id, Material::Pig, 6.0, 1.0, 0.5, 0.5));
            id += 1;
            for (i, (&height, m)) in stacks.iter().zip(materials.iter().cycle()).enumerate() {
                let x = 8.0 + 2.0 * i as f64;
                let material = match m {
                    0 => Material::Wood,
                    1 => Material::Ice,
                    _ => Material::Stone,
                };
                for level_in_stack in 0..height {
                    blocks.push(Block::new(
                        id,
                        material,
                        x,
                        1.0 + level_in_stack as f64,
                        1.0,
                        1.0,
                    ));
                    id += 1;
                }
            }
            Level {
                sling: Point::new(0.5, 2.0),
                birds: vec![BirdKind::Red; birds],
                bounds: Bounds {
                    width: 24.0,
                    height: 16.0,
                },
                blocks,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn generated_levels_validate_and_round_trip(level in level_strategy()) {
        prop_assert!(level.validate().is_empty());
        let text = level.to_canonical_json();
        let reparsed = Level::parse(&text).unwrap();
        prop_assert_eq!(&reparsed, &level);
        prop_assert_eq!(reparsed.to_canonical_json(), text);
    }

    #[test]
    fn interval_overlap_matches_the_naive_definition(
        a_lo in -10.0..10.0f64,
        a_len in 0.0..5.0f64,
        b_lo in -10.0..10.0f64,
        b_len in 0.0..5.0f64,
    ) {
        let (a_hi, b_hi) = (a_lo + a_len, b_lo + b_len);
        let naive = a_lo.max(b_lo) <= a_hi.min(b_hi);
        prop_assert_eq!(intervals_overlap(a_lo, a_hi, b_lo, b_hi), naive);
    }

    #[test]
    fn contact_edges_survive_extra_dilation(
        bx in -1.0..2.0f64,
        by in -1.0..2.0f64,
        delta_frac in 0.01..0.99f64,
    ) {
        let a = Block::new(1, Material::Wood, 0.0, 0.0, 1.0, 1.0);
        let b = Block::new(2, Material::Wood, bx, by, 1.0, 1.0);
        let blocks = vec![a, b];
        let base = ContactGraph::build(&blocks, DEFAULT_CONTACT_TOLERANCE);
        if base.contacts(BlockId(1)).is_empty() {
            return Ok(());
        }
        let delta = delta_frac * DEFAULT_CONTACT_TOLERANCE / 2.0;
        let dilated: Vec<Block> = blocks
            .iter()
            .map(|blk| Block::new(
                blk.id.0,
                blk.material,
                blk.x - delta,
                blk.y - delta,
                blk.width + 2.0 * delta,
                blk.height + 2.0 * delta,
            ))
            .collect();
        let grown = ContactGraph::build(&dilated, DEFAULT_CONTACT_TOLERANCE);
        prop_assert!(!grown.contacts(BlockId(1)).is_empty());
    }

    #[test]
    fn propagation_dissipates_and_grows_with_factors(
        level in level_strategy(),
        low in 0.4..0.8f64,
        bump in 0.05..0.2f64,
    ) {
        let lossy = PropagationConstants {
            direct_loss: low,
            falling_loss: low,
            travel_loss: low,
            ..PropagationConstants::default()
        };
        let lossier = PropagationConstants {
            direct_loss: (low + bump).min(1.0),
            falling_loss: (low + bump).min(1.0),
            travel_loss: (low + bump).min(1.0),
            ..PropagationConstants::default()
        };
        let impact = level.blocks.iter().find(|b| !b.is_ground()).unwrap().id;
        let small = Propagator::new(&level.blocks, &lossy).propagate(impact, 1.0).unwrap();
        let large = Propagator::new(&level.blocks, &lossier).propagate(impact, 1.0).unwrap();
        for (&id, &force) in &small.forces {
            if id != impact {
                prop_assert!(force < 1.0, "non-impact force must dissipate below the seed");
            }
            prop_assert!(large.force(id) >= force - 1e-9);
        }
        prop_assert!(small.destroyed.is_subset(&large.destroyed));
    }

    #[test]
    fn lossless_single_file_chain_preserves_force(chain_len in 2usize..8) {
        let mut blocks = vec![Block::new(0, Material::Ground, 0.0, 0.0, 24.0, 1.0)];
        for i in 0..chain_len {
            blocks.push(Block::new(i as u32 + 1, Material::Wood, 2.0 + i as f64, 1.0, 1.0, 1.0));
        }
        let constants = PropagationConstants::default();
        let map = Propagator::new(&blocks, &constants).propagate(BlockId(1), 1.0).unwrap();
        for i in 0..chain_len {
            prop_assert_eq!(map.force(BlockId(i as u32 + 1)), 1.0);
        }
    }

    #[test]
    fn restart_score_is_monotone(
        terms in proptest::array::uniform4(0.0..=1.0f64),
        raises in proptest::array::uniform4(0.0..=1.0f64),
        which in 0usize..4,
    ) {
        let weights = RestartWeights::default();
        let base = restart_score(terms[0], terms[1], terms[2], terms[3], &weights);
        let mut raised = terms;
        raised[which] = (raised[which] + raises[which]).min(1.0);
        let higher = restart_score(raised[0], raised[1], raised[2], raised[3], &weights);
        prop_assert!(higher >= base - 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&higher));
    }

    #[test]
    fn score_shortfall_stays_in_unit_range_and_decreases(
        delta in 0.0..20000.0f64,
        extra in 0.0..5000.0f64,
        threshold in 1.0..10000.0f64,
    ) {
        let a = score_shortfall(delta, threshold);
        let b = score_shortfall(delta + extra, threshold);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-12);
    }

    #[test]
    fn force_maps_are_reproducible(level in level_strategy()) {
        let constants = PropagationConstants::default();
        let propagator = Propagator::new(&level.blocks, &constants);
        let impact = level.blocks.iter().find(|b| !b.is_ground()).unwrap().id;
        let a = propagator.propagate(impact, 1.0).unwrap();
        let b = propagator.propagate(impact, 1.0).unwrap();
        prop_assert_eq!(a, b);
    }
}
