//! Level files: parsing, invariant checking, and canonical serialization.
//!
//! ```bash
//! cargo run -p restart-reasoner --example parse_and_validate
//! ```

use restart_reasoner::level::Level;

fn main() {
    let text = r#"{
        "sling": [0.5, 2.0],
        "birds": ["red", "yellow"],
        "bounds": [20, 14],
        "blocks": [
            {"id": 0, "material": "ground", "x": 0, "y": 0, "w": 20, "h": 1},
            {"id": 1, "material": "wood",   "x": 9, "y": 1, "w": 1,  "h": 2},
            {"id": 2, "material": "pig",    "x": 11, "y": 1, "w": 0.5, "h": 0.5}
        ]
    }"#;

    let level = Level::parse(text).expect("well-formed level");
    println!("parsed {} blocks, {} birds", level.blocks.len(), level.birds.len());
    println!("pigs: {:?}", level.pigs().map(|p| p.id.0).collect::<Vec<_>>());

    // Canonical form: fixed key order, blocks sorted by id, short numbers.
    let canonical = level.to_canonical_json();
    println!("\ncanonical serialization:\n{canonical}");
    assert_eq!(Level::parse(&canonical).unwrap(), level);
    println!("\nround-trip: parse(serialize(level)) == level");

    // Violations are data, not errors: a level without pigs lists them.
    let mut broken = level.clone();
    broken.blocks.retain(|b| !b.is_pig());
    broken.blocks[1].x = 25.0;
    println!("\nviolations of a doctored level:");
    for violation in broken.validate() {
        println!("  - {violation}");
    }

    // Malformed files carry positions.
    let err = Level::parse("{\"sling\": [0,").unwrap_err();
    println!("\nsyntax failure: {err}");
}
