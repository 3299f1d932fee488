//! Inspect what a single ray encounters on the demo campus: wall and floor
//! penetrations, vegetation chords, and Fresnel-zone intrusions.
//!
//! ```bash
//! cargo run --example trace_path
//! ```

use std::path::Path;

use loraplan::geometry::Point3;
use loraplan::site::parse_site;
use loraplan::trace::{trace_crossings, CrossingKind};

fn main() -> Result<(), loraplan::Error> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo_campus.json");
    let site = parse_site(&data)?;
    let gateway = &site.gateways[0];

    let links = [
        (
            "across the concrete corridor",
            Point3::new(7050.0, 5050.0, 1.5),
        ),
        ("behind the library", Point3::new(3450.0, 1050.0, 1.5)),
        ("over the hedgerow", Point3::new(2250.0, 2250.0, 1.5)),
    ];

    for (label, node) in links {
        println!(
            "{label}: node ({}, {}) -> gateway \"{}\"",
            node.x, node.y, gateway.id
        );
        let crossings = trace_crossings(node, gateway.position, &site)?;
        if crossings.is_empty() {
            println!("  clear line of sight, nothing in the first Fresnel zone");
        }
        for crossing in &crossings {
            match &crossing.kind {
                CrossingKind::Wall { material } => {
                    println!(
                        "  {:>7.1} m  wall ({})",
                        crossing.along_m,
                        material.as_str()
                    )
                }
                CrossingKind::Floor => {
                    println!("  {:>7.1} m  floor plane", crossing.along_m)
                }
                CrossingKind::Vegetation { depth_m } => {
                    println!(
                        "  {:>7.1} m  vegetation, {depth_m:.1} m through the canopy",
                        crossing.along_m
                    )
                }
                CrossingKind::KnifeEdge { v } => {
                    println!(
                        "  {:>7.1} m  Fresnel intrusion, v = {v:.3}",
                        crossing.along_m
                    )
                }
            }
        }
        println!();
    }
    Ok(())
}
