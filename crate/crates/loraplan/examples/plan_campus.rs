//! Plan the demo campus and write the full output bundle.
//!
//! ```bash
//! cargo run --release --example plan_campus
//! ```
//!
//! Produces coverage.csv, rssi.pgm and summary.json under ./campus-out and
//! prints the summary block.

use std::path::Path;

use loraplan::planner::{plan_site, Objective};
use loraplan::report::{make_output_bundle, sha256_hex};
use loraplan::site::parse_site;

fn main() -> Result<(), loraplan::Error> {
    let site_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo_campus.json");
    let site = parse_site(&site_path)?;
    let grid = plan_site(&site, Objective::MinAirtime)?;

    let summary = &grid.summary;
    println!(
        "{} of {} cells covered ({:.1}%)",
        summary.cells_covered,
        summary.cells_total,
        summary.coverage_fraction * 100.0
    );
    println!("SF histogram:");
    for (sf, count) in &summary.sf_histogram {
        println!("  SF{sf:<3} {count:>6} cells");
    }
    println!("TxPower histogram:");
    for (txp, count) in &summary.txpower_histogram {
        println!("  {txp:>2} dBm {count:>6} cells");
    }
    if let Some(energy) = summary.mean_energy_mj {
        println!("mean energy per transmission among covered cells: {energy:.3} mJ");
    }

    let bytes = std::fs::read(&site_path)?;
    let bundle = make_output_bundle(
        &grid,
        &sha256_hex(&bytes),
        site.config.rng_seed,
        Objective::MinAirtime,
    );
    let out_dir = Path::new("campus-out");
    bundle.write_to_dir(out_dir)?;
    println!(
        "wrote coverage.csv, rssi.pgm, summary.json -> {}",
        out_dir.display()
    );
    Ok(())
}
