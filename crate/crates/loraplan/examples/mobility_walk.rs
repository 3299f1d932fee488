//! Walk a node across the demo campus and watch the adaptive SF/TxPower
//! rule react: stable in the open, climbing behind the concrete slabs.
//!
//! ```bash
//! cargo run --release --example mobility_walk
//! ```

use std::path::Path;

use loraplan::mobility::{evaluate_path_profile, mobility_report, parse_trajectory, MobilityModel};
use loraplan::planner::Objective;
use loraplan::report::profile_csv;
use loraplan::site::parse_site;

fn main() -> Result<(), loraplan::Error> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let site = parse_site(&data.join("demo_campus.json"))?;
    let trajectory = parse_trajectory(
        &data.join("walk_east.json"),
        site.node_profile.antenna_height_m,
    )?;

    let model = MobilityModel {
        alpha_db_per_mps: 0.5,
        sample_interval_s: 10.0,
        hysteresis_db: 2.0,
        dwell_samples: 2,
    };
    let profile = evaluate_path_profile(&trajectory, &site, &model, Objective::MinAirtime)?;
    let report = mobility_report(&profile, &site)?;

    println!("samples: {}", report.samples);
    println!("connected fraction: {:.3}", report.stats.connected_fraction);
    println!("SF switches: {}", report.stats.sf_switch_count);
    println!("per-SF time shares:");
    for (sf, share) in &report.stats.sf_time_shares {
        println!("  SF{sf}: {:.1}%", share * 100.0);
    }
    if let (Some(lo), Some(mean), Some(hi)) = (
        report.stats.rssi_min_dbm,
        report.stats.rssi_mean_dbm,
        report.stats.rssi_max_dbm,
    ) {
        println!("rssi min/mean/max: {lo:.1} / {mean:.1} / {hi:.1} dBm");
    }
    println!(
        "energy (one tx per sample): {:.1} mJ",
        report.stats.total_energy_mj
    );
    for (region, energy) in &report.per_region_energy_mj {
        println!("  in region {region}: {energy:.1} mJ");
    }

    let out = Path::new("walk-out");
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("profile.csv"), profile_csv(&profile))?;
    println!(
        "wrote per-sample profile -> {}",
        out.join("profile.csv").display()
    );
    Ok(())
}
