//! Evaluate one uplink end to end: path-loss breakdown, sensitivity,
//! link margin, and the cheapest feasible (SF, TxPower) pair.
//!
//! ```bash
//! cargo run --example link_budget
//! ```

use loraplan::geometry::Point3;
use loraplan::planner::{select_config, Objective};
use loraplan::propagation::total_path_loss;
use loraplan::radio::{link_report, rssi, sensitivity};
use loraplan::site::parse_site_str;

fn main() -> Result<(), loraplan::Error> {
    // A small campus corner: one gateway, one concrete hall in the way.
    let site = parse_site_str(
        r#"{
            "grid": { "cell_size_m": 50.0, "nx": 20, "ny": 20 },
            "config": { "frequency_hz": 868e6, "link_margin_db": 3.0 },
            "gateways": [
                { "id": "rooftop", "position": { "x": 100.0, "y": 500.0, "z": 22.0 },
                  "antenna_gain_dbi": 2.15 }
            ],
            "obstructions": [
                { "id": "hall", "kind": "building", "height_m": 14.0, "material": "concrete",
                  "floor_count": 3,
                  "footprint": [ {"x": 420, "y": 380}, {"x": 520, "y": 380},
                                 {"x": 520, "y": 620}, {"x": 420, "y": 620} ] }
            ]
        }"#,
    )?;

    let node = Point3::new(900.0, 480.0, 1.5);
    let gateway = &site.gateways[0];
    let breakdown = total_path_loss(node, gateway.position, &site, 0.0, None)?;

    println!(
        "uplink {:?} -> gateway \"{}\"",
        (node.x, node.y, node.z),
        gateway.id
    );
    println!("  base loss        {:>8.2} dB", breakdown.base_db);
    println!("  walls            {:>8.2} dB", breakdown.wall_db);
    println!("  floors           {:>8.2} dB", breakdown.floor_db);
    println!("  vegetation       {:>8.2} dB", breakdown.vegetation_db);
    println!("  diffraction      {:>8.2} dB", breakdown.diffraction_db);
    println!("  shadowing        {:>8.2} dB", breakdown.shadowing_db);
    println!("  total            {:>8.2} dB", breakdown.total_db);

    let g_s = site.node_profile.antenna_gain_dbi;
    let g_r = gateway.antenna_gain_dbi;
    println!("\nfeasibility at a fixed SF7 / 14 dBm:");
    let report = link_report(
        rssi(14.0, g_s, g_r, breakdown.total_db),
        sensitivity(7, site.config.bandwidth_hz, site.config.noise_figure_db)?,
        site.config.link_margin_db,
    );
    println!(
        "  rssi {:.2} dBm vs sensitivity {:.2} dBm -> margin {:+.2} dB, feasible: {}",
        report.rssi_dbm, report.sensitivity_dbm, report.snr_margin_db, report.feasible
    );

    println!("\noptimal configurations:");
    for objective in [Objective::MinAirtime, Objective::MinEnergy] {
        match select_config(breakdown.total_db, g_s, g_r, &site.config, objective)? {
            Some(rc) => println!("  {objective:<12} SF{} @ {:>2} dBm", rc.sf, rc.txpower_dbm),
            None => println!("  {objective:<12} infeasible"),
        }
    }
    Ok(())
}
