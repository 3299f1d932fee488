//! Output rendering: the per-cell coverage CSV, the RSSI heatmap as plain
//! (P2) PGM, and JSON summaries. Everything is rendered to strings first so
//! byte-level determinism is testable without touching the filesystem.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::mobility::{MobilityModel, MobilityReport, PathProfile};
use crate::planner::{CoverageGrid, Objective};

/// Frozen column order; new columns append only.
pub const COVERAGE_CSV_HEADER: &str =
    "i,j,x_m,y_m,gateway,base_db,wall_db,floor_db,veg_db,diff_db,shadow_db,total_db,sf,txp_dbm,rssi_dbm,sens_dbm,covered";

pub const PROFILE_CSV_HEADER: &str = "t,x,y,speed,total_db,sf,txp,rssi,connected";

/// RSSI range mapped linearly onto the 8-bit gray scale.
pub const PGM_RSSI_MIN_DBM: f64 = -140.0;
pub const PGM_RSSI_MAX_DBM: f64 = -60.0;

/// The three artifacts of a `plan` run, rendered and ready to write.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputBundle {
    pub coverage_csv: String,
    pub heatmap_pgm: String,
    pub summary_json: String,
}

impl OutputBundle {
    /// Write coverage.csv, rssi.pgm and summary.json under `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("coverage.csv"), &self.coverage_csv)?;
        std::fs::write(dir.join("rssi.pgm"), &self.heatmap_pgm)?;
        std::fs::write(dir.join("summary.json"), &self.summary_json)?;
        Ok(())
    }
}

/// Shortest representation that parses back to the identical f64.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Minimal CSV quoting; ids are usually plain but commas must not corrupt rows.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render the per-cell CSV, one row per cell in row-major (j, then i) order.
pub fn coverage_csv(grid: &CoverageGrid) -> String {
    let mut out = String::with_capacity(grid.cells.len() * 96 + 128);
    out.push_str(COVERAGE_CSV_HEADER);
    out.push('\n');
    for plan in &grid.cells {
        let (i, j) = plan.cell;
        let center = grid.grid.cell_center(i, j);
        let bd = &plan.breakdown;
        let gateway = plan.best_gateway.as_deref().unwrap_or("");
        let (sf, txp) = match &plan.config {
            Some(rc) => (rc.sf.to_string(), rc.txpower_dbm.to_string()),
            None => (String::new(), String::new()),
        };
        let (rssi, sens) = match &plan.link {
            Some(link) => (fmt_f64(link.rssi_dbm), fmt_f64(link.sensitivity_dbm)),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{i},{j},{x},{y},{gw},{base},{wall},{floor},{veg},{diff},{shadow},{total},{sf},{txp},{rssi},{sens},{covered}\n",
            x = fmt_f64(center.x),
            y = fmt_f64(center.y),
            gw = csv_field(gateway),
            base = fmt_f64(bd.base_db),
            wall = fmt_f64(bd.wall_db),
            floor = fmt_f64(bd.floor_db),
            veg = fmt_f64(bd.vegetation_db),
            diff = fmt_f64(bd.diffraction_db),
            shadow = fmt_f64(bd.shadowing_db),
            total = fmt_f64(bd.total_db),
            covered = plan.covered,
        ));
    }
    out
}

/// Render the RSSI heatmap as plain PGM (P2), nx columns by ny rows.
///
/// RSSI maps linearly from [-140, -60] dBm onto [0, 255]; uncovered cells are
/// 0. The top raster row is the northernmost (j = ny - 1).
pub fn rssi_pgm(grid: &CoverageGrid) -> String {
    let nx = grid.grid.nx;
    let ny = grid.grid.ny;
    let mut out = String::with_capacity((nx as usize * 4 + 1) * ny as usize + 32);
    out.push_str(&format!("P2\n{nx} {ny}\n255\n"));
    for row in 0..ny {
        let j = ny - 1 - row;
        let mut line = String::with_capacity(nx as usize * 4);
        for i in 0..nx {
            let plan = grid.cell(i, j);
            let gray = match &plan.link {
                Some(link) if plan.covered => {
                    let scaled = (link.rssi_dbm - PGM_RSSI_MIN_DBM)
                        / (PGM_RSSI_MAX_DBM - PGM_RSSI_MIN_DBM)
                        * 255.0;
                    scaled.round().clamp(0.0, 255.0) as u32
                }
                _ => 0,
            };
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&gray.to_string());
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct PlanSummary<'a> {
    input_sha256: &'a str,
    seed: u64,
    objective: &'a str,
    nx: u32,
    ny: u32,
    cell_size_m: f64,
    cells_total: usize,
    cells_covered: usize,
    coverage_fraction: f64,
    sf_histogram: &'a BTreeMap<u8, usize>,
    txpower_histogram: &'a BTreeMap<u8, usize>,
    mean_energy_mj: Option<f64>,
}

/// Assemble the full output bundle for a planning run.
///
/// `input_sha256` is the hex SHA-256 of the site file bytes; `seed` is the
/// effective shadowing seed (after any CLI override).
pub fn make_output_bundle(
    grid: &CoverageGrid,
    input_sha256: &str,
    seed: u64,
    objective: Objective,
) -> OutputBundle {
    let summary = PlanSummary {
        input_sha256,
        seed,
        objective: objective.as_str(),
        nx: grid.grid.nx,
        ny: grid.grid.ny,
        cell_size_m: grid.grid.cell_size_m,
        cells_total: grid.summary.cells_total,
        cells_covered: grid.summary.cells_covered,
        coverage_fraction: grid.summary.coverage_fraction,
        sf_histogram: &grid.summary.sf_histogram,
        txpower_histogram: &grid.summary.txpower_histogram,
        mean_energy_mj: grid.summary.mean_energy_mj,
    };
    let mut summary_json =
        serde_json::to_string_pretty(&summary).expect("summary serialization cannot fail");
    summary_json.push('\n');
    OutputBundle {
        coverage_csv: coverage_csv(grid),
        heatmap_pgm: rssi_pgm(grid),
        summary_json,
    }
}

/// Render the mobility profile CSV, one row per sample.
pub fn profile_csv(profile: &PathProfile) -> String {
    let mut out = String::with_capacity(profile.samples.len() * 64 + 64);
    out.push_str(PROFILE_CSV_HEADER);
    out.push('\n');
    for sample in &profile.samples {
        let (sf, txp) = match &sample.config {
            Some(rc) => (rc.sf.to_string(), rc.txpower_dbm.to_string()),
            None => (String::new(), String::new()),
        };
        let rssi = sample.rssi_dbm.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{t},{x},{y},{speed},{total},{sf},{txp},{rssi},{connected}\n",
            t = fmt_f64(sample.t),
            x = fmt_f64(sample.position.x),
            y = fmt_f64(sample.position.y),
            speed = fmt_f64(sample.speed_mps),
            total = fmt_f64(sample.breakdown.total_db),
            connected = sample.connected,
        ));
    }
    out
}

#[derive(Debug, Serialize)]
struct MobilitySummary<'a> {
    site_sha256: &'a str,
    trajectory_sha256: &'a str,
    seed: u64,
    objective: &'a str,
    model: &'a MobilityModel,
    #[serde(flatten)]
    report: &'a MobilityReport,
}

/// Render mobility_summary.json.
pub fn mobility_summary_json(
    report: &MobilityReport,
    model: &MobilityModel,
    site_sha256: &str,
    trajectory_sha256: &str,
    seed: u64,
    objective: Objective,
) -> String {
    let summary = MobilitySummary {
        site_sha256,
        trajectory_sha256,
        seed,
        objective: objective.as_str(),
        model,
        report,
    };
    let mut json =
        serde_json::to_string_pretty(&summary).expect("summary serialization cannot fail");
    json.push('\n');
    json
}

/// Hex SHA-256 of raw input bytes, recorded in run summaries.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::plan_site;
    use crate::site::parse_site_str;

    fn tiny_grid() -> CoverageGrid {
        let site = parse_site_str(
            r#"{
                "grid": { "cell_size_m": 100.0, "nx": 4, "ny": 3 },
                "gateways": [
                    { "id": "gw", "position": { "x": 200.0, "y": 150.0, "z": 12.0 }, "antenna_gain_dbi": 2.15 }
                ]
            }"#,
        )
        .unwrap();
        plan_site(&site, Objective::MinAirtime).unwrap()
    }

    #[test]
    fn csv_has_header_plus_one_row_per_cell() {
        let grid = tiny_grid();
        let csv = coverage_csv(&grid);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], COVERAGE_CSV_HEADER);
        assert_eq!(lines.len(), 1 + 12);
    }

    #[test]
    fn csv_numeric_fields_round_trip_exactly() {
        let grid = tiny_grid();
        let csv = coverage_csv(&grid);
        for (row, line) in csv.lines().skip(1).enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            let plan = &grid.cells[row];
            let total: f64 = fields[11].parse().unwrap();
            assert_eq!(total.to_bits(), plan.breakdown.total_db.to_bits());
            let rssi: f64 = fields[14].parse().unwrap();
            assert_eq!(rssi.to_bits(), plan.link.unwrap().rssi_dbm.to_bits());
        }
    }

    #[test]
    fn pgm_shape_and_range() {
        let grid = tiny_grid();
        let pgm = rssi_pgm(&grid);
        let mut lines = pgm.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert_eq!(lines.next(), Some("4 3"));
        assert_eq!(lines.next(), Some("255"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3);
        for row in rows {
            let values: Vec<u32> = row.split(' ').map(|v| v.parse().unwrap()).collect();
            assert_eq!(values.len(), 4);
            assert!(values.iter().all(|v| *v <= 255));
        }
    }

    #[test]
    fn summary_json_carries_hash_seed_and_fraction() {
        let grid = tiny_grid();
        let bundle = make_output_bundle(&grid, "abc123", 42, Objective::MinAirtime);
        let parsed: serde_json::Value = serde_json::from_str(&bundle.summary_json).unwrap();
        assert_eq!(parsed["input_sha256"], "abc123");
        assert_eq!(parsed["seed"], 42);
        assert_eq!(parsed["objective"], "min-airtime");
        let fraction = parsed["coverage_fraction"].as_f64().unwrap();
        let covered_rows = bundle
            .coverage_csv
            .lines()
            .skip(1)
            .filter(|l| l.ends_with(",true"))
            .count();
        let total_rows = bundle.coverage_csv.lines().count() - 1;
        assert!((fraction - covered_rows as f64 / total_rows as f64).abs() < 1e-12);
    }

    #[test]
    fn sha256_of_empty_input_is_the_known_constant() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn csv_quoting_protects_commas() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
