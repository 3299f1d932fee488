//! Command-line surface: `validate`, `plan`, `link`, `toa`, `mobility`.
//!
//! Exit codes: 0 success, 1 domain/validation failure, 2 I/O, file-parse or
//! command-line usage failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::mobility::{
    evaluate_path_profile, mobility_report, parse_trajectory_str, MobilityModel,
};
use crate::planner::{plan_site, Objective};
use crate::propagation::{total_path_loss, PathLossBreakdown};
use crate::radio::{
    data_rate, duty_cycle_min_interval, link_report, rssi, sensitivity, time_on_air, LinkReport,
    RadioConfig,
};
use crate::report::{make_output_bundle, mobility_summary_json, profile_csv, sha256_hex};
use crate::site::{parse_site_str, validate_site, CodingRate, Site};

#[derive(Parser)]
#[command(
    name = "loraplan",
    version,
    about = "LoRaWAN deployment planning: site-aware path loss, SF/TxPower optimization, coverage grids and mobility profiles"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a site file against every data-model invariant
    Validate {
        /// Site file (JSON)
        site: PathBuf,
    },
    /// Plan SF/TxPower for every grid cell; writes coverage.csv, rssi.pgm and
    /// summary.json
    Plan {
        site: PathBuf,
        #[arg(long, default_value_t = Objective::MinAirtime)]
        objective: Objective,
        #[arg(long)]
        out_dir: PathBuf,
        /// Override the site file's shadowing seed (recorded in summary.json)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate one uplink and print the loss breakdown and link report as JSON
    Link {
        site: PathBuf,
        /// Node position as x,y or x,y,height (meters)
        #[arg(long)]
        from: String,
        #[arg(long)]
        to_gateway: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(7..=12))]
        sf: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=20))]
        txp: u8,
    },
    /// Time-on-air, data rate and duty-cycle spacing for one frame
    Toa {
        #[arg(long, value_parser = clap::value_parser!(u8).range(7..=12))]
        sf: u8,
        /// Bandwidth in Hz (125000, 250000 or 500000)
        #[arg(long, default_value_t = 125_000, value_parser = parse_bandwidth)]
        bw: u32,
        /// Coding rate: 4/5, 4/6, 4/7 or 4/8
        #[arg(long, default_value = "4/5")]
        cr: CodingRate,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=255))]
        payload: u8,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u16).range(6..))]
        preamble: u16,
        /// Duty-cycle limit as a fraction, e.g. 0.01 for 1%
        #[arg(long, default_value_t = 0.01, value_parser = parse_duty_cycle)]
        duty_cycle: f64,
    },
    /// Evaluate a waypoint trajectory; writes profile.csv and
    /// mobility_summary.json
    Mobility {
        site: PathBuf,
        /// Trajectory file: JSON list of {x, y, z, t} waypoints
        trajectory: PathBuf,
        /// Speed penalty in dB per m/s
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Sample interval in seconds
        #[arg(long, default_value_t = 1.0)]
        interval: f64,
        /// Extra margin (dB) required before switching to a cheaper config
        #[arg(long, default_value_t = 2.0)]
        hysteresis: f64,
        /// Consecutive samples the cheaper config must hold the margin
        #[arg(long, default_value_t = 2)]
        dwell: u32,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = Objective::MinAirtime)]
        objective: Objective,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_bandwidth(s: &str) -> std::result::Result<u32, String> {
    let bw: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if [125_000, 250_000, 500_000].contains(&bw) {
        Ok(bw)
    } else {
        Err("bandwidth must be 125000, 250000 or 500000".into())
    }
}

fn parse_duty_cycle(s: &str) -> std::result::Result<f64, String> {
    let limit: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if limit > 0.0 && limit <= 1.0 {
        Ok(limit)
    } else {
        Err("duty cycle must lie in (0, 1]".into())
    }
}

/// Parse args from the process environment and run; returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Io(_) => 2,
        Error::Domain(_) | Error::Config(_) | Error::Invalid(_) => 1,
    }
}

fn load_site(path: &Path) -> Result<(Site, Vec<u8>)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let site = parse_site_str(&text)?;
    Ok((site, bytes))
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Validate { site } => cmd_validate(&site),
        Command::Plan {
            site,
            objective,
            out_dir,
            seed,
        } => cmd_plan(&site, objective, &out_dir, seed),
        Command::Link {
            site,
            from,
            to_gateway,
            sf,
            txp,
        } => cmd_link(&site, &from, &to_gateway, sf, txp),
        Command::Toa {
            sf,
            bw,
            cr,
            payload,
            preamble,
            duty_cycle,
        } => cmd_toa(sf, bw, cr, payload, preamble, duty_cycle),
        Command::Mobility {
            site,
            trajectory,
            alpha,
            interval,
            hysteresis,
            dwell,
            out_dir,
            objective,
            seed,
        } => {
            let model = MobilityModel {
                alpha_db_per_mps: alpha,
                sample_interval_s: interval,
                hysteresis_db: hysteresis,
                dwell_samples: dwell,
            };
            cmd_mobility(&site, &trajectory, &model, &out_dir, objective, seed)
        }
    }
}

fn cmd_validate(site_path: &Path) -> Result<i32> {
    let (site, _) = load_site(site_path)?;
    let violations = validate_site(&site);
    if violations.is_empty() {
        return Ok(0);
    }
    for violation in &violations {
        println!("{violation}");
    }
    Ok(1)
}

fn cmd_plan(
    site_path: &Path,
    objective: Objective,
    out_dir: &Path,
    seed: Option<u64>,
) -> Result<i32> {
    let (mut site, bytes) = load_site(site_path)?;
    if let Some(seed) = seed {
        site.config.rng_seed = seed;
    }
    let grid = plan_site(&site, objective)?;
    let bundle = make_output_bundle(&grid, &sha256_hex(&bytes), site.config.rng_seed, objective);
    bundle.write_to_dir(out_dir)?;
    println!(
        "planned {} cells: {:.1}% covered -> {}",
        grid.summary.cells_total,
        grid.summary.coverage_fraction * 100.0,
        out_dir.display()
    );
    Ok(0)
}

#[derive(Serialize)]
struct LinkOutput<'a> {
    gateway: &'a str,
    sf: u8,
    txpower_dbm: u8,
    breakdown: &'a PathLossBreakdown,
    link: &'a LinkReport,
}

fn parse_from_arg(from: &str, default_height_m: f64) -> Result<Point3> {
    let parts: Vec<&str> = from.split(',').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(Error::Parse(format!(
            "--from expects x,y or x,y,height, got {from:?}"
        )));
    }
    let mut coords = [0.0f64; 3];
    coords[2] = default_height_m;
    for (k, part) in parts.iter().enumerate() {
        coords[k] = part
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("--from component {part:?}: {e}")))?;
    }
    Ok(Point3::new(coords[0], coords[1], coords[2]))
}

fn cmd_link(site_path: &Path, from: &str, gateway_id: &str, sf: u8, txp: u8) -> Result<i32> {
    let (site, _) = load_site(site_path)?;
    let node = parse_from_arg(from, site.node_profile.antenna_height_m)?;
    let gateway = site
        .gateway(gateway_id)
        .ok_or_else(|| Error::Domain(format!("unknown gateway {gateway_id:?}")))?;

    let breakdown = total_path_loss(
        node,
        gateway.position,
        &site,
        0.0,
        site.grid.cell_containing(node.x, node.y),
    )?;
    let config = RadioConfig::new(sf, txp, &site.config)?;
    let report = link_report(
        rssi(
            f64::from(config.txpower_dbm),
            site.node_profile.antenna_gain_dbi,
            gateway.antenna_gain_dbi,
            breakdown.total_db,
        ),
        sensitivity(config.sf, config.bandwidth_hz, site.config.noise_figure_db)?,
        site.config.link_margin_db,
    );
    let output = LinkOutput {
        gateway: gateway_id,
        sf,
        txpower_dbm: txp,
        breakdown: &breakdown,
        link: &report,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("link output serialization cannot fail")
    );
    Ok(0)
}

#[derive(Serialize)]
struct ToaOutput {
    sf: u8,
    bandwidth_hz: u32,
    coding_rate: &'static str,
    payload_bytes: u8,
    preamble_symbols: u16,
    low_data_rate_optimize: bool,
    time_on_air_s: f64,
    data_rate_bps: f64,
    duty_cycle_limit: f64,
    duty_cycle_min_interval_s: f64,
}

fn cmd_toa(
    sf: u8,
    bw: u32,
    cr: CodingRate,
    payload: u8,
    preamble: u16,
    duty_cycle: f64,
) -> Result<i32> {
    let config = RadioConfig {
        sf,
        txpower_dbm: 14,
        bandwidth_hz: bw,
        coding_rate: cr,
        preamble_symbols: preamble,
        payload_bytes: payload,
        explicit_header: true,
        crc_on: true,
    };
    config.validate()?;
    let toa = time_on_air(&config);
    let output = ToaOutput {
        sf,
        bandwidth_hz: bw,
        coding_rate: cr.as_str(),
        payload_bytes: payload,
        preamble_symbols: preamble,
        low_data_rate_optimize: config.low_data_rate_optimize(),
        time_on_air_s: toa,
        data_rate_bps: data_rate(sf, bw, cr),
        duty_cycle_limit: duty_cycle,
        duty_cycle_min_interval_s: duty_cycle_min_interval(toa, duty_cycle),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("toa output serialization cannot fail")
    );
    Ok(0)
}

fn cmd_mobility(
    site_path: &Path,
    trajectory_path: &Path,
    model: &MobilityModel,
    out_dir: &Path,
    objective: Objective,
    seed: Option<u64>,
) -> Result<i32> {
    let (mut site, site_bytes) = load_site(site_path)?;
    if let Some(seed) = seed {
        site.config.rng_seed = seed;
    }
    let trajectory_bytes = std::fs::read(trajectory_path)?;
    let trajectory_text = String::from_utf8(trajectory_bytes.clone())
        .map_err(|e| Error::Parse(format!("{}: {e}", trajectory_path.display())))?;
    let trajectory = parse_trajectory_str(&trajectory_text, site.node_profile.antenna_height_m)?;

    let profile = evaluate_path_profile(&trajectory, &site, model, objective)?;
    let report = mobility_report(&profile, &site)?;

    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("profile.csv"), profile_csv(&profile))?;
    std::fs::write(
        out_dir.join("mobility_summary.json"),
        mobility_summary_json(
            &report,
            model,
            &sha256_hex(&site_bytes),
            &sha256_hex(&trajectory_bytes),
            site.config.rng_seed,
            objective,
        ),
    )?;
    println!(
        "evaluated {} samples: {:.1}% connected, {} SF switches -> {}",
        report.samples,
        report.stats.connected_fraction * 100.0,
        report.stats.sf_switch_count,
        out_dir.display()
    );
    Ok(0)
}
