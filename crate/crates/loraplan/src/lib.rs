//! Deterministic LoRaWAN deployment planning.
//!
//! Given a digitized site (a planning grid, gateways, building and
//! vegetation footprints with heights) this crate predicts per-link path
//! loss with a multi-loss model (free-space or Ericsson base loss,
//! multi-wall-and-floor penalties, vegetation attenuation, knife-edge
//! diffraction for Fresnel-zone intrusions, seeded shadowing) and searches
//! the (SF, TxPower) space for the cheapest configuration whose predicted
//! RSSI clears the receiver sensitivity plus link margin. It plans static
//! coverage grids and evaluates mobile trajectories with an adaptive
//! parameter rule.
//!
//! Every result is a pure function of the site file and its seed: planning
//! runs are reproducible byte for byte, serial or parallel.
//!
//! ```
//! use loraplan::planner::{plan_site, Objective};
//! use loraplan::site::parse_site_str;
//!
//! let site = parse_site_str(r#"{
//!     "grid": { "cell_size_m": 50.0, "nx": 8, "ny": 8 },
//!     "gateways": [
//!         { "id": "gw", "position": { "x": 200.0, "y": 200.0, "z": 12.0 },
//!           "antenna_gain_dbi": 2.15 }
//!     ]
//! }"#).unwrap();
//! let grid = plan_site(&site, Objective::MinAirtime).unwrap();
//! assert_eq!(grid.summary.coverage_fraction, 1.0);
//! ```
//!
//! The `examples/` directory walks through every major capability; the
//! `loraplan` binary exposes the same pipeline as `validate`, `plan`,
//! `link`, `toa` and `mobility` subcommands.

// `!(x > 0.0)` guards reject NaN along with the out-of-range value; the
// suggested `x <= 0.0` would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod detmath;
pub mod error;
pub mod geometry;
pub mod mobility;
pub mod planner;
pub mod propagation;
pub mod radio;
pub mod report;
pub mod site;
pub mod trace;

pub use error::{Error, Result, Violation};
pub use geometry::Point3;
pub use mobility::{
    evaluate_path_profile, mobility_report, parse_trajectory, sample_trajectory, MobilityModel,
    PathProfile, Trajectory,
};
pub use planner::{plan_cell, plan_site, select_config, CellPlan, CoverageGrid, Objective};
pub use propagation::{
    ericsson_loss, free_space_loss, fresnel_radius, knife_edge_loss, mwf_loss, shadowing_sample,
    total_path_loss, PathLossBreakdown,
};
pub use radio::{
    data_rate, duty_cycle_min_interval, energy_per_tx, rssi, sensitivity, time_on_air, LinkReport,
    RadioConfig,
};
pub use site::{parse_site, parse_site_str, serialize_site, validate_site, Site, SiteConfig};
pub use trace::{trace_crossings, Crossing, CrossingKind};
