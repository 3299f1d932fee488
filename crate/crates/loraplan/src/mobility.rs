//! Mobile-node evaluation: sample a waypoint trajectory, track per-sample
//! path loss with a speed penalty, and adapt SF/TxPower with hysteresis:
//! eager to climb when the link breaks, reluctant to descend until the better
//! configuration has proven itself.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, Point3};
use crate::planner::{best_gateway, select_config, Objective};
use crate::propagation::PathLossBreakdown;
use crate::radio::{energy_per_tx, rssi, sensitivity, time_on_air, RadioConfig};
use crate::site::{validate_site, Site};

/// A node's movement: piecewise-linear between timestamped waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<(Point3, f64)>,
}

impl Trajectory {
    pub fn new(waypoints: Vec<(Point3, f64)>) -> Result<Self> {
        let traj = Self { waypoints };
        traj.validate()?;
        Ok(traj)
    }

    pub fn validate(&self) -> Result<()> {
        if self.waypoints.len() < 2 {
            return Err(Error::Domain(
                "a trajectory needs at least 2 waypoints".into(),
            ));
        }
        for (p, t) in &self.waypoints {
            if !p.is_finite() || !t.is_finite() {
                return Err(Error::Domain(
                    "trajectory coordinates must be finite".into(),
                ));
            }
        }
        for pair in self.waypoints.windows(2) {
            if pair[1].1 <= pair[0].1 {
                return Err(Error::Domain(
                    "trajectory timestamps must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WaypointFile {
    x: f64,
    y: f64,
    #[serde(default)]
    z: Option<f64>,
    t: f64,
}

/// Parse a trajectory file: a JSON list of `{x, y, z, t}` waypoints.
/// Waypoints without `z` ride at `default_height_m` (the node profile's
/// antenna height).
pub fn parse_trajectory(path: &Path, default_height_m: f64) -> Result<Trajectory> {
    let text = std::fs::read_to_string(path)?;
    parse_trajectory_str(&text, default_height_m)
}

pub fn parse_trajectory_str(text: &str, default_height_m: f64) -> Result<Trajectory> {
    let raw: Vec<WaypointFile> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Trajectory::new(
        raw.into_iter()
            .map(|w| (Point3::new(w.x, w.y, w.z.unwrap_or(default_height_m)), w.t))
            .collect(),
    )
}

/// Knobs of the adaptive evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MobilityModel {
    /// Extra path loss per m/s of node speed.
    pub alpha_db_per_mps: f64,
    pub sample_interval_s: f64,
    /// Extra margin a cheaper configuration must show before we switch down.
    pub hysteresis_db: f64,
    /// Consecutive samples the cheaper configuration must hold that margin.
    pub dwell_samples: u32,
}

impl Default for MobilityModel {
    fn default() -> Self {
        Self {
            alpha_db_per_mps: 0.0,
            sample_interval_s: 1.0,
            hysteresis_db: 2.0,
            dwell_samples: 2,
        }
    }
}

impl MobilityModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_db_per_mps >= 0.0) {
            return Err(Error::Domain("alpha_db_per_mps must be >= 0".into()));
        }
        if !(self.sample_interval_s > 0.0) {
            return Err(Error::Domain("sample_interval_s must be > 0".into()));
        }
        if !(self.hysteresis_db >= 0.0) {
            return Err(Error::Domain("hysteresis_db must be >= 0".into()));
        }
        if self.dwell_samples < 1 {
            return Err(Error::Domain("dwell_samples must be >= 1".into()));
        }
        Ok(())
    }
}

/// One evaluated instant along the path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub t: f64,
    pub position: Point3,
    pub speed_mps: f64,
    pub breakdown: PathLossBreakdown,
    pub config: Option<RadioConfig>,
    pub rssi_dbm: Option<f64>,
    pub connected: bool,
}

/// Profile aggregates, all recomputable from the samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileStats {
    pub connected_fraction: f64,
    /// SF changes between consecutive connected samples.
    pub sf_switch_count: u32,
    /// Share of connected samples spent at each SF.
    pub sf_time_shares: BTreeMap<u8, f64>,
    /// One transmission per connected sample, mJ.
    pub total_energy_mj: f64,
    pub rssi_min_dbm: Option<f64>,
    pub rssi_mean_dbm: Option<f64>,
    pub rssi_max_dbm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathProfile {
    pub samples: Vec<PathSample>,
    pub stats: ProfileStats,
}

/// Instants along the trajectory at `interval_s` spacing from the first
/// timestamp, always including the final one: (t, position, speed).
///
/// Speed at a sample is the speed of the segment it lies on; the final sample
/// uses the last segment's speed.
pub fn sample_trajectory(
    trajectory: &Trajectory,
    interval_s: f64,
) -> Result<Vec<(f64, Point3, f64)>> {
    trajectory.validate()?;
    if !(interval_s > 0.0) {
        return Err(Error::Domain("sample interval must be > 0".into()));
    }
    let waypoints = &trajectory.waypoints;
    let t0 = waypoints[0].1;
    let t_end = waypoints[waypoints.len() - 1].1;
    let span = t_end - t0;

    let steps = (span / interval_s + 1e-9).floor() as u64;
    let mut times: Vec<f64> = (0..=steps)
        .map(|k| (t0 + k as f64 * interval_s).min(t_end))
        .collect();
    if *times.last().unwrap() < t_end - 1e-9 {
        times.push(t_end);
    }

    let mut segment = 0usize;
    let samples = times
        .into_iter()
        .map(|t| {
            while segment + 2 < waypoints.len() && t >= waypoints[segment + 1].1 {
                segment += 1;
            }
            let (ref p0, s0) = waypoints[segment];
            let (ref p1, s1) = waypoints[segment + 1];
            let u = ((t - s0) / (s1 - s0)).clamp(0.0, 1.0);
            let position = Point3::new(
                p0.x + u * (p1.x - p0.x),
                p0.y + u * (p1.y - p0.y),
                p0.z + u * (p1.z - p0.z),
            );
            let speed = p0.distance_3d(p1) / (s1 - s0);
            (t, position, speed)
        })
        .collect();
    Ok(samples)
}

/// Evaluate a trajectory over the site.
///
/// Per sample: speed penalty alpha * v, best gateway by minimum total loss
/// (handover is free), then the adaptive rule: hold the current
/// configuration while it stays feasible; adopt a cheaper one only after it
/// has been feasible with `hysteresis_db` of extra margin for `dwell_samples`
/// consecutive samples; re-select immediately on infeasibility.
pub fn evaluate_path_profile(
    trajectory: &Trajectory,
    site: &Site,
    model: &MobilityModel,
    objective: Objective,
) -> Result<PathProfile> {
    let violations = validate_site(site);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    model.validate()?;

    let instants = sample_trajectory(trajectory, model.sample_interval_s)?;
    let config = &site.config;
    let g_s = site.node_profile.antenna_gain_dbi;

    let mut samples = Vec::with_capacity(instants.len());
    let mut current: Option<RadioConfig> = None;
    let mut down_streak = 0u32;

    for (t, position, speed_mps) in instants {
        let penalty_db = model.alpha_db_per_mps * speed_mps;
        let cell = site.grid.cell_containing(position.x, position.y);
        let best = best_gateway(site, position, penalty_db, cell)?;

        let (breakdown, g_r) = match &best {
            Some((gateway, breakdown)) => (*breakdown, gateway.antenna_gain_dbi),
            None => (PathLossBreakdown::zero(), 0.0),
        };
        let total_db = breakdown.total_db;

        let candidate = if best.is_some() {
            select_config(total_db, g_s, g_r, config, objective)?
        } else {
            None
        };

        let feasible = |rc: &RadioConfig, extra_margin: f64| -> Result<bool> {
            let threshold = sensitivity(rc.sf, rc.bandwidth_hz, config.noise_figure_db)?
                + config.link_margin_db
                + extra_margin;
            Ok(rssi(f64::from(rc.txpower_dbm), g_s, g_r, total_db) >= threshold)
        };

        let holding = match (&best, &current) {
            (Some(_), Some(rc)) => feasible(rc, 0.0)?,
            _ => false,
        };
        if holding {
            if let Some(cand) = &candidate {
                let held = current.as_ref().expect("holding implies a config");
                let cheaper = cand.sf < held.sf
                    || (cand.sf == held.sf && cand.txpower_dbm < held.txpower_dbm);
                if cheaper && feasible(cand, model.hysteresis_db)? {
                    down_streak += 1;
                    if down_streak >= model.dwell_samples {
                        current = Some(*cand);
                        down_streak = 0;
                    }
                } else {
                    down_streak = 0;
                }
            } else {
                down_streak = 0;
            }
        } else {
            // Initial pick, reconnection, or immediate upward re-selection.
            current = candidate;
            down_streak = 0;
        }

        let connected = current.is_some();
        let rssi_dbm = current
            .as_ref()
            .map(|rc| rssi(f64::from(rc.txpower_dbm), g_s, g_r, total_db));
        samples.push(PathSample {
            t,
            position,
            speed_mps,
            breakdown,
            config: current,
            rssi_dbm,
            connected,
        });
    }

    let stats = compute_stats(&samples, site)?;
    Ok(PathProfile { samples, stats })
}

/// Recompute the aggregate block from the sample list.
pub fn compute_stats(samples: &[PathSample], site: &Site) -> Result<ProfileStats> {
    let total = samples.len();
    let mut connected = 0usize;
    let mut sf_counts: BTreeMap<u8, usize> = BTreeMap::new();
    let mut switches = 0u32;
    let mut last_sf: Option<u8> = None;
    let mut energy_mj = 0.0;
    let mut rssi_min = f64::INFINITY;
    let mut rssi_max = f64::NEG_INFINITY;
    let mut rssi_sum = 0.0;

    for sample in samples {
        let Some(rc) = &sample.config else { continue };
        connected += 1;
        *sf_counts.entry(rc.sf).or_insert(0) += 1;
        if let Some(prev) = last_sf {
            if prev != rc.sf {
                switches += 1;
            }
        }
        last_sf = Some(rc.sf);
        energy_mj += energy_per_tx(time_on_air(rc), rc.txpower_dbm, &site.config)?;
        let r = sample.rssi_dbm.expect("connected sample carries an RSSI");
        rssi_min = rssi_min.min(r);
        rssi_max = rssi_max.max(r);
        rssi_sum += r;
    }

    Ok(ProfileStats {
        connected_fraction: if total == 0 {
            0.0
        } else {
            connected as f64 / total as f64
        },
        sf_switch_count: switches,
        sf_time_shares: sf_counts
            .into_iter()
            .map(|(sf, n)| (sf, n as f64 / connected as f64))
            .collect(),
        total_energy_mj: energy_mj,
        rssi_min_dbm: (connected > 0).then_some(rssi_min),
        rssi_mean_dbm: (connected > 0).then(|| rssi_sum / connected as f64),
        rssi_max_dbm: (connected > 0).then_some(rssi_max),
    })
}

/// Summary record for reports: the profile stats plus per-region energy
/// totals when the site declares named regions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MobilityReport {
    pub samples: usize,
    pub stats: ProfileStats,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub per_region_energy_mj: BTreeMap<String, f64>,
}

pub fn mobility_report(profile: &PathProfile, site: &Site) -> Result<MobilityReport> {
    let mut per_region: BTreeMap<String, f64> = BTreeMap::new();
    for region in &site.regions {
        per_region.insert(region.id.clone(), 0.0);
    }
    if !site.regions.is_empty() {
        for sample in &profile.samples {
            let Some(rc) = &sample.config else { continue };
            let energy = energy_per_tx(time_on_air(rc), rc.txpower_dbm, &site.config)?;
            for region in &site.regions {
                if point_in_polygon(sample.position.xy(), &region.footprint) {
                    *per_region.get_mut(&region.id).expect("region key") += energy;
                }
            }
        }
    }
    Ok(MobilityReport {
        samples: profile.samples.len(),
        stats: profile.stats.clone(),
        per_region_energy_mj: per_region,
    })
}
