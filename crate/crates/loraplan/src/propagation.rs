//! The multi-loss path model: a free-space or Ericsson base loss plus
//! multi-wall-and-floor penalties, vegetation attenuation, knife-edge
//! diffraction for Fresnel-zone intrusions, seeded shadowing, and an optional
//! mobility penalty. Components combine additively in dB.

use serde::Serialize;

use crate::detmath;
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::site::{Environment, Site, SiteConfig, VEGETATION_LOSS_CAP_DB};
use crate::trace::{trace_crossings, Crossing, CrossingKind};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Per-component path loss between two stations; `total_db` is their sum,
/// clamped at zero.
///
/// Every component except `shadowing_db` is non-negative. When a strongly
/// negative shadowing draw would push the sum below zero, the stored
/// `shadowing_db` is floored at minus the other components so the breakdown
/// still sums to `total_db` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLossBreakdown {
    pub base_db: f64,
    pub wall_db: f64,
    pub floor_db: f64,
    pub vegetation_db: f64,
    pub diffraction_db: f64,
    pub shadowing_db: f64,
    pub mobility_db: f64,
    pub total_db: f64,
}

impl PathLossBreakdown {
    /// Sum of the seven components; equals `total_db` up to rounding.
    pub fn component_sum(&self) -> f64 {
        self.base_db
            + self.wall_db
            + self.floor_db
            + self.vegetation_db
            + self.diffraction_db
            + self.shadowing_db
            + self.mobility_db
    }

    /// An all-zero breakdown, used for cells with no gateway to evaluate.
    pub fn zero() -> Self {
        Self {
            base_db: 0.0,
            wall_db: 0.0,
            floor_db: 0.0,
            vegetation_db: 0.0,
            diffraction_db: 0.0,
            shadowing_db: 0.0,
            mobility_db: 0.0,
            total_db: 0.0,
        }
    }
}

/// Free-space path loss: 32.45 + 20 log10(d_km) + 20 log10(f_MHz).
///
/// Negative at sub-meter/low-frequency corners; `total_path_loss` clamps the
/// base component at zero.
pub fn free_space_loss(distance_m: f64, frequency_hz: f64) -> Result<f64> {
    if !(distance_m > 0.0) || !(frequency_hz > 0.0) {
        return Err(Error::Domain(format!(
            "free_space_loss requires positive distance and frequency (got {distance_m} m, {frequency_hz} Hz)"
        )));
    }
    Ok(32.45 + 20.0 * (distance_m / 1000.0).log10() + 20.0 * (frequency_hz / 1e6).log10())
}

/// Coefficients of the Ericsson macro-cell model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EricssonParams {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl EricssonParams {
    /// Published coefficient triples. `Open` has none: open terrain is
    /// modeled by free-space loss instead.
    pub fn for_environment(environment: Environment) -> Option<Self> {
        match environment {
            Environment::Urban => Some(Self {
                a0: 36.2,
                a1: 30.2,
                a2: -12.0,
                a3: 0.1,
            }),
            Environment::Suburban => Some(Self {
                a0: 43.2,
                a1: 68.93,
                a2: -12.0,
                a3: 0.1,
            }),
            Environment::Rural => Some(Self {
                a0: 45.95,
                a1: 100.6,
                a2: -12.0,
                a3: 0.1,
            }),
            Environment::Open => None,
        }
    }
}

/// Ericsson model median loss with explicit coefficients.
pub fn ericsson_loss_with_params(
    distance_m: f64,
    frequency_hz: f64,
    base_height_m: f64,
    mobile_height_m: f64,
    params: EricssonParams,
) -> Result<f64> {
    if !(distance_m > 0.0)
        || !(frequency_hz > 0.0)
        || !(base_height_m > 0.0)
        || !(mobile_height_m > 0.0)
    {
        return Err(Error::Domain(
            "ericsson_loss requires positive distance, frequency and heights".into(),
        ));
    }
    let d_km = distance_m / 1000.0;
    let f_mhz = frequency_hz / 1e6;
    let log_d = d_km.log10();
    let log_hb = base_height_m.log10();
    let g = 44.49 * f_mhz.log10() - 4.78 * f_mhz.log10().powi(2);
    Ok(
        params.a0 + params.a1 * log_d + params.a2 * log_hb + params.a3 * log_hb * log_d
            - 3.2 * (11.75 * mobile_height_m).log10().powi(2)
            + g,
    )
}

/// Ericsson model with the coefficient set for `environment`.
pub fn ericsson_loss(
    distance_m: f64,
    frequency_hz: f64,
    base_height_m: f64,
    mobile_height_m: f64,
    environment: Environment,
) -> Result<f64> {
    let params = EricssonParams::for_environment(environment).ok_or_else(|| {
        Error::Domain("ericsson_loss has no coefficients for the open environment".into())
    })?;
    ericsson_loss_with_params(
        distance_m,
        frequency_hz,
        base_height_m,
        mobile_height_m,
        params,
    )
}

/// Multi-wall-and-floor losses for a crossing list:
/// (wall_db, floor_db, vegetation_db).
///
/// Vegetation loss is `vegetation_loss_db_per_m` times the total canopy depth,
/// capped at 30 dB.
pub fn mwf_loss(crossings: &[Crossing], config: &SiteConfig) -> Result<(f64, f64, f64)> {
    let mut wall_db = 0.0;
    let mut floor_count = 0u32;
    let mut vegetation_depth_m = 0.0;
    for crossing in crossings {
        match crossing.kind {
            CrossingKind::Wall { material } => {
                let loss = config.material_loss_table.get(&material).ok_or_else(|| {
                    Error::Config(format!(
                        "material {:?} missing from material_loss_table",
                        material.as_str()
                    ))
                })?;
                wall_db += loss;
            }
            CrossingKind::Floor => floor_count += 1,
            CrossingKind::Vegetation { depth_m } => vegetation_depth_m += depth_m,
            CrossingKind::KnifeEdge { .. } => {}
        }
    }
    let vegetation_db =
        (config.vegetation_loss_db_per_m * vegetation_depth_m).min(VEGETATION_LOSS_CAP_DB);
    Ok((
        wall_db,
        f64::from(floor_count) * config.floor_loss_db,
        vegetation_db,
    ))
}

/// First-Fresnel-zone radius at a point splitting the link into d1 + d2.
pub fn fresnel_radius(d1_m: f64, d2_m: f64, frequency_hz: f64) -> Result<f64> {
    if d1_m < 0.0 || d2_m < 0.0 {
        return Err(Error::Domain(
            "fresnel_radius requires non-negative distances".into(),
        ));
    }
    if d1_m + d2_m == 0.0 {
        return Err(Error::Domain("fresnel_radius requires d1 + d2 > 0".into()));
    }
    if !(frequency_hz > 0.0) {
        return Err(Error::Domain(
            "fresnel_radius requires a positive frequency".into(),
        ));
    }
    let wavelength = SPEED_OF_LIGHT / frequency_hz;
    Ok((wavelength * d1_m * d2_m / (d1_m + d2_m)).sqrt())
}

/// Single knife-edge diffraction loss J(v), zero below v = -0.78.
///
/// J(v) = 6.9 + 20 log10(sqrt((v-0.1)^2 + 1) + v - 0.1); non-decreasing and
/// continuous at the branch point to within 0.005 dB.
pub fn knife_edge_loss(v: f64) -> f64 {
    if !(v > -0.78) {
        return 0.0;
    }
    let u = v - 0.1;
    6.9 + 20.0 * ((u * u + 1.0).sqrt() + u).log10()
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Map a hash word to the open unit interval.
fn unit_open(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Deterministic zero-mean Gaussian shadowing draw for a grid cell.
///
/// The value is a pure function of (seed, i, j): identical across runs,
/// platforms and evaluation orders, so parallel grid evaluation equals serial
/// evaluation bit for bit.
pub fn shadowing_sample(cell: (u32, u32), seed: u64, sigma_db: f64) -> f64 {
    if sigma_db == 0.0 {
        return 0.0;
    }
    let cell_key = (u64::from(cell.0) << 32) | u64::from(cell.1);
    let key = mix64(mix64(seed.wrapping_add(GOLDEN_GAMMA)) ^ cell_key);
    let u1 = unit_open(mix64(key.wrapping_add(GOLDEN_GAMMA)));
    let u2 = unit_open(mix64(key.wrapping_add(GOLDEN_GAMMA.wrapping_mul(2))));
    sigma_db * (-2.0 * detmath::ln(u1)).sqrt() * detmath::cos_2pi(u2)
}

/// Number of strongest knife edges whose losses are summed.
const KNIFE_EDGE_SUM_CAP: usize = 3;

/// Full breakdown for the link `a -> b` over the site.
///
/// Base loss is free-space in the open environment, otherwise Ericsson with
/// the taller endpoint as the base station. `cell` keys the shadowing draw;
/// pass `None` to evaluate without shadowing (e.g. off-grid positions).
pub fn total_path_loss(
    a: Point3,
    b: Point3,
    site: &Site,
    mobility_penalty_db: f64,
    cell: Option<(u32, u32)>,
) -> Result<PathLossBreakdown> {
    if mobility_penalty_db < 0.0 {
        return Err(Error::Domain("mobility penalty must be >= 0 dB".into()));
    }
    let crossings = trace_crossings(a, b, site)?;

    let distance_m = a.distance_3d(&b);
    let config = &site.config;
    let base_raw = match config.environment {
        Environment::Open => free_space_loss(distance_m, config.frequency_hz)?,
        env => ericsson_loss(
            distance_m,
            config.frequency_hz,
            a.z.max(b.z),
            a.z.min(b.z),
            env,
        )?,
    };
    let base_db = base_raw.max(0.0);

    let (wall_db, floor_db, vegetation_db) = mwf_loss(&crossings, config)?;

    let mut intrusions: Vec<f64> = crossings
        .iter()
        .filter_map(|c| match c.kind {
            CrossingKind::KnifeEdge { v } => Some(v),
            _ => None,
        })
        .collect();
    intrusions.sort_by(|x, y| y.total_cmp(x));
    // fold from +0.0: an empty Iterator::sum over f64 yields -0.0, which
    // would leak a "-0" into reports.
    let diffraction_db: f64 = intrusions
        .iter()
        .take(KNIFE_EDGE_SUM_CAP)
        .fold(0.0, |acc, &v| acc + knife_edge_loss(v));

    let shadow_raw = cell.map_or(0.0, |c| {
        shadowing_sample(c, config.rng_seed, config.shadowing_sigma_db)
    });

    let non_shadow_sum =
        base_db + wall_db + floor_db + vegetation_db + diffraction_db + mobility_penalty_db;
    // Floor the shadowing term so the clamped total still equals the
    // component sum.
    let shadowing_db = shadow_raw.max(-non_shadow_sum);
    let total_db = non_shadow_sum + shadowing_db;

    Ok(PathLossBreakdown {
        base_db,
        wall_db,
        floor_db,
        vegetation_db,
        diffraction_db,
        shadowing_db,
        mobility_db: mobility_penalty_db,
        total_db,
    })
}
