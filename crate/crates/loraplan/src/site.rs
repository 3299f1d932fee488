//! Site data model: grid, radio environment, obstructions, gateways.
//!
//! A site is a single JSON document with top-level keys `grid`, `config`,
//! `node_profile`, `gateways`, `obstructions` (and optionally `regions`).
//! Parsing is strict: unknown keys are rejected. Semantic checks live in
//! [`validate_site`], which reports violations as data instead of failing.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::geometry::{polygon_is_simple, polygon_signed_area, Point3};

/// Wall/floor construction material of a building obstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Brick,
    Concrete,
    Wood,
    Glass,
}

impl Material {
    pub const ALL: [Material; 4] = [
        Material::Brick,
        Material::Concrete,
        Material::Wood,
        Material::Glass,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Material::Brick => "brick",
            Material::Concrete => "concrete",
            Material::Wood => "wood",
            Material::Glass => "glass",
        }
    }
}

/// Propagation environment; selects the base-loss model.
///
/// `Open` uses free-space loss; the others use the Ericsson model with the
/// matching coefficient set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Environment {
    Open,
    Rural,
    Suburban,
    Urban,
}

/// LoRa forward-error-correction coding rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodingRate {
    #[serde(rename = "4/5")]
    Cr4_5,
    #[serde(rename = "4/6")]
    Cr4_6,
    #[serde(rename = "4/7")]
    Cr4_7,
    #[serde(rename = "4/8")]
    Cr4_8,
}

impl CodingRate {
    /// Denominator of the 4/x rate; the payload symbol count scales with it.
    pub fn denominator(&self) -> u32 {
        match self {
            CodingRate::Cr4_5 => 5,
            CodingRate::Cr4_6 => 6,
            CodingRate::Cr4_7 => 7,
            CodingRate::Cr4_8 => 8,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CodingRate::Cr4_5 => "4/5",
            CodingRate::Cr4_6 => "4/6",
            CodingRate::Cr4_7 => "4/7",
            CodingRate::Cr4_8 => "4/8",
        }
    }
}

impl std::str::FromStr for CodingRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4/5" => Ok(CodingRate::Cr4_5),
            "4/6" => Ok(CodingRate::Cr4_6),
            "4/7" => Ok(CodingRate::Cr4_7),
            "4/8" => Ok(CodingRate::Cr4_8),
            other => Err(Error::Parse(format!(
                "unknown coding rate {other:?} (expected 4/5, 4/6, 4/7 or 4/8)"
            ))),
        }
    }
}

/// Planning grid: the deployment area divided into `nx` x `ny` square cells.
///
/// Cell (i, j) has its center at ((i+0.5)*cell_size_m, (j+0.5)*cell_size_m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub cell_size_m: f64,
    pub nx: u32,
    pub ny: u32,
    /// Antenna height assumed for the planned node at every cell.
    #[serde(default = "default_node_height")]
    pub node_height_m: f64,
}

fn default_node_height() -> f64 {
    1.5
}

impl GridSpec {
    /// Center of cell (i, j) at the planning node height.
    pub fn cell_center(&self, i: u32, j: u32) -> Point3 {
        Point3::new(
            (f64::from(i) + 0.5) * self.cell_size_m,
            (f64::from(j) + 0.5) * self.cell_size_m,
            self.node_height_m,
        )
    }

    /// Grid cell containing an xy position, if any.
    pub fn cell_containing(&self, x: f64, y: f64) -> Option<(u32, u32)> {
        if !(x.is_finite() && y.is_finite()) || x < 0.0 || y < 0.0 {
            return None;
        }
        let i = (x / self.cell_size_m).floor();
        let j = (y / self.cell_size_m).floor();
        if i < f64::from(self.nx) && j < f64::from(self.ny) {
            Some((i as u32, j as u32))
        } else {
            None
        }
    }

    pub fn cell_count(&self) -> usize {
        self.nx as usize * self.ny as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObstructionKind {
    Building,
    Vegetation,
}

/// A building or vegetation patch with a polygonal footprint and a height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstruction {
    pub id: String,
    pub kind: ObstructionKind,
    /// Simple counterclockwise polygon; vertex z is ignored.
    pub footprint: Vec<Point3>,
    pub height_m: f64,
    /// Buildings only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<Material>,
    /// Buildings only; floors are evenly spaced between ground and height_m
    /// (floor k sits at k*height_m/(floor_count+1)).
    #[serde(default)]
    pub floor_count: u32,
}

impl Obstruction {
    /// Height of interior floor plane `k` (1-based).
    pub fn floor_height(&self, k: u32) -> f64 {
        f64::from(k) * self.height_m / f64::from(self.floor_count + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gateway {
    pub id: String,
    /// z is the antenna height above ground.
    pub position: Point3,
    pub antenna_gain_dbi: f64,
}

/// Radio properties of the planned (mobile or static) node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NodeProfile {
    pub antenna_gain_dbi: f64,
    /// Default antenna height wherever a position does not carry one
    /// (trajectory waypoints without z, `link --from x,y`).
    pub antenna_height_m: f64,
}

impl Default for NodeProfile {
    fn default() -> Self {
        Self {
            antenna_gain_dbi: 2.15,
            antenna_height_m: 1.5,
        }
    }
}

/// A named area of the site; mobility reports break energy out per region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub id: String,
    pub footprint: Vec<Point3>,
}

/// Radio-environment configuration and loss tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SiteConfig {
    pub frequency_hz: f64,
    pub bandwidth_hz: u32,
    pub coding_rate: CodingRate,
    pub environment: Environment,
    pub duty_cycle_limit: f64,
    pub link_margin_db: f64,
    pub shadowing_sigma_db: f64,
    pub rng_seed: u64,
    pub noise_figure_db: f64,
    /// dB lost per wall crossing, by material.
    pub material_loss_table: BTreeMap<Material, f64>,
    /// dB lost per floor crossing.
    pub floor_loss_db: f64,
    /// dB lost per meter of vegetation, capped at [`VEGETATION_LOSS_CAP_DB`].
    pub vegetation_loss_db_per_m: f64,
    pub supply_voltage_v: f64,
    /// TX current draw in mA by integer TxPower (dBm).
    pub tx_current_table: BTreeMap<u8, f64>,
}

/// Total vegetation loss on a link never exceeds this.
pub const VEGETATION_LOSS_CAP_DB: f64 = 30.0;

/// Default per-wall losses: brick 8, concrete 12, wood 4, glass 2 dB.
pub fn default_material_loss_table() -> BTreeMap<Material, f64> {
    BTreeMap::from([
        (Material::Brick, 8.0),
        (Material::Concrete, 12.0),
        (Material::Wood, 4.0),
        (Material::Glass, 2.0),
    ])
}

/// Default TX current draw (mA) for every integer TxPower in [2, 20] dBm.
///
/// Anchored at 2->24, 5->25, 8->30, 11->38, 14->45, 17->90, 20->120 with
/// linear interpolation at intermediate powers.
pub fn default_tx_current_table() -> BTreeMap<u8, f64> {
    let anchors: [(u8, f64); 7] = [
        (2, 24.0),
        (5, 25.0),
        (8, 30.0),
        (11, 38.0),
        (14, 45.0),
        (17, 90.0),
        (20, 120.0),
    ];
    let mut table = BTreeMap::new();
    for pair in anchors.windows(2) {
        let (x0, y0) = pair[0];
        let (x1, y1) = pair[1];
        for x in x0..x1 {
            let frac = f64::from(x - x0) / f64::from(x1 - x0);
            table.insert(x, y0 + (y1 - y0) * frac);
        }
    }
    table.insert(20, 120.0);
    table
}

impl Default for SiteConfig {
    fn default() -> Self {
        Self {
            frequency_hz: 865.5e6,
            bandwidth_hz: 125_000,
            coding_rate: CodingRate::Cr4_5,
            environment: Environment::Open,
            duty_cycle_limit: 0.01,
            link_margin_db: 3.0,
            shadowing_sigma_db: 0.0,
            rng_seed: 0,
            noise_figure_db: 6.0,
            material_loss_table: default_material_loss_table(),
            floor_loss_db: 15.0,
            vegetation_loss_db_per_m: 0.5,
            supply_voltage_v: 3.3,
            tx_current_table: default_tx_current_table(),
        }
    }
}

/// The fully loaded site: everything planning and mobility evaluation need.
///
/// Immutable after load; all queries against it are pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Site {
    pub grid: GridSpec,
    #[serde(default)]
    pub config: SiteConfig,
    #[serde(default)]
    pub node_profile: NodeProfile,
    #[serde(default)]
    pub gateways: Vec<Gateway>,
    #[serde(default)]
    pub obstructions: Vec<Obstruction>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<Region>,
}

impl Site {
    pub fn gateway(&self, id: &str) -> Option<&Gateway> {
        self.gateways.iter().find(|g| g.id == id)
    }
}

/// Parse a site file from disk. Syntax and schema errors (including unknown
/// keys) are reported with line/column; semantic checks are left to
/// [`validate_site`].
pub fn parse_site(path: &Path) -> Result<Site> {
    let text = std::fs::read_to_string(path)?;
    parse_site_str(&text)
}

/// Parse a site document from a string.
pub fn parse_site_str(text: &str) -> Result<Site> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Serialize a site back to its file representation.
///
/// `parse_site_str(serialize_site(site))` is the identity on `Site`.
pub fn serialize_site(site: &Site) -> String {
    let mut s = serde_json::to_string_pretty(site).expect("site serialization cannot fail");
    s.push('\n');
    s
}

/// Check every type invariant; returns an empty list iff the site is valid.
pub fn validate_site(site: &Site) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |entity: &str, invariant: &str| {
        out.push(Violation {
            entity: entity.to_string(),
            invariant: invariant.to_string(),
        })
    };

    let g = &site.grid;
    if !(g.cell_size_m > 0.0 && g.cell_size_m.is_finite()) {
        push("grid.cell_size_m", "must be finite and > 0");
    }
    if g.nx == 0 || g.ny == 0 {
        push("grid.nx/ny", "cell counts must be positive");
    }
    if !(g.node_height_m > 0.0 && g.node_height_m.is_finite()) {
        push("grid.node_height_m", "must be finite and > 0");
    }

    let c = &site.config;
    if !(c.frequency_hz >= 100e6 && c.frequency_hz <= 6e9) {
        push("config.frequency_hz", "must lie in [100 MHz, 6 GHz]");
    }
    if ![125_000, 250_000, 500_000].contains(&c.bandwidth_hz) {
        push("config.bandwidth_hz", "must be 125000, 250000 or 500000");
    }
    if !(c.duty_cycle_limit > 0.0 && c.duty_cycle_limit <= 1.0) {
        push("config.duty_cycle_limit", "must lie in (0, 1]");
    }
    if !(c.link_margin_db >= 0.0 && c.link_margin_db.is_finite()) {
        push("config.link_margin_db", "must be finite and >= 0");
    }
    if !(c.shadowing_sigma_db >= 0.0 && c.shadowing_sigma_db.is_finite()) {
        push("config.shadowing_sigma_db", "must be finite and >= 0");
    }
    if !c.noise_figure_db.is_finite() {
        push("config.noise_figure_db", "must be finite");
    }
    for (material, loss) in &c.material_loss_table {
        if !(*loss >= 0.0 && loss.is_finite()) {
            push(
                &format!("config.material_loss_table[{}]", material.as_str()),
                "loss entries must be finite and >= 0",
            );
        }
    }
    if !(c.floor_loss_db >= 0.0 && c.floor_loss_db.is_finite()) {
        push("config.floor_loss_db", "must be finite and >= 0");
    }
    if !(c.vegetation_loss_db_per_m >= 0.0 && c.vegetation_loss_db_per_m.is_finite()) {
        push("config.vegetation_loss_db_per_m", "must be finite and >= 0");
    }
    if !(c.supply_voltage_v > 0.0 && c.supply_voltage_v.is_finite()) {
        push("config.supply_voltage_v", "must be finite and > 0");
    }
    for (txp, current) in &c.tx_current_table {
        if !(*current > 0.0 && current.is_finite()) {
            push(
                &format!("config.tx_current_table[{txp}]"),
                "current entries must be finite and > 0",
            );
        }
    }

    let np = &site.node_profile;
    if !(np.antenna_height_m > 0.0 && np.antenna_height_m.is_finite()) {
        push("node_profile.antenna_height_m", "must be finite and > 0");
    }
    if !np.antenna_gain_dbi.is_finite() {
        push("node_profile.antenna_gain_dbi", "must be finite");
    }

    let mut seen_gateway_ids = std::collections::BTreeSet::new();
    for gw in &site.gateways {
        let entity = format!("gateway \"{}\"", gw.id);
        if gw.id.is_empty() {
            push("gateway", "id must be non-empty");
        }
        if !seen_gateway_ids.insert(gw.id.as_str()) {
            push(&entity, "id must be unique");
        }
        if !gw.position.is_finite() {
            push(&format!("{entity}.position"), "coordinates must be finite");
        }
        if !(gw.position.z > 0.0) {
            push(
                &format!("{entity}.position.z"),
                "antenna height must be > 0",
            );
        }
        if !gw.antenna_gain_dbi.is_finite() {
            push(&format!("{entity}.antenna_gain_dbi"), "must be finite");
        }
    }

    let mut seen_obstruction_ids = std::collections::BTreeSet::new();
    for ob in &site.obstructions {
        let entity = format!("obstruction \"{}\"", ob.id);
        if ob.id.is_empty() {
            push("obstruction", "id must be non-empty");
        }
        if !seen_obstruction_ids.insert(ob.id.as_str()) {
            push(&entity, "id must be unique");
        }
        validate_footprint(&entity, &ob.footprint, &mut push);
        if !(ob.height_m > 0.0 && ob.height_m.is_finite()) {
            push(&format!("{entity}.height_m"), "must be finite and > 0");
        }
        match ob.kind {
            ObstructionKind::Building => {
                if ob.material.is_none() {
                    push(
                        &format!("{entity}.material"),
                        "buildings require a material",
                    );
                }
            }
            ObstructionKind::Vegetation => {
                if ob.material.is_some() {
                    push(
                        &format!("{entity}.material"),
                        "vegetation carries no material",
                    );
                }
                if ob.floor_count != 0 {
                    push(&format!("{entity}.floor_count"), "vegetation has no floors");
                }
            }
        }
    }

    let mut seen_region_ids = std::collections::BTreeSet::new();
    for region in &site.regions {
        let entity = format!("region \"{}\"", region.id);
        if region.id.is_empty() {
            push("region", "id must be non-empty");
        }
        if !seen_region_ids.insert(region.id.as_str()) {
            push(&entity, "id must be unique");
        }
        validate_footprint(&entity, &region.footprint, &mut push);
    }

    out
}

fn validate_footprint(entity: &str, footprint: &[Point3], push: &mut impl FnMut(&str, &str)) {
    if footprint.len() < 3 {
        push(
            &format!("{entity}.footprint"),
            "footprint non-degenerate: needs at least 3 vertices",
        );
        return;
    }
    if footprint.iter().any(|p| !p.is_finite()) {
        push(
            &format!("{entity}.footprint"),
            "all coordinates must be finite",
        );
        return;
    }
    if !polygon_is_simple(footprint) {
        push(
            &format!("{entity}.footprint"),
            "footprint must be a simple polygon",
        );
        return;
    }
    let area = polygon_signed_area(footprint);
    if area.abs() <= 0.0 {
        push(
            &format!("{entity}.footprint"),
            "footprint non-degenerate: area must be > 0",
        );
    } else if area < 0.0 {
        push(
            &format!("{entity}.footprint"),
            "footprint must be counterclockwise",
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_site_json() -> &'static str {
        r#"{
            "grid": { "cell_size_m": 10.0, "nx": 10, "ny": 10 },
            "gateways": [
                { "id": "gw-1", "position": { "x": 50.0, "y": 50.0, "z": 10.0 }, "antenna_gain_dbi": 2.15 }
            ]
        }"#
    }

    #[test]
    fn minimal_file_yields_100_cells_and_defaults() {
        let site = parse_site_str(minimal_site_json()).unwrap();
        assert_eq!(site.grid.cell_count(), 100);
        assert_eq!(site.config.coding_rate, CodingRate::Cr4_5);
        assert_eq!(site.config.bandwidth_hz, 125_000);
        assert_eq!(site.config.environment, Environment::Open);
        assert!(site.obstructions.is_empty());
        assert!(validate_site(&site).is_empty());
    }

    #[test]
    fn absent_tx_current_table_gets_schema_default() {
        // Partial config (frequency only): the TX current table falls back
        // to the documented schema default, frozen here; anchors plus linear
        // interpolation at intermediate integer powers.
        let site = parse_site_str(
            r#"{
                "grid": { "cell_size_m": 10.0, "nx": 10, "ny": 10 },
                "config": { "frequency_hz": 866e6 }
            }"#,
        )
        .unwrap();
        assert_eq!(site.config.frequency_hz, 866e6);
        let expected: Vec<(u8, f64)> = vec![
            (2, 24.0),
            (3, 24.0 + 1.0 / 3.0),
            (4, 24.0 + 2.0 / 3.0),
            (5, 25.0),
            (6, 25.0 + 5.0 / 3.0),
            (7, 25.0 + 10.0 / 3.0),
            (8, 30.0),
            (9, 30.0 + 8.0 / 3.0),
            (10, 30.0 + 16.0 / 3.0),
            (11, 38.0),
            (12, 38.0 + 7.0 / 3.0),
            (13, 38.0 + 14.0 / 3.0),
            (14, 45.0),
            (15, 60.0),
            (16, 75.0),
            (17, 90.0),
            (18, 100.0),
            (19, 110.0),
            (20, 120.0),
        ];
        assert_eq!(site.config.tx_current_table.len(), expected.len());
        for (txp, ma) in expected {
            let got = site.config.tx_current_table[&txp];
            assert!(
                (got - ma).abs() < 1e-9,
                "tx_current_table[{txp}] = {got}, expected {ma}"
            );
        }
        // Monotone non-decreasing across the whole range.
        let values: Vec<f64> = site.config.tx_current_table.values().copied().collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let text = r#"{ "grid": { "cell_size_m": 10.0, "nx": 1, "ny": 1 }, "totally_unknown": 3 }"#;
        let err = parse_site_str(text).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "got {err:?}");
    }

    #[test]
    fn malformed_json_reports_line_and_column() {
        let err = parse_site_str("{ \"grid\": {").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "expected location info, got: {msg}");
    }

    #[test]
    fn gateway_at_ground_level_is_a_violation() {
        let mut site = parse_site_str(minimal_site_json()).unwrap();
        site.gateways[0].position.z = 0.0;
        let violations = validate_site(&site);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].entity.contains("gw-1"));
        assert!(violations[0].entity.contains("position.z"));
    }

    #[test]
    fn two_vertex_footprint_is_degenerate() {
        let mut site = parse_site_str(minimal_site_json()).unwrap();
        site.obstructions.push(Obstruction {
            id: "bad".into(),
            kind: ObstructionKind::Building,
            footprint: vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)],
            height_m: 5.0,
            material: Some(Material::Brick),
            floor_count: 0,
        });
        let violations = validate_site(&site);
        assert!(violations
            .iter()
            .any(|v| v.entity.contains("bad") && v.invariant.contains("non-degenerate")));
    }

    #[test]
    fn vegetation_with_material_or_floors_is_invalid() {
        let mut site = parse_site_str(minimal_site_json()).unwrap();
        site.obstructions.push(Obstruction {
            id: "veg".into(),
            kind: ObstructionKind::Vegetation,
            footprint: vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(5.0, 0.0, 0.0),
                Point3::new(5.0, 5.0, 0.0),
            ],
            height_m: 4.0,
            material: Some(Material::Wood),
            floor_count: 2,
        });
        let violations = validate_site(&site);
        assert!(violations
            .iter()
            .any(|v| v.invariant.contains("no material")));
        assert!(violations.iter().any(|v| v.invariant.contains("no floors")));
    }

    #[test]
    fn clockwise_footprint_is_rejected() {
        let mut site = parse_site_str(minimal_site_json()).unwrap();
        site.obstructions.push(Obstruction {
            id: "cw".into(),
            kind: ObstructionKind::Building,
            footprint: vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(0.0, 5.0, 0.0),
                Point3::new(5.0, 5.0, 0.0),
                Point3::new(5.0, 0.0, 0.0),
            ],
            height_m: 5.0,
            material: Some(Material::Glass),
            floor_count: 1,
        });
        let violations = validate_site(&site);
        assert!(violations
            .iter()
            .any(|v| v.invariant.contains("counterclockwise")));
    }

    #[test]
    fn serialize_parse_round_trip_is_identity() {
        let mut site = parse_site_str(minimal_site_json()).unwrap();
        site.obstructions.push(Obstruction {
            id: "hall".into(),
            kind: ObstructionKind::Building,
            footprint: vec![
                Point3::new(10.0, 10.0, 0.0),
                Point3::new(30.0, 10.0, 0.0),
                Point3::new(30.0, 25.0, 0.0),
                Point3::new(10.0, 25.0, 0.0),
            ],
            height_m: 12.5,
            material: Some(Material::Concrete),
            floor_count: 3,
        });
        site.regions.push(Region {
            id: "quad".into(),
            footprint: vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(40.0, 0.0, 0.0),
                Point3::new(40.0, 40.0, 0.0),
            ],
        });
        site.config.shadowing_sigma_db = 4.0;
        site.config.rng_seed = u64::MAX;
        let round_tripped = parse_site_str(&serialize_site(&site)).unwrap();
        assert_eq!(site, round_tripped);
    }

    #[test]
    fn duplicate_ids_are_violations() {
        let mut site = parse_site_str(minimal_site_json()).unwrap();
        site.gateways.push(site.gateways[0].clone());
        let violations = validate_site(&site);
        assert!(violations.iter().any(|v| v.invariant.contains("unique")));
    }

    #[test]
    fn cell_centers_follow_grid_formula() {
        let site = parse_site_str(minimal_site_json()).unwrap();
        let c = site.grid.cell_center(0, 0);
        assert_eq!((c.x, c.y), (5.0, 5.0));
        let c = site.grid.cell_center(9, 3);
        assert_eq!((c.x, c.y), (95.0, 35.0));
        assert_eq!(c.z, site.grid.node_height_m);
        assert_eq!(site.grid.cell_containing(95.0, 35.0), Some((9, 3)));
        assert_eq!(site.grid.cell_containing(-1.0, 5.0), None);
        assert_eq!(site.grid.cell_containing(100.5, 5.0), None);
    }
}
