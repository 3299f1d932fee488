//! Per-cell parameter optimization: pick the best gateway, then the cheapest
//! (SF, TxPower) pair whose predicted RSSI clears the sensitivity threshold
//! plus link margin, and roll the results up into a coverage grid.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::propagation::{total_path_loss, PathLossBreakdown};
use crate::radio::{
    energy_per_tx, link_report, rssi, sensitivity, time_on_air, LinkReport, RadioConfig, SF_MAX,
    SF_MIN, TXPOWER_MAX_DBM, TXPOWER_MIN_DBM,
};
use crate::site::{validate_site, Gateway, GridSpec, Site, SiteConfig};

/// What "optimal" means when several (SF, TxPower) pairs close the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Lowest feasible SF, then lowest feasible TxPower at that SF.
    #[default]
    MinAirtime,
    /// Least energy per transmission; ties go to lower SF, then lower TxPower.
    MinEnergy,
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::MinAirtime => "min-airtime",
            Objective::MinEnergy => "min-energy",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min-airtime" => Ok(Objective::MinAirtime),
            "min-energy" => Ok(Objective::MinEnergy),
            other => Err(format!(
                "unknown objective {other:?} (expected min-airtime or min-energy)"
            )),
        }
    }
}

/// The plan for one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellPlan {
    pub cell: (u32, u32),
    pub best_gateway: Option<String>,
    pub breakdown: PathLossBreakdown,
    pub config: Option<RadioConfig>,
    pub link: Option<LinkReport>,
    pub covered: bool,
}

/// Aggregates recomputable from the cell list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub cells_total: usize,
    pub cells_covered: usize,
    pub coverage_fraction: f64,
    pub sf_histogram: BTreeMap<u8, usize>,
    pub txpower_histogram: BTreeMap<u8, usize>,
    /// Mean energy per transmission among covered cells, mJ.
    pub mean_energy_mj: Option<f64>,
}

/// Row-major cell plans (index j * nx + i) plus their summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageGrid {
    pub grid: GridSpec,
    pub cells: Vec<CellPlan>,
    pub summary: GridSummary,
}

impl CoverageGrid {
    pub fn cell(&self, i: u32, j: u32) -> &CellPlan {
        &self.cells[j as usize * self.grid.nx as usize + i as usize]
    }
}

/// Search all 6 x 19 (SF, TxPower) pairs for the objective-optimal feasible
/// configuration; `None` when even SF12 at 20 dBm cannot close the link.
///
/// Feasibility: rssi(txp, g_s, g_r, P) >= sensitivity(sf) + link_margin.
pub fn select_config(
    path_loss_db: f64,
    g_s_dbi: f64,
    g_r_dbi: f64,
    config: &SiteConfig,
    objective: Objective,
) -> Result<Option<RadioConfig>> {
    match objective {
        Objective::MinAirtime => {
            for sf in SF_MIN..=SF_MAX {
                let threshold = sensitivity(sf, config.bandwidth_hz, config.noise_figure_db)?
                    + config.link_margin_db;
                for txp in TXPOWER_MIN_DBM..=TXPOWER_MAX_DBM {
                    if rssi(f64::from(txp), g_s_dbi, g_r_dbi, path_loss_db) >= threshold {
                        return Ok(Some(RadioConfig::new(sf, txp, config)?));
                    }
                }
            }
            Ok(None)
        }
        Objective::MinEnergy => {
            let mut best: Option<(f64, RadioConfig)> = None;
            for sf in SF_MIN..=SF_MAX {
                let threshold = sensitivity(sf, config.bandwidth_hz, config.noise_figure_db)?
                    + config.link_margin_db;
                for txp in TXPOWER_MIN_DBM..=TXPOWER_MAX_DBM {
                    if rssi(f64::from(txp), g_s_dbi, g_r_dbi, path_loss_db) < threshold {
                        continue;
                    }
                    let candidate = RadioConfig::new(sf, txp, config)?;
                    let energy = energy_per_tx(time_on_air(&candidate), txp, config)?;
                    // Strict < plus ascending scan order resolves ties toward
                    // lower SF, then lower TxPower.
                    if best.as_ref().is_none_or(|(e, _)| energy < *e) {
                        best = Some((energy, candidate));
                    }
                }
            }
            Ok(best.map(|(_, rc)| rc))
        }
    }
}

/// Gateway with the least total path loss from `from`; ties break toward the
/// lexicographically smallest id. `None` when the site has no gateways.
pub fn best_gateway(
    site: &Site,
    from: Point3,
    mobility_penalty_db: f64,
    cell: Option<(u32, u32)>,
) -> Result<Option<(&Gateway, PathLossBreakdown)>> {
    let mut best: Option<(&Gateway, PathLossBreakdown)> = None;
    for gateway in &site.gateways {
        let breakdown = if from == gateway.position {
            // Degenerate co-located link: no path between the antennas.
            let mut zero = PathLossBreakdown::zero();
            zero.mobility_db = mobility_penalty_db;
            zero.total_db = mobility_penalty_db;
            zero
        } else {
            total_path_loss(from, gateway.position, site, mobility_penalty_db, cell)?
        };
        let better = match &best {
            None => true,
            Some((incumbent, current)) => match breakdown.total_db.total_cmp(&current.total_db) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => gateway.id < incumbent.id,
                std::cmp::Ordering::Greater => false,
            },
        };
        if better {
            best = Some((gateway, breakdown));
        }
    }
    Ok(best)
}

/// Plan a single cell: best gateway, then objective-optimal configuration.
pub fn plan_cell(cell: (u32, u32), site: &Site, objective: Objective) -> Result<CellPlan> {
    let grid = &site.grid;
    if cell.0 >= grid.nx || cell.1 >= grid.ny {
        return Err(Error::Domain(format!(
            "cell ({}, {}) outside the {} x {} grid",
            cell.0, cell.1, grid.nx, grid.ny
        )));
    }
    let from = grid.cell_center(cell.0, cell.1);

    let Some((gateway, breakdown)) = best_gateway(site, from, 0.0, Some(cell))? else {
        return Ok(CellPlan {
            cell,
            best_gateway: None,
            breakdown: PathLossBreakdown::zero(),
            config: None,
            link: None,
            covered: false,
        });
    };

    let g_s = site.node_profile.antenna_gain_dbi;
    let g_r = gateway.antenna_gain_dbi;
    let config = select_config(breakdown.total_db, g_s, g_r, &site.config, objective)?;
    let link = match &config {
        Some(rc) => Some(link_report(
            rssi(f64::from(rc.txpower_dbm), g_s, g_r, breakdown.total_db),
            sensitivity(rc.sf, rc.bandwidth_hz, site.config.noise_figure_db)?,
            site.config.link_margin_db,
        )),
        None => None,
    };
    Ok(CellPlan {
        cell,
        best_gateway: Some(gateway.id.clone()),
        breakdown,
        covered: config.is_some(),
        config,
        link,
    })
}

/// Recompute the summary block from a cell list.
pub fn summarize(cells: &[CellPlan], config: &SiteConfig) -> Result<GridSummary> {
    let cells_total = cells.len();
    let mut cells_covered = 0usize;
    let mut sf_histogram = BTreeMap::new();
    let mut txpower_histogram = BTreeMap::new();
    let mut energy_sum = 0.0;
    for plan in cells {
        let Some(rc) = &plan.config else { continue };
        cells_covered += 1;
        *sf_histogram.entry(rc.sf).or_insert(0) += 1;
        *txpower_histogram.entry(rc.txpower_dbm).or_insert(0) += 1;
        energy_sum += energy_per_tx(time_on_air(rc), rc.txpower_dbm, config)?;
    }
    Ok(GridSummary {
        cells_total,
        cells_covered,
        coverage_fraction: if cells_total == 0 {
            0.0
        } else {
            cells_covered as f64 / cells_total as f64
        },
        sf_histogram,
        txpower_histogram,
        mean_energy_mj: (cells_covered > 0).then(|| energy_sum / cells_covered as f64),
    })
}

/// Plan every cell of a validated site. Deterministic for a fixed site and
/// seed, independent of evaluation order; cells are planned in parallel.
pub fn plan_site(site: &Site, objective: Objective) -> Result<CoverageGrid> {
    let violations = validate_site(site);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let nx = site.grid.nx as usize;
    let cells: Vec<CellPlan> = (0..site.grid.cell_count())
        .into_par_iter()
        .map(|idx| plan_cell(((idx % nx) as u32, (idx / nx) as u32), site, objective))
        .collect::<Result<_>>()?;
    let summary = summarize(&cells, &site.config)?;
    Ok(CoverageGrid {
        grid: site.grid.clone(),
        cells,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{parse_site_str, Material, Obstruction, ObstructionKind};

    fn bare_config() -> SiteConfig {
        SiteConfig {
            link_margin_db: 0.0,
            ..SiteConfig::default()
        }
    }

    #[test]
    fn select_config_anchor_values() {
        let config = bare_config();
        let rc = select_config(125.0, 0.0, 0.0, &config, Objective::MinAirtime)
            .unwrap()
            .unwrap();
        assert_eq!((rc.sf, rc.txpower_dbm), (7, 2));

        let rc = select_config(140.0, 0.0, 0.0, &config, Objective::MinAirtime)
            .unwrap()
            .unwrap();
        assert_eq!((rc.sf, rc.txpower_dbm), (7, 16));

        assert!(
            select_config(180.0, 0.0, 0.0, &config, Objective::MinAirtime)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn objectives_can_disagree_where_current_draw_jumps() {
        // At P = 141 dB, SF7 needs 17 dBm (90 mA) while SF8 closes at 14 dBm
        // (45 mA) and wins on energy despite the longer airtime.
        let config = bare_config();
        let airtime = select_config(141.0, 0.0, 0.0, &config, Objective::MinAirtime)
            .unwrap()
            .unwrap();
        assert_eq!((airtime.sf, airtime.txpower_dbm), (7, 17));
        let energy = select_config(141.0, 0.0, 0.0, &config, Objective::MinEnergy)
            .unwrap()
            .unwrap();
        assert_eq!((energy.sf, energy.txpower_dbm), (8, 14));
    }

    #[test]
    fn chosen_sf_never_decreases_as_loss_grows() {
        let config = SiteConfig::default();
        let mut prev_sf = 0u8;
        let mut loss = 80.0;
        while loss <= 190.0 {
            match select_config(loss, 2.15, 2.15, &config, Objective::MinAirtime).unwrap() {
                Some(rc) => {
                    assert!(rc.sf >= prev_sf, "sf dropped at P = {loss}");
                    prev_sf = rc.sf;
                }
                None => prev_sf = u8::MAX, // once infeasible, stays infeasible
            }
            loss += 0.25;
        }
    }

    fn open_site_10x10() -> Site {
        parse_site_str(
            r#"{
                "grid": { "cell_size_m": 70.0, "nx": 10, "ny": 10 },
                "gateways": [
                    { "id": "gw", "position": { "x": 350.0, "y": 350.0, "z": 12.0 }, "antenna_gain_dbi": 2.15 }
                ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn small_open_site_is_fully_covered_at_sf7() {
        let site = open_site_10x10();
        let grid = plan_site(&site, Objective::MinAirtime).unwrap();
        assert_eq!(grid.summary.cells_total, 100);
        assert_eq!(grid.summary.cells_covered, 100);
        assert_eq!(grid.summary.coverage_fraction, 1.0);
        assert!(grid
            .cells
            .iter()
            .all(|c| c.config.as_ref().map(|rc| rc.sf) == Some(7)));
    }

    #[test]
    fn no_gateways_means_no_coverage() {
        let mut site = open_site_10x10();
        site.gateways.clear();
        let grid = plan_site(&site, Objective::MinAirtime).unwrap();
        assert_eq!(grid.summary.cells_covered, 0);
        assert_eq!(grid.summary.coverage_fraction, 0.0);
        assert!(grid.cells.iter().all(|c| !c.covered
            && c.config.is_none()
            && c.link.is_none()
            && c.best_gateway.is_none()));
    }

    #[test]
    fn equidistant_gateways_tie_break_to_smaller_id() {
        let mut site = open_site_10x10();
        // Mirror-symmetric about the center of cell (4, 4) at (315, 315).
        site.gateways = vec![
            Gateway {
                id: "gw-b".into(),
                position: Point3::new(315.0 - 100.0, 315.0, 10.0),
                antenna_gain_dbi: 2.15,
            },
            Gateway {
                id: "gw-a".into(),
                position: Point3::new(315.0 + 100.0, 315.0, 10.0),
                antenna_gain_dbi: 2.15,
            },
        ];
        let plan = plan_cell((4, 4), &site, Objective::MinAirtime).unwrap();
        assert_eq!(plan.best_gateway.as_deref(), Some("gw-a"));
    }

    #[test]
    fn invalid_site_fails_with_violation_list() {
        let mut site = open_site_10x10();
        site.gateways[0].position.z = 0.0;
        match plan_site(&site, Objective::MinAirtime) {
            Err(Error::Invalid(violations)) => assert_eq!(violations.len(), 1),
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn covered_iff_config_iff_feasible_link() {
        let mut site = open_site_10x10();
        // A massive concrete block makes some cells unreachable.
        site.config.link_margin_db = 3.0;
        site.obstructions.push(Obstruction {
            id: "block".into(),
            kind: ObstructionKind::Building,
            footprint: vec![
                Point3::new(420.0, 0.0, 0.0),
                Point3::new(560.0, 0.0, 0.0),
                Point3::new(560.0, 700.0, 0.0),
                Point3::new(420.0, 700.0, 0.0),
            ],
            height_m: 60.0,
            material: Some(Material::Concrete),
            floor_count: 30,
        });
        let grid = plan_site(&site, Objective::MinAirtime).unwrap();
        for plan in &grid.cells {
            assert_eq!(plan.covered, plan.config.is_some());
            assert_eq!(plan.covered, plan.link.is_some());
            if let Some(link) = &plan.link {
                assert!(link.feasible);
                assert!(link.rssi_dbm >= link.sensitivity_dbm + site.config.link_margin_db - 1e-12);
            }
        }
    }

    #[test]
    fn adding_a_gateway_never_hurts() {
        let mut site = open_site_10x10();
        site.obstructions.push(Obstruction {
            id: "slab".into(),
            kind: ObstructionKind::Building,
            footprint: vec![
                Point3::new(100.0, 0.0, 0.0),
                Point3::new(130.0, 0.0, 0.0),
                Point3::new(130.0, 700.0, 0.0),
                Point3::new(100.0, 700.0, 0.0),
            ],
            height_m: 40.0,
            material: Some(Material::Concrete),
            floor_count: 0,
        });
        let before = plan_site(&site, Objective::MinAirtime).unwrap();
        site.gateways.push(Gateway {
            id: "gw-west".into(),
            position: Point3::new(35.0, 350.0, 15.0),
            antenna_gain_dbi: 2.15,
        });
        let after = plan_site(&site, Objective::MinAirtime).unwrap();
        for (b, a) in before.cells.iter().zip(after.cells.iter()) {
            if b.covered {
                assert!(a.covered, "cell {:?} lost coverage", b.cell);
                let (sf_b, sf_a) = (b.config.as_ref().unwrap().sf, a.config.as_ref().unwrap().sf);
                assert!(sf_a <= sf_b, "cell {:?} SF rose {sf_b} -> {sf_a}", b.cell);
            }
        }
    }

    #[test]
    fn summary_matches_recomputation() {
        let site = open_site_10x10();
        let grid = plan_site(&site, Objective::MinEnergy).unwrap();
        let again = summarize(&grid.cells, &site.config).unwrap();
        assert_eq!(grid.summary, again);
    }
}
