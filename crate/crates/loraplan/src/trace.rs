//! Walks the 2D path between two stations and reports every obstruction
//! event the propagation model charges for: wall and floor penetrations,
//! vegetation depth, and first-Fresnel-zone intrusions by tops the ray
//! clears.
//!
//! The ray height between the endpoints is linear interpolation (flat earth);
//! `along_m` values are measured along the 2D ground track from the sender.

use crate::error::{Error, Result};
use crate::geometry::{
    point_in_polygon, polygon_bbox, segment_intersection_param, segment_meets_bbox, Point3,
};
use crate::propagation::SPEED_OF_LIGHT;
use crate::site::{Material, Obstruction, ObstructionKind, Site};

/// What the ray hit (or grazed), and how badly.
#[derive(Debug, Clone, PartialEq)]
pub enum CrossingKind {
    /// The ray pierces a building wall of this material.
    Wall { material: Material },
    /// The ray passes through an interior floor plane.
    Floor,
    /// Total in-canopy chord length, meters.
    Vegetation { depth_m: f64 },
    /// An obstruction top inside the first Fresnel zone that does not block
    /// the ray; `v` is the Fresnel-Kirchhoff diffraction parameter (negative
    /// while the top stays below the ray).
    KnifeEdge { v: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub kind: CrossingKind,
    /// Distance from the sender along the 2D ground track, meters.
    pub along_m: f64,
}

impl Crossing {
    fn kind_rank(&self) -> u8 {
        match self.kind {
            CrossingKind::Wall { .. } => 0,
            CrossingKind::Floor => 1,
            CrossingKind::Vegetation { .. } => 2,
            CrossingKind::KnifeEdge { .. } => 3,
        }
    }
}

/// Crossings closer together than this along the ray collapse into one; a ray
/// grazing a shared polygon vertex therefore counts a single crossing.
const T_EPS: f64 = 1e-9;

/// Knife edges are only reported while first-Fresnel clearance is below 60%
/// of the zone radius, i.e. v > -0.6 * sqrt(2).
const KNIFE_EDGE_V_FLOOR: f64 = -0.848_528_137_423_857;

/// All crossings on the straight path `a -> b`, ordered by `along_m`.
///
/// Deterministic: equal inputs give identical output, and reversing the
/// direction yields the same multiset of crossing kinds.
pub fn trace_crossings(a: Point3, b: Point3, site: &Site) -> Result<Vec<Crossing>> {
    if a == b {
        return Err(Error::Domain(
            "trace_crossings requires distinct endpoints".into(),
        ));
    }

    let a2 = a.xy();
    let b2 = b.xy();
    let len_2d = a.distance_2d(&b);
    let wavelength = SPEED_OF_LIGHT / site.config.frequency_hz;

    let mut out = Vec::new();
    for obstruction in &site.obstructions {
        if obstruction.footprint.len() < 3 {
            continue; // validation reports these; geometry cannot use them
        }
        if len_2d <= T_EPS {
            trace_vertical(a, b, obstruction, &mut out);
            continue;
        }
        if !segment_meets_bbox(a2, b2, polygon_bbox(&obstruction.footprint)) {
            continue;
        }

        let edge_ts = edge_intersections(a2, b2, &obstruction.footprint);
        let chord = inside_intervals(a2, b2, &edge_ts, &obstruction.footprint);
        let z_at = |t: f64| a.z + t * (b.z - a.z);

        match obstruction.kind {
            ObstructionKind::Building => {
                let material = obstruction.material.ok_or_else(|| {
                    Error::Config(format!("building \"{}\" has no material", obstruction.id))
                })?;
                let mut pierced = false;
                for &t in &edge_ts {
                    if z_at(t) < obstruction.height_m {
                        pierced = true;
                        out.push(Crossing {
                            kind: CrossingKind::Wall { material },
                            along_m: t * len_2d,
                        });
                    }
                }
                // Blocked also covers a ray dipping under the roof between
                // walls (e.g. entering above the roof line and exiting below).
                let blocked = pierced
                    || chord.iter().any(|&(t0, t1)| {
                        z_at(t0) < obstruction.height_m || z_at(t1) < obstruction.height_m
                    });
                if blocked {
                    emit_floor_crossings(a.z, b.z, obstruction, &chord, len_2d, &mut out);
                } else if let Some((v, t)) = max_fresnel_intrusion(
                    a.z,
                    b.z,
                    obstruction.height_m,
                    &chord,
                    len_2d,
                    wavelength,
                ) {
                    if v > KNIFE_EDGE_V_FLOOR {
                        out.push(Crossing {
                            kind: CrossingKind::KnifeEdge { v },
                            along_m: t * len_2d,
                        });
                    }
                }
            }
            ObstructionKind::Vegetation => {
                let mut depth_t = 0.0;
                let mut entry_t: Option<f64> = None;
                for &(t0, t1) in &chord {
                    let (lo, hi) = below_height_subinterval(a.z, b.z, obstruction.height_m, t0, t1);
                    if hi > lo {
                        depth_t += hi - lo;
                        entry_t.get_or_insert(lo);
                    }
                }
                if depth_t > 0.0 {
                    out.push(Crossing {
                        kind: CrossingKind::Vegetation {
                            depth_m: depth_t * len_2d,
                        },
                        along_m: entry_t.unwrap_or(0.0) * len_2d,
                    });
                } else if let Some((v, t)) = max_fresnel_intrusion(
                    a.z,
                    b.z,
                    obstruction.height_m,
                    &chord,
                    len_2d,
                    wavelength,
                ) {
                    if v > KNIFE_EDGE_V_FLOOR {
                        out.push(Crossing {
                            kind: CrossingKind::KnifeEdge { v },
                            along_m: t * len_2d,
                        });
                    }
                }
            }
        }
    }

    out.sort_by(|p, q| {
        p.along_m
            .total_cmp(&q.along_m)
            .then(p.kind_rank().cmp(&q.kind_rank()))
    });
    Ok(out)
}

/// A link with no horizontal extent only threads floor planes of the building
/// it stands in.
fn trace_vertical(a: Point3, b: Point3, obstruction: &Obstruction, out: &mut Vec<Crossing>) {
    if obstruction.kind != ObstructionKind::Building {
        return;
    }
    if !point_in_polygon(a.xy(), &obstruction.footprint) {
        return;
    }
    let (z_lo, z_hi) = (a.z.min(b.z), a.z.max(b.z));
    for k in 1..=obstruction.floor_count {
        let zk = obstruction.floor_height(k);
        if zk > z_lo && zk < z_hi {
            out.push(Crossing {
                kind: CrossingKind::Floor,
                along_m: 0.0,
            });
        }
    }
}

/// Intersection parameters of the ray with the polygon edges, sorted and
/// deduplicated so a vertex graze counts once.
fn edge_intersections(a2: (f64, f64), b2: (f64, f64), footprint: &[Point3]) -> Vec<f64> {
    let n = footprint.len();
    let mut ts = Vec::new();
    for i in 0..n {
        let e0 = footprint[i].xy();
        let e1 = footprint[(i + 1) % n].xy();
        if let Some(t) = segment_intersection_param(a2, b2, e0, e1) {
            ts.push(t);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|cur, prev| (*cur - *prev).abs() <= T_EPS);
    ts
}

/// Sub-ranges of [0, 1] where the ray's ground track lies inside the
/// footprint, classified by midpoint containment.
fn inside_intervals(
    a2: (f64, f64),
    b2: (f64, f64),
    edge_ts: &[f64],
    footprint: &[Point3],
) -> Vec<(f64, f64)> {
    let mut bounds = Vec::with_capacity(edge_ts.len() + 2);
    bounds.push(0.0);
    bounds.extend(edge_ts.iter().copied());
    bounds.push(1.0);
    bounds.sort_by(f64::total_cmp);
    bounds.dedup_by(|cur, prev| (*cur - *prev).abs() <= T_EPS);

    let point_at = |t: f64| (a2.0 + t * (b2.0 - a2.0), a2.1 + t * (b2.1 - a2.1));
    bounds
        .windows(2)
        .filter_map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            point_in_polygon(point_at(mid), footprint).then_some((w[0], w[1]))
        })
        .collect()
}

/// Portion of [t0, t1] where the linear ray height stays below `height`.
fn below_height_subinterval(za: f64, zb: f64, height: f64, t0: f64, t1: f64) -> (f64, f64) {
    let dz = zb - za;
    if dz == 0.0 {
        return if za < height { (t0, t1) } else { (t0, t0) };
    }
    let t_cross = (height - za) / dz;
    if dz > 0.0 {
        (t0, t1.min(t_cross).max(t0))
    } else {
        (t0.max(t_cross).min(t1), t1)
    }
}

fn emit_floor_crossings(
    za: f64,
    zb: f64,
    obstruction: &Obstruction,
    chord: &[(f64, f64)],
    len_2d: f64,
    out: &mut Vec<Crossing>,
) {
    let dz = zb - za;
    if obstruction.floor_count == 0 || dz == 0.0 {
        return;
    }
    let mut ts = Vec::new();
    for &(t0, t1) in chord {
        for k in 1..=obstruction.floor_count {
            let tk = (obstruction.floor_height(k) - za) / dz;
            if tk >= t0 && tk <= t1 {
                ts.push(tk);
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|cur, prev| (*cur - *prev).abs() <= T_EPS);
    for tk in ts {
        out.push(Crossing {
            kind: CrossingKind::Floor,
            along_m: tk * len_2d,
        });
    }
}

/// Largest Fresnel-Kirchhoff parameter v of the obstruction top over the
/// chord, with the parameter location.
///
/// v(t) = h(t) * sqrt(2 (d1+d2) / (lambda d1 d2)) where h = top - ray height,
/// d1 = t * L, d2 = (1-t) * L. h is linear in t, so the only interior
/// stationary point is t* = c0 / (2 c0 + c1) for h(t) = c0 + c1 t; the
/// maximum over a closed chord is at t*, a chord end, or (when h is
/// identically zero) anywhere.
fn max_fresnel_intrusion(
    za: f64,
    zb: f64,
    top: f64,
    chord: &[(f64, f64)],
    len_2d: f64,
    wavelength: f64,
) -> Option<(f64, f64)> {
    let c0 = top - za;
    let c1 = za - zb;
    let v_at = |t: f64| -> Option<f64> {
        if t <= 0.0 || t >= 1.0 {
            return None; // zone radius vanishes at the endpoints
        }
        let d1 = t * len_2d;
        let d2 = (1.0 - t) * len_2d;
        let h = c0 + c1 * t;
        Some(h * (2.0 * (d1 + d2) / (wavelength * d1 * d2)).sqrt())
    };

    let mut best: Option<(f64, f64)> = None;
    for &(t0, t1) in chord {
        let mut candidates = [t0, t1, 0.5 * (t0 + t1), f64::NAN];
        let denom = 2.0 * c0 + c1;
        if denom != 0.0 {
            let t_star = c0 / denom;
            if t_star > t0 && t_star < t1 {
                candidates[3] = t_star;
            }
        }
        for t in candidates {
            if t.is_nan() {
                continue;
            }
            if let Some(v) = v_at(t) {
                if best.is_none_or(|(bv, _)| v > bv) {
                    best = Some((v, t));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{parse_site_str, GridSpec, NodeProfile, SiteConfig};

    fn empty_site() -> Site {
        Site {
            grid: GridSpec {
                cell_size_m: 100.0,
                nx: 10,
                ny: 10,
                node_height_m: 1.5,
            },
            config: SiteConfig::default(),
            node_profile: NodeProfile::default(),
            gateways: vec![],
            obstructions: vec![],
            regions: vec![],
        }
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point3> {
        vec![
            Point3::new(x0, y0, 0.0),
            Point3::new(x1, y0, 0.0),
            Point3::new(x1, y1, 0.0),
            Point3::new(x0, y1, 0.0),
        ]
    }

    fn building(
        id: &str,
        footprint: Vec<Point3>,
        height: f64,
        material: Material,
        floors: u32,
    ) -> Obstruction {
        Obstruction {
            id: id.into(),
            kind: ObstructionKind::Building,
            footprint,
            height_m: height,
            material: Some(material),
            floor_count: floors,
        }
    }

    #[test]
    fn identical_endpoints_are_a_domain_error() {
        let site = empty_site();
        let p = Point3::new(1.0, 2.0, 3.0);
        assert!(matches!(
            trace_crossings(p, p, &site),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn high_ray_over_short_link_reports_nothing() {
        let mut site = empty_site();
        site.obstructions.push(building(
            "shed",
            rect(40.0, -5.0, 60.0, 5.0),
            10.0,
            Material::Brick,
            0,
        ));
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 30.0),
            Point3::new(100.0, 0.0, 30.0),
            &site,
        )
        .unwrap();
        assert!(crossings.is_empty(), "got {crossings:?}");
    }

    #[test]
    fn low_ray_through_building_gives_two_concrete_walls() {
        let mut site = empty_site();
        site.obstructions.push(building(
            "hall",
            rect(40.0, -5.0, 60.0, 5.0),
            10.0,
            Material::Concrete,
            0,
        ));
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 1.5),
            Point3::new(100.0, 0.0, 1.5),
            &site,
        )
        .unwrap();
        assert_eq!(crossings.len(), 2);
        for c in &crossings {
            assert_eq!(
                c.kind,
                CrossingKind::Wall {
                    material: Material::Concrete
                }
            );
        }
        assert!(crossings[0].along_m < crossings[1].along_m);
        assert!((crossings[0].along_m - 40.0).abs() < 1e-6);
        assert!((crossings[1].along_m - 60.0).abs() < 1e-6);
    }

    #[test]
    fn top_exactly_at_ray_height_is_a_zero_v_knife_edge() {
        let mut site = empty_site();
        site.config.frequency_hz = 868e6;
        site.obstructions.push(building(
            "ridge",
            rect(480.0, -10.0, 520.0, 10.0),
            10.0,
            Material::Brick,
            0,
        ));
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 10.0),
            Point3::new(1000.0, 0.0, 10.0),
            &site,
        )
        .unwrap();
        assert_eq!(crossings.len(), 1);
        match crossings[0].kind {
            CrossingKind::KnifeEdge { v } => assert!(v.abs() < 1e-12, "v = {v}"),
            ref other => panic!("expected knife edge, got {other:?}"),
        }
    }

    #[test]
    fn grazing_top_on_long_link_emits_knife_edge_with_negative_v() {
        let mut site = empty_site();
        site.config.frequency_hz = 868e6;
        // Ray at constant 12 m clears a 10 m roof by 2 m at the middle of a
        // 5 km link; the first Fresnel zone radius there is ~20.8 m.
        site.obstructions.push(building(
            "roof",
            rect(2400.0, -50.0, 2600.0, 50.0),
            10.0,
            Material::Brick,
            0,
        ));
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 12.0),
            Point3::new(5000.0, 0.0, 12.0),
            &site,
        )
        .unwrap();
        assert_eq!(crossings.len(), 1);
        match crossings[0].kind {
            CrossingKind::KnifeEdge { v } => {
                assert!(v < 0.0 && v > KNIFE_EDGE_V_FLOOR, "v = {v}");
            }
            ref other => panic!("expected knife edge, got {other:?}"),
        }
    }

    #[test]
    fn ascending_ray_counts_walls_and_the_floor_it_threads() {
        let mut site = empty_site();
        site.obstructions.push(building(
            "lab",
            rect(10.0, -5.0, 20.0, 5.0),
            9.0,
            Material::Brick,
            2,
        ));
        // z rises 1 -> 10 over x 0 -> 30; inside the footprint z spans [4, 7],
        // so of the floor planes at 3 and 6 only the one at 6 is threaded.
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(30.0, 0.0, 10.0),
            &site,
        )
        .unwrap();
        let walls = crossings
            .iter()
            .filter(|c| matches!(c.kind, CrossingKind::Wall { .. }))
            .count();
        let floors: Vec<&Crossing> = crossings
            .iter()
            .filter(|c| c.kind == CrossingKind::Floor)
            .collect();
        assert_eq!(walls, 2);
        assert_eq!(floors.len(), 1);
        // z = 6 at t = 5/9 of a 30 m track.
        assert!((floors[0].along_m - 30.0 * 5.0 / 9.0).abs() < 1e-6);
    }

    #[test]
    fn vegetation_reports_the_submerged_chord_length() {
        let mut site = empty_site();
        site.obstructions.push(Obstruction {
            id: "grove".into(),
            kind: ObstructionKind::Vegetation,
            footprint: rect(30.0, -20.0, 80.0, 20.0),
            height_m: 12.0,
            material: None,
            floor_count: 0,
        });
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 2.0),
            Point3::new(100.0, 0.0, 2.0),
            &site,
        )
        .unwrap();
        assert_eq!(crossings.len(), 1);
        match crossings[0].kind {
            CrossingKind::Vegetation { depth_m } => {
                assert!((depth_m - 50.0).abs() < 1e-6, "depth = {depth_m}")
            }
            ref other => panic!("expected vegetation, got {other:?}"),
        }
        assert!((crossings[0].along_m - 30.0).abs() < 1e-6);
    }

    #[test]
    fn vegetation_partially_cleared_counts_only_the_low_part() {
        let mut site = empty_site();
        site.obstructions.push(Obstruction {
            id: "grove".into(),
            kind: ObstructionKind::Vegetation,
            footprint: rect(0.0, -20.0, 100.0, 20.0),
            height_m: 10.0,
            material: None,
            floor_count: 0,
        });
        // z rises 0 -> 20 across the canopy; below 10 m for the first half.
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 1e-9),
            Point3::new(100.0, 0.0, 20.0),
            &site,
        )
        .unwrap();
        assert_eq!(crossings.len(), 1);
        match crossings[0].kind {
            CrossingKind::Vegetation { depth_m } => {
                assert!((depth_m - 50.0).abs() < 1e-3, "depth = {depth_m}")
            }
            ref other => panic!("expected vegetation, got {other:?}"),
        }
    }

    #[test]
    fn vertical_link_threads_floors_only() {
        let mut site = empty_site();
        site.obstructions.push(building(
            "tower",
            rect(-10.0, -10.0, 10.0, 10.0),
            30.0,
            Material::Concrete,
            5,
        ));
        // Floors at 5, 10, 15, 20, 25; the climb from 2 to 17 threads 3.
        let crossings = trace_crossings(
            Point3::new(0.0, 0.0, 2.0),
            Point3::new(0.0, 0.0, 17.0),
            &site,
        )
        .unwrap();
        assert_eq!(crossings.len(), 3);
        assert!(crossings.iter().all(|c| c.kind == CrossingKind::Floor));
    }

    #[test]
    fn reciprocity_preserves_the_multiset_of_kinds() {
        let text = r#"{
            "grid": { "cell_size_m": 100.0, "nx": 20, "ny": 20 },
            "config": { "frequency_hz": 868e6 },
            "gateways": [],
            "obstructions": [
                { "id": "b1", "kind": "building", "height_m": 12.0, "material": "concrete",
                  "floor_count": 3,
                  "footprint": [ {"x": 300, "y": 200}, {"x": 420, "y": 230}, {"x": 400, "y": 330}, {"x": 290, "y": 300} ] },
                { "id": "v1", "kind": "vegetation", "height_m": 9.0,
                  "footprint": [ {"x": 600, "y": 100}, {"x": 780, "y": 140}, {"x": 700, "y": 320} ] }
            ]
        }"#;
        let site = parse_site_str(text).unwrap();
        let a = Point3::new(50.0, 120.0, 18.0);
        let b = Point3::new(1100.0, 400.0, 1.5);
        let fwd = trace_crossings(a, b, &site).unwrap();
        let rev = trace_crossings(b, a, &site).unwrap();
        assert_eq!(fwd.len(), rev.len());
        let mut fwd_ranks: Vec<u8> = fwd.iter().map(Crossing::kind_rank).collect();
        let mut rev_ranks: Vec<u8> = rev.iter().map(Crossing::kind_rank).collect();
        fwd_ranks.sort_unstable();
        rev_ranks.sort_unstable();
        assert_eq!(fwd_ranks, rev_ranks);
    }
}
