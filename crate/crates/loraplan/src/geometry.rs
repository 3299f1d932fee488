//! 2D segment/polygon primitives used by the ray-geometry queries.
//!
//! Coordinates are local meters; polygons are simple and counterclockwise
//! (enforced by site validation, assumed here).

use serde::{Deserialize, Serialize};

/// A position in site coordinates: meters east, meters north, meters above
/// the local ground reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    /// Height above ground. Optional in site files (footprint vertices ignore
    /// it); defaults to 0.
    #[serde(default)]
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn xy(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Horizontal (2D) distance to another point.
    pub fn distance_2d(&self, other: &Point3) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    /// Full 3D distance to another point.
    pub fn distance_3d(&self, other: &Point3) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2))
            .sqrt()
    }
}

const COLLINEAR_EPS: f64 = 1e-12;
/// Tolerance on segment parameters; intersections this close to a segment end
/// still count, so rays grazing a shared polygon vertex hit both edges and are
/// deduplicated downstream.
const PARAM_EPS: f64 = 1e-9;

/// Intersection of segment `a0->a1` with segment `b0->b1`.
///
/// Returns the parameter `t` along the first segment (0 at `a0`, 1 at `a1`)
/// when the segments properly intersect; `None` for disjoint or (near-)parallel
/// segments.
pub fn segment_intersection_param(
    a0: (f64, f64),
    a1: (f64, f64),
    b0: (f64, f64),
    b1: (f64, f64),
) -> Option<f64> {
    let d1x = a1.0 - a0.0;
    let d1y = a1.1 - a0.1;
    let d2x = b1.0 - b0.0;
    let d2y = b1.1 - b0.1;

    let denom = d1x * d2y - d1y * d2x;
    // Scale-aware parallel test: compare against the segment extents.
    let scale = (d1x.abs() + d1y.abs()) * (d2x.abs() + d2y.abs());
    if denom.abs() <= COLLINEAR_EPS * scale.max(1e-300) {
        return None;
    }

    let ex = b0.0 - a0.0;
    let ey = b0.1 - a0.1;
    let t = (ex * d2y - ey * d2x) / denom;
    let s = (ex * d1y - ey * d1x) / denom;

    if (-PARAM_EPS..=1.0 + PARAM_EPS).contains(&t) && (-PARAM_EPS..=1.0 + PARAM_EPS).contains(&s) {
        Some(t.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Even-odd point-in-polygon test on the xy footprint.
pub fn point_in_polygon(p: (f64, f64), poly: &[Point3]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = poly[i].xy();
        let (xj, yj) = poly[j].xy();
        if ((yi > p.1) != (yj > p.1)) && p.0 < (xj - xi) * (p.1 - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Signed shoelace area; positive for counterclockwise footprints.
pub fn polygon_signed_area(poly: &[Point3]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = poly[i].xy();
        let (x1, y1) = poly[(i + 1) % n].xy();
        acc += x0 * y1 - x1 * y0;
    }
    acc / 2.0
}

/// True when no two non-adjacent edges intersect. O(n^2); footprints are small.
pub fn polygon_is_simple(poly: &[Point3]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a0 = poly[i].xy();
        let a1 = poly[(i + 1) % n].xy();
        for j in (i + 1)..n {
            // Skip edges sharing a vertex (adjacent, or first/last pair).
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let b0 = poly[j].xy();
            let b1 = poly[(j + 1) % n].xy();
            if segment_intersection_param(a0, a1, b0, b1).is_some() {
                return false;
            }
        }
    }
    true
}

/// Axis-aligned bounding box of a footprint: (min_x, min_y, max_x, max_y).
pub fn polygon_bbox(poly: &[Point3]) -> (f64, f64, f64, f64) {
    let mut bb = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for p in poly {
        bb.0 = bb.0.min(p.x);
        bb.1 = bb.1.min(p.y);
        bb.2 = bb.2.max(p.x);
        bb.3 = bb.3.max(p.y);
    }
    bb
}

/// Cheap reject: does segment `a->b` possibly touch the bbox?
pub fn segment_meets_bbox(a: (f64, f64), b: (f64, f64), bb: (f64, f64, f64, f64)) -> bool {
    let (min_x, min_y, max_x, max_y) = bb;
    if a.0.max(b.0) < min_x || a.0.min(b.0) > max_x {
        return false;
    }
    if a.1.max(b.1) < min_y || a.1.min(b.1) > max_y {
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(cx: f64, cy: f64, half: f64) -> Vec<Point3> {
        vec![
            Point3::new(cx - half, cy - half, 0.0),
            Point3::new(cx + half, cy - half, 0.0),
            Point3::new(cx + half, cy + half, 0.0),
            Point3::new(cx - half, cy + half, 0.0),
        ]
    }

    #[test]
    fn crossing_segments_intersect_at_midpoint() {
        let t = segment_intersection_param((0.0, 0.0), (2.0, 0.0), (1.0, -1.0), (1.0, 1.0));
        assert!((t.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parallel_segments_do_not_intersect() {
        assert!(
            segment_intersection_param((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)).is_none()
        );
    }

    #[test]
    fn disjoint_segments_do_not_intersect() {
        assert!(
            segment_intersection_param((0.0, 0.0), (1.0, 0.0), (2.0, -1.0), (2.0, 1.0)).is_none()
        );
    }

    #[test]
    fn endpoint_touch_counts_as_intersection() {
        let t = segment_intersection_param((0.0, 0.0), (1.0, 0.0), (1.0, -1.0), (1.0, 1.0));
        assert_eq!(t, Some(1.0));
    }

    #[test]
    fn point_in_polygon_basic() {
        let sq = square(0.0, 0.0, 1.0);
        assert!(point_in_polygon((0.0, 0.0), &sq));
        assert!(point_in_polygon((0.9, -0.9), &sq));
        assert!(!point_in_polygon((1.5, 0.0), &sq));
        assert!(!point_in_polygon((0.0, -2.0), &sq));
    }

    #[test]
    fn shoelace_area_and_orientation() {
        let sq = square(0.0, 0.0, 1.0);
        assert!((polygon_signed_area(&sq) - 4.0).abs() < 1e-12);
        let mut cw = sq.clone();
        cw.reverse();
        assert!((polygon_signed_area(&cw) + 4.0).abs() < 1e-12);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ];
        assert!(!polygon_is_simple(&bowtie));
        assert!(polygon_is_simple(&square(0.0, 0.0, 1.0)));
    }

    #[test]
    fn bbox_reject_is_conservative() {
        let sq = square(5.0, 5.0, 1.0);
        let bb = polygon_bbox(&sq);
        assert!(segment_meets_bbox((0.0, 5.0), (10.0, 5.0), bb));
        assert!(!segment_meets_bbox((0.0, 0.0), (10.0, 0.0), bb));
    }
}
