//! Planar primitives for cone-based graphs.
//!
//! Angles are measured clockwise from the +y direction. Cone `C_i` of an
//! apex has its bisector at angle `i·θ` (θ = 2π/k) and covers the half-open
//! interval `(i·θ − θ/2, i·θ + θ/2]`. A point lying exactly on the boundary
//! between two cones therefore belongs to the counter-clockwise one, which is
//! what rotating every boundary clockwise by an infinitesimal angle gives.
//! The same tolerance decides when a point counts as "on" a boundary.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when none is given: a fraction of the bounding-box
/// diagonal of the instance.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Unit vector at clockwise angle `phi` from +y.
    pub fn direction(phi: f64) -> Self {
        Point::new(phi.sin(), phi.cos())
    }

    pub fn offset(&self, dir: Point, len: f64) -> Self {
        Point::new(self.x + dir.x * len, self.y + dir.y * len)
    }

    pub fn sub(&self, other: Point) -> Self {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn dot(&self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn midpoint(&self, other: Point) -> Self {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    /// Unit vector from `self` towards `other`.
    pub fn unit_towards(&self, other: Point) -> Self {
        let d = other.sub(*self);
        let n = d.norm();
        Point::new(d.x / n, d.y / n)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Clockwise angle of `target − apex` measured from +y, in `[0, 2π)`.
pub fn clockwise_angle(apex: Point, target: Point) -> f64 {
    let a = (target.x - apex.x).atan2(target.y - apex.y);
    if a < 0.0 {
        let wrapped = a + TAU;
        // -0.0 and tiny negatives can round up to exactly 2π.
        if wrapped >= TAU {
            0.0
        } else {
            wrapped
        }
    } else {
        a
    }
}

/// Signed difference `a − b` reduced to `(−π, π]`.
fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % TAU;
    if d > PI {
        d -= TAU;
    } else if d <= -PI {
        d += TAU;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConeIndex(pub usize);

impl fmt::Display for ConeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

/// Cone count and the single tolerance shared by every boundary predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomConfig {
    k: usize,
    tolerance: f64,
}

impl GeomConfig {
    pub fn new(k: usize, tolerance: f64) -> Result<Self> {
        if k < 4 {
            return Err(Error::InvalidConeCount(k));
        }
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(Error::InvalidTolerance(tolerance));
        }
        Ok(GeomConfig { k, tolerance })
    }

    /// Config whose tolerance is [`DEFAULT_RELATIVE_TOLERANCE`] times the
    /// bounding-box diagonal of `points`.
    pub fn for_points(k: usize, points: &[Point]) -> Result<Self> {
        Self::new(k, DEFAULT_RELATIVE_TOLERANCE * bounding_diagonal(points))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Cone aperture 2π/k.
    pub fn theta(&self) -> f64 {
        TAU / self.k as f64
    }

    pub fn half_angle(&self) -> f64 {
        PI / self.k as f64
    }

    pub fn bisector(&self, cone: ConeIndex) -> Point {
        Point::direction(cone.0 as f64 * self.theta())
    }

    fn check_distinct(&self, apex: Point, target: Point) -> Result<f64> {
        let d = apex.dist(target);
        if d <= self.tolerance || d == 0.0 {
            return Err(Error::Degenerate { a: apex, b: target });
        }
        Ok(d)
    }

    pub fn cone_index(&self, apex: Point, target: Point) -> Result<ConeIndex> {
        let d = self.check_distinct(apex, target)?;
        let theta = self.theta();
        let phi = clockwise_angle(apex, target);
        // Boundary j sits at j·θ + θ/2, between cones j and j+1.
        let t = (phi - theta / 2.0) / theta;
        let nearest = t.round();
        let boundary = nearest * theta + theta / 2.0;
        let i = if (phi - boundary).abs() * d <= self.tolerance {
            nearest as i64
        } else {
            t.ceil() as i64
        };
        Ok(ConeIndex(i.rem_euclid(self.k as i64) as usize))
    }

    /// Whether `target` lies within tolerance of a boundary of its cone.
    pub fn near_cone_boundary(&self, apex: Point, target: Point) -> Result<bool> {
        let d = self.check_distinct(apex, target)?;
        let alpha = self.bisector_angle_alpha(apex, target)?;
        Ok((self.half_angle() - alpha) * d <= self.tolerance)
    }

    pub fn projection_distance(&self, apex: Point, target: Point) -> Result<f64> {
        let cone = self.cone_index(apex, target)?;
        Ok(target.sub(apex).dot(self.bisector(cone)))
    }

    pub fn canonical_triangle(&self, apex: Point, target: Point) -> Result<CanonicalTriangle> {
        let cone = self.cone_index(apex, target)?;
        let bisector = self.bisector(cone);
        let height = target.sub(apex).dot(bisector);
        let size = height / self.half_angle().cos();
        let centre = cone.0 as f64 * self.theta();
        Ok(CanonicalTriangle {
            apex,
            target,
            cone,
            size,
            corner_a: apex.offset(Point::direction(centre - self.half_angle()), size),
            corner_b: apex.offset(Point::direction(centre + self.half_angle()), size),
            midpoint_m: apex.offset(bisector, height),
        })
    }

    pub fn triangle_size(&self, apex: Point, target: Point) -> Result<f64> {
        Ok(self.projection_distance(apex, target)? / self.half_angle().cos())
    }

    /// Unsigned angle between `apex → target` and the bisector of the cone
    /// containing `target`; in `[0, π/k]`.
    pub fn bisector_angle_alpha(&self, apex: Point, target: Point) -> Result<f64> {
        let cone = self.cone_index(apex, target)?;
        let phi = clockwise_angle(apex, target);
        let alpha = angle_diff(phi, cone.0 as f64 * self.theta()).abs();
        Ok(alpha.min(self.half_angle()))
    }

    /// Angle-preserving map taking `w` into the closed right half of `C_0^u`.
    pub fn to_canonical_frame(&self, u: Point, w: Point) -> Result<CanonicalFrame> {
        let cone = self.cone_index(u, w)?;
        let rotation_steps = cone.0;
        let phi = clockwise_angle(u, w);
        let local = angle_diff(phi, rotation_steps as f64 * self.theta());
        let d = u.dist(w);
        let reflect = local < 0.0 && -local * d > self.tolerance;
        Ok(CanonicalFrame {
            origin: u,
            k: self.k,
            rotation_steps,
            reflect,
        })
    }
}

/// Bounding-box diagonal; 1.0 for fewer than two distinct points.
pub fn bounding_diagonal(points: &[Point]) -> f64 {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    let diag = max.sub(min).norm();
    if diag.is_finite() && diag > 0.0 {
        diag
    } else {
        1.0
    }
}

/// The triangle bounded by the cone of `apex` containing `target` and the
/// line through `target` perpendicular to that cone's bisector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalTriangle {
    pub apex: Point,
    pub target: Point,
    pub cone: ConeIndex,
    /// Length of either side incident to the apex.
    pub size: f64,
    /// Corner on the counter-clockwise ray.
    pub corner_a: Point,
    /// Corner on the clockwise ray.
    pub corner_b: Point,
    /// Foot of the bisector on the far side.
    pub midpoint_m: Point,
}

impl CanonicalTriangle {
    /// Closed containment test with an absolute slack `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let edges = [
            (self.apex, self.corner_b),
            (self.corner_b, self.corner_a),
            (self.corner_a, self.apex),
        ];
        // apex -> b -> a runs counter-clockwise, so the interior is on the left.
        edges.iter().all(|&(s, e)| {
            let d = e.sub(s);
            let cross = d.x * (p.y - s.y) - d.y * (p.x - s.x);
            cross / d.norm() >= -tol
        })
    }

    /// Corner point of the far side that is further from `from`.
    pub fn far_corner_from(&self, from: Point) -> (Point, Point) {
        if self.corner_a.dist(from) >= self.corner_b.dist(from) {
            (self.corner_a, self.corner_b)
        } else {
            (self.corner_b, self.corner_a)
        }
    }
}

/// Rotation about `origin` by a multiple of θ, optionally followed by a
/// reflection across the vertical line through `origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    pub origin: Point,
    pub k: usize,
    pub rotation_steps: usize,
    pub reflect: bool,
}

impl CanonicalFrame {
    fn rotation(&self) -> f64 {
        self.rotation_steps as f64 * TAU / self.k as f64
    }

    /// Maps a world point into the frame.
    pub fn apply(&self, p: Point) -> Point {
        let d = p.sub(self.origin);
        // Counter-clockwise rotation lowers clockwise angles by `rotation`.
        let (s, c) = self.rotation().sin_cos();
        let mut q = Point::new(d.x * c - d.y * s, d.x * s + d.y * c);
        if self.reflect {
            q.x = -q.x;
        }
        Point::new(q.x + self.origin.x, q.y + self.origin.y)
    }

    pub fn invert(&self, p: Point) -> Point {
        let mut d = p.sub(self.origin);
        if self.reflect {
            d.x = -d.x;
        }
        let (s, c) = self.rotation().sin_cos();
        Point::new(
            d.x * c + d.y * s + self.origin.x,
            -d.x * s + d.y * c + self.origin.y,
        )
    }

    /// World cone label seen as a label in the frame.
    pub fn to_canonical(&self, cone: ConeIndex) -> ConeIndex {
        let k = self.k as i64;
        let shifted = cone.0 as i64 - self.rotation_steps as i64;
        let label = if self.reflect { -shifted } else { shifted };
        ConeIndex(label.rem_euclid(k) as usize)
    }

    /// Frame label mapped back to world cones.
    pub fn to_world(&self, cone: ConeIndex) -> ConeIndex {
        let k = self.k as i64;
        let c = if self.reflect {
            -(cone.0 as i64)
        } else {
            cone.0 as i64
        };
        ConeIndex((c + self.rotation_steps as i64).rem_euclid(k) as usize)
    }
}
