//! Hand-built θ₅ instances: the lower-bound path, the 31-vertex graph that
//! realises it, and the spiral that defeats θ-routing.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analysis::shortest_path;
use crate::error::{Error, Result};
use crate::geometry::{GeomConfig, Point};
use crate::graph::build_theta_graph;
use crate::routing::theta_route;

const TH: f64 = 2.0 * PI / 5.0;

/// `½(11√5 − 17)`.
pub fn lower_bound_ratio() -> f64 {
    0.5 * (11.0 * 5f64.sqrt() - 17.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct Checkpoint {
    pub step: usize,
    pub expected: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundInstance {
    pub points: Vec<Point>,
    pub source: usize,
    pub target: usize,
    pub epsilon: f64,
    /// Absolute tolerance for building the graph, well below `epsilon`.
    pub tolerance: f64,
    pub expected_ratio: f64,
    pub expected_path: Option<Vec<usize>>,
    /// Limit edge lengths along `expected_path`, when known in closed form.
    pub closed_form_lengths: Option<Vec<f64>>,
    pub checkpoints: Vec<Checkpoint>,
}

fn config() -> GeomConfig {
    GeomConfig::new(5, 0.0).expect("k = 5 is valid")
}

/// Moves `corner` by `eps` into the angle spanned towards `o1` and `o2`.
fn inward(corner: Point, o1: Point, o2: Point, eps: f64) -> Point {
    let a = corner.unit_towards(o1);
    let b = corner.unit_towards(o2);
    let bis = Point::new(a.x + b.x, a.y + b.y);
    corner.offset(bis, eps / bis.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Corner {
    /// End of the triangle's counter-clockwise ray.
    Ccw,
    /// End of the clockwise ray.
    Cw,
}

fn corner_of(apex: Point, toward: Point, which: Corner, eps: f64) -> Point {
    let t = config()
        .canonical_triangle(apex, toward)
        .expect("distinct points");
    match which {
        Corner::Ccw => inward(t.corner_a, apex, t.corner_b, eps),
        Corner::Cw => inward(t.corner_b, apex, t.corner_a, eps),
    }
}

fn far_corner(apex: Point, from: Point, eps: f64) -> Point {
    let t = config()
        .canonical_triangle(apex, from)
        .expect("distinct points");
    let (far, other) = t.far_corner_from(from);
    inward(far, apex, other, eps)
}

/// Intersection of the lines `p + s·d1` and `q + t·d2`.
fn line_intersection(p: Point, d1: Point, q: Point, d2: Point) -> Option<(Point, f64, f64)> {
    let den = d1.x * d2.y - d1.y * d2.x;
    if den.abs() < 1e-15 {
        return None;
    }
    let r = q.sub(p);
    let s = (r.x * d2.y - r.y * d2.x) / den;
    let t = (r.x * d1.y - r.y * d1.x) / den;
    Some((p.offset(d1, s), s, t))
}

fn check_eps(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 && epsilon < 0.01 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 0.01), got {epsilon}"
        )))
    }
}

/// The five-edge path whose length over `|uw|` tends to `½(11√5 − 17)`.
/// Ids: u = 0, w = 1, v₁..v₄ = 2..5; the path runs u, v₄, v₃, v₂, v₁, w.
pub fn theorem3_path(epsilon: f64) -> Result<LowerBoundInstance> {
    check_eps(epsilon)?;
    let cfg = config();
    let u = Point::new(0.0, 0.0);
    let w = inward(
        Point::direction(TH / 2.0),
        u,
        Point::direction(-TH / 2.0),
        epsilon,
    );

    let twu = cfg.canonical_triangle(w, u)?;
    let v1 = if twu.corner_a.y < twu.corner_b.y {
        inward(twu.corner_a, w, twu.corner_b, epsilon)
    } else {
        inward(twu.corner_b, w, twu.corner_a, epsilon)
    };
    let v2 = far_corner(v1, u, epsilon);
    let v3 = far_corner(v2, u, epsilon);
    // On the upper ray of C₁ at v₃, placed so that u lies on the lower
    // boundary of C₁ at v₄.
    let (v4, _, _) = line_intersection(
        v3,
        Point::direction(TH / 2.0),
        u,
        Point::direction(TH / 2.0 + TH + PI),
    )
    .expect("rays are not parallel");

    let t = (PI / 5.0).tan();
    let closed = vec![
        (3.0 * PI / 10.0).sin() / (3.0 * PI / 5.0).sin() * t,
        (PI / 10.0).sin() / (3.0 * PI / 5.0).sin() * t,
        2.0 * (PI / 5.0).sin() * t,
        2.0 * (PI / 5.0).sin() * t,
        1.0 / (PI / 5.0).cos(),
    ];
    Ok(LowerBoundInstance {
        points: vec![u, w, v1, v2, v3, v4],
        source: 0,
        target: 1,
        epsilon,
        tolerance: epsilon * TOLERANCE_FRACTION,
        expected_ratio: lower_bound_ratio(),
        expected_path: Some(vec![0, 5, 4, 3, 2, 1]),
        closed_form_lengths: Some(closed),
        checkpoints: Vec::new(),
    })
}

/// One placement of the table: vertex `label` in the `corner` of
/// T(v_apex, v_toward). Labels are 1-based as in the table.
type Placement = (usize, usize, usize, Corner);

enum Step {
    Corners(&'static [Placement]),
    TriangleCrossing,
    BoundaryMeet,
}

const STEPS: [(usize, Step, &[usize]); 16] = {
    use Corner::*;
    [
        (
            3,
            Step::Corners(&[(3, 1, 2, Ccw), (4, 2, 1, Ccw)]),
            &[1, 4, 2],
        ),
        (
            4,
            Step::Corners(&[(5, 1, 4, Cw), (6, 4, 1, Ccw)]),
            &[1, 3, 2],
        ),
        (
            5,
            Step::Corners(&[(7, 2, 3, Cw), (8, 3, 2, Ccw)]),
            &[1, 6, 4, 2],
        ),
        (
            6,
            Step::Corners(&[(9, 1, 6, Cw), (10, 6, 1, Ccw)]),
            &[1, 5, 4, 2],
        ),
        (
            7,
            Step::Corners(&[(11, 4, 5, Ccw), (12, 5, 4, Cw)]),
            &[1, 5, 6, 4, 2],
        ),
        (
            8,
            Step::Corners(&[(13, 5, 6, Ccw), (14, 6, 5, Cw)]),
            &[1, 5, 14, 6, 4, 2],
        ),
        (
            9,
            Step::Corners(&[(15, 5, 14, Ccw), (16, 14, 5, Cw)]),
            &[1, 5, 13, 6, 4, 2],
        ),
        (
            10,
            Step::Corners(&[(17, 6, 13, Cw), (18, 13, 6, Ccw)]),
            &[1, 3, 8, 2],
        ),
        (11, Step::TriangleCrossing, &[1, 3, 7, 2]),
        (
            12,
            Step::Corners(&[(20, 3, 7, Ccw), (21, 7, 3, Cw)]),
            &[1, 5, 12, 2],
        ),
        (13, Step::Corners(&[(22, 2, 12, Ccw)]), &[1, 10, 6, 4, 2]),
        (14, Step::BoundaryMeet, &[1, 5, 12, 4, 2]),
        (
            15,
            Step::Corners(&[(24, 4, 12, Ccw), (25, 12, 4, Cw)]),
            &[1, 5, 13, 14, 6, 4, 2],
        ),
        (
            16,
            Step::Corners(&[(26, 13, 14, Cw), (27, 14, 13, Ccw)]),
            &[1, 9, 18, 6, 4, 2],
        ),
        (
            17,
            Step::Corners(&[(28, 9, 18, Cw), (29, 18, 9, Ccw)]),
            &[1, 5, 16, 11, 4, 2],
        ),
        (
            18,
            Step::Corners(&[(30, 11, 16, Ccw), (31, 16, 11, Cw)]),
            &[1, 23, 10, 6, 4, 2],
        ),
    ]
};

fn sides(apex: Point, toward: Point) -> [(Point, Point); 3] {
    let t = config()
        .canonical_triangle(apex, toward)
        .expect("distinct points");
    [
        (apex, t.corner_a),
        (t.corner_a, t.corner_b),
        (t.corner_b, apex),
    ]
}

/// Near the boundary crossing of T(v₂, v₈) and T(v₈, v₂) furthest from v₁,
/// nudged towards the midpoint of v₂v₈ so it lies in both triangles.
fn triangle_crossing(p: &[Point], eps: f64) -> Point {
    let (v1, v2, v8) = (p[0], p[1], p[7]);
    let mut best: Option<Point> = None;
    for (a, b) in sides(v2, v8) {
        for (c, d) in sides(v8, v2) {
            let Some((x, s, t)) = line_intersection(a, b.sub(a), c, d.sub(c)) else {
                continue;
            };
            let slack = 1e-9;
            if !(-slack..=1.0 + slack).contains(&s) || !(-slack..=1.0 + slack).contains(&t) {
                continue;
            }
            if x.dist(v2) < 1e-9 || x.dist(v8) < 1e-9 {
                continue;
            }
            if best.is_none_or(|bx| x.dist(v1) > bx.dist(v1)) {
                best = Some(x);
            }
        }
    }
    let x = best.expect("the two triangles overlap");
    x.offset(x.unit_towards(v2.midpoint(v8)), eps)
}

/// On the upper ray of C₁ at v₁₀, at the spot where v₁ falls on the lower
/// boundary of C₁, moved off both lines.
fn boundary_meet(p: &[Point], eps: f64) -> Point {
    let (v1, v10) = (p[0], p[9]);
    let (x, _, _) = line_intersection(
        v10,
        Point::direction(TH / 2.0),
        v1,
        Point::direction(TH / 2.0 + TH + PI),
    )
    .expect("rays are not parallel");
    let d1 = Point::direction(126f64.to_radians());
    let d2 = Point::direction(198f64.to_radians());
    let n = Point::new(d1.x + d2.x, d1.y + d2.y);
    x.offset(n, eps / n.norm())
}

fn checkpoint(
    points: &[Point],
    tolerance: f64,
    step: usize,
    expected_labels: &[usize],
) -> Result<()> {
    let cfg = GeomConfig::new(5, tolerance)?;
    let g = build_theta_graph(cfg, points.to_vec())?;
    let found = shortest_path(&g, 0, 1)?.map(|p| p.vertices);
    let expected: Vec<usize> = expected_labels.iter().map(|l| l - 1).collect();
    if found.as_ref() != Some(&expected) {
        return Err(Error::CheckpointMismatch {
            step,
            expected,
            found,
        });
    }
    Ok(())
}

/// The 31-vertex θ₅-graph whose spanning ratio tends to `½(11√5 − 17)`.
/// Vertex v_i gets id i − 1; the worst pair is (v₁, v₂) = (0, 1). Every
/// intermediate shortest v₁–v₂ path is checked as the vertices are placed.
pub fn appendix_instance(epsilon: f64) -> Result<LowerBoundInstance> {
    check_eps(epsilon)?;
    let tolerance = epsilon * TOLERANCE_FRACTION;
    let v1 = Point::new(0.0, 0.0);
    let v2 = inward(
        Point::direction(TH / 2.0),
        v1,
        Point::direction(-TH / 2.0),
        epsilon,
    );
    let mut p = vec![v1, v2];
    let mut checkpoints = vec![Checkpoint {
        step: 2,
        expected: vec![0, 1],
    }];
    checkpoint(&p, tolerance, 2, &[1, 2])?;
    for (step, kind, expected) in STEPS.iter() {
        match kind {
            Step::Corners(list) => {
                for &(label, apex, toward, which) in *list {
                    debug_assert_eq!(label, p.len() + 1);
                    let v = corner_of(p[apex - 1], p[toward - 1], which, epsilon);
                    p.push(v);
                }
            }
            Step::TriangleCrossing => {
                let v = triangle_crossing(&p, epsilon);
                p.push(v);
            }
            Step::BoundaryMeet => {
                let v = boundary_meet(&p, epsilon);
                p.push(v);
            }
        }
        checkpoint(&p, tolerance, *step, expected)?;
        checkpoints.push(Checkpoint {
            step: *step,
            expected: expected.iter().map(|l| l - 1).collect(),
        });
    }
    debug_assert_eq!(p.len(), 31);
    Ok(LowerBoundInstance {
        points: p,
        source: 0,
        target: 1,
        epsilon,
        tolerance: epsilon * TOLERANCE_FRACTION,
        expected_ratio: lower_bound_ratio(),
        expected_path: Some(vec![0, 22, 9, 5, 3, 1]),
        closed_form_lengths: None,
        checkpoints,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryInstance {
    pub points: Vec<Point>,
    pub source: usize,
    pub destination: usize,
    pub cycles: usize,
    pub epsilon: f64,
    /// Absolute tolerance to build the graph with. Later cycles use offsets
    /// far below the default relative tolerance, which would treat them as
    /// ties.
    pub tolerance: f64,
    /// Spiral vertices in routing order, starting with the source.
    pub spiral: Vec<usize>,
    /// `(owner, aux)`: the auxiliary vertex visited right after `owner`.
    pub auxiliary: Vec<(usize, usize)>,
    /// The θ-route from source to destination the construction enforces.
    pub expected_route: Vec<usize>,
}

const AUX_FRACTION: f64 = 0.05;
const TOLERANCE_FRACTION: f64 = 1e-3;

fn expected_route(spiral: &[usize], aux: &[(usize, usize)], destination: usize) -> Vec<usize> {
    let mut r = Vec::with_capacity(spiral.len() + aux.len() + 1);
    for &s in spiral {
        r.push(s);
        if let Some(&(_, x)) = aux.iter().find(|(o, _)| *o == s) {
            r.push(x);
        }
    }
    r.push(destination);
    r
}

/// A spiral around the destination w = 0 starting at u = 1 with |uw| = 1 and
/// uw at angle θ/4 to its bisector. Each spiral vertex sits just inside the
/// corner of T(z, w) furthest from w, where z is its predecessor, so θ-routing
/// walks the whole spiral. From the second cycle on, z_j lands next to z_{j−5};
/// an auxiliary vertex in T(z_{j−5}, z_j) keeps the earlier route intact.
/// Later cycles use offsets halved per cycle so they stay outside the earlier
/// triangles.
pub fn adversary_instance(cycles: usize, epsilon: f64) -> Result<AdversaryInstance> {
    if cycles == 0 {
        return Err(Error::InvalidArgument("cycles must be at least 1".into()));
    }
    check_eps(epsilon)?;
    let w = Point::new(0.0, 0.0);
    let u = Point::new(-(TH / 4.0).sin(), -(TH / 4.0).cos());
    let mut points = vec![w, u];
    let mut spiral = vec![1];
    let mut auxiliary: Vec<(usize, usize)> = Vec::new();
    let mut smallest_offset = epsilon;
    for j in 1..5 * cycles {
        let cycle = j / 5 + 1;
        let e = epsilon * 0.5f64.powi(cycle as i32 - 1);
        let prev = points[*spiral.last().expect("non-empty")];
        points.push(far_corner(prev, w, e));
        spiral.push(points.len() - 1);
        smallest_offset = smallest_offset.min(e);
        if j >= 5 {
            let owner = spiral[j - 5];
            let t = config().canonical_triangle(points[owner], points[points.len() - 1])?;
            let (far, other) = t.far_corner_from(points[points.len() - 1]);
            points.push(inward(far, points[owner], other, AUX_FRACTION * t.size));
            auxiliary.push((owner, points.len() - 1));
            smallest_offset = smallest_offset.min(AUX_FRACTION * t.size);
        }
        if j % 5 == 4 {
            let tolerance = smallest_offset * TOLERANCE_FRACTION;
            validate_adversary(&points, &spiral, &auxiliary, cycle, tolerance)?;
        }
    }
    let expected_route = expected_route(&spiral, &auxiliary, 0);
    Ok(AdversaryInstance {
        points,
        source: 1,
        destination: 0,
        cycles,
        epsilon,
        tolerance: smallest_offset * TOLERANCE_FRACTION,
        spiral,
        auxiliary,
        expected_route,
    })
}

fn validate_adversary(
    points: &[Point],
    spiral: &[usize],
    auxiliary: &[(usize, usize)],
    cycle: usize,
    tolerance: f64,
) -> Result<()> {
    let fail = |reason: String| Error::AdversaryValidation { cycle, reason };
    let cfg = config();
    for pair in auxiliary.windows(2) {
        let (prev, cur) = (pair[0].1, pair[1].1);
        let t = cfg.canonical_triangle(points[prev], points[0])?;
        if t.contains(points[cur], 0.0) {
            return Err(fail(format!("auxiliary vertex {cur} lies in T({prev}, w)")));
        }
    }
    let g = build_theta_graph(GeomConfig::new(5, tolerance)?, points.to_vec())?;
    let expected = expected_route(spiral, auxiliary, 0);
    let out = theta_route(&g, 1, 0, 10 * g.len())?;
    if out.path.vertices != expected {
        let at = out
            .path
            .vertices
            .iter()
            .zip(&expected)
            .position(|(a, b)| a != b)
            .unwrap_or(expected.len().min(out.path.vertices.len()));
        return Err(fail(format!(
            "θ-route leaves the spiral at hop {at}: expected {:?}, got {:?}",
            expected.get(at),
            out.path.vertices.get(at)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inward_moves_into_the_angle() {
        let c = Point::new(0.0, 0.0);
        let p = inward(c, Point::new(1.0, 0.0), Point::new(0.0, 1.0), 2f64.sqrt());
        assert!((p.x - 1.0).abs() < 1e-15 && (p.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn line_intersection_basics() {
        let (x, s, t) = line_intersection(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, -1.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        assert_eq!((x.x, x.y, s, t), (2.0, 0.0, 2.0, 1.0));
        assert!(line_intersection(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(2.0, 0.0)
        )
        .is_none());
    }

    #[test]
    fn lower_bound_path_geometry() {
        let inst = theorem3_path(1e-9).unwrap();
        let cfg = config();
        let p = &inst.points;
        assert_eq!(p[0].dist(p[1]).round(), 1.0);
        assert_eq!(
            cfg.cone_index(p[1], p[2]).unwrap(),
            cfg.cone_index(p[1], p[0]).unwrap()
        );
        assert_eq!(cfg.cone_index(p[4], p[5]).unwrap().0, 1);
    }

    #[test]
    fn realising_graph_has_31_vertices() {
        let inst = appendix_instance(1e-6).unwrap();
        assert_eq!(inst.points.len(), 31);
        assert_eq!(inst.checkpoints.len(), 17);
    }

    #[test]
    fn adversary_sizes() {
        for c in 1..=3 {
            let a = adversary_instance(c, 1e-7).unwrap();
            assert_eq!(a.points.len(), 10 * c - 4);
            assert_eq!(a.spiral.len(), 5 * c);
            assert_eq!(a.auxiliary.len(), 5 * (c - 1));
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(theorem3_path(0.0).is_err());
        assert!(appendix_instance(f64::NAN).is_err());
        assert!(adversary_instance(0, 1e-7).is_err());
    }
}
