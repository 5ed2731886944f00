//! Constructive spanning paths in the θ₅-graph.
//!
//! [`spanning_path`] runs the inductive case analysis as an algorithm: each
//! step either finds an edge, or recurses on a strictly smaller canonical
//! triangle and glues the result to one or two graph edges. The returned
//! path is at most `c · |T(u, w)|` long with `c = 2(2 + √5)`, and may cross
//! itself.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{CaseContext, Error, Result};
use crate::geometry::{CanonicalFrame, ConeIndex, Point};
use crate::graph::ThetaGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpannerConstants {
    /// Length factor of the constructive path relative to `|T(u, w)|`.
    pub c: f64,
    /// Upper bound on the spanning ratio of θ₅.
    pub ratio_bound: f64,
    /// Spanning ratio realised by the lower-bound instance.
    pub lower_bound: f64,
}

impl SpannerConstants {
    pub fn theta5() -> Self {
        let s5 = 5f64.sqrt();
        SpannerConstants {
            c: 2.0 * (2.0 + s5),
            ratio_bound: (50.0 + 22.0 * s5).sqrt(),
            lower_bound: 0.5 * (11.0 * s5 - 17.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    BaseEdge,
    SwapSides,
    Case1,
    Case2,
    Case3,
    Case4a,
    Case4b,
    Case4c,
    Case4d,
    Case4e1,
    Case4e2,
    Case4e3,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One recursion step of the constructive path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub label: CaseLabel,
    pub u: usize,
    pub w: usize,
    /// `|T(u, w)|` for this step; strictly decreasing along the trace.
    pub size: f64,
    /// A cone test in this step was decided by the boundary tie-break.
    pub near_tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathResult {
    pub vertices: Vec<usize>,
    pub length: f64,
    /// Empty unless produced by [`spanning_path`].
    pub case_trace: Vec<TraceStep>,
}

impl PathResult {
    pub fn from_vertices(graph: &ThetaGraph, vertices: Vec<usize>) -> Self {
        let length = path_length(graph, &vertices);
        PathResult {
            vertices,
            length,
            case_trace: Vec::new(),
        }
    }

    pub fn labels(&self) -> Vec<CaseLabel> {
        self.case_trace.iter().map(|s| s.label).collect()
    }

    /// Every consecutive pair is an edge of `graph`.
    pub fn is_edge_valid(&self, graph: &ThetaGraph) -> bool {
        self.vertices.windows(2).all(|p| graph.has_edge(p[0], p[1]))
    }
}

pub fn path_length(graph: &ThetaGraph, vertices: &[usize]) -> f64 {
    vertices
        .windows(2)
        .map(|p| graph.edge_length(p[0], p[1]))
        .sum()
}

/// Outcome of classifying one ordered pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: CaseLabel,
    /// Closest vertex to `w` in the cone of `w` containing `u`.
    pub v_w: Option<usize>,
    /// Closest vertex to `u` in the cone of `u` containing `w`.
    pub v_u: Option<usize>,
    pub near_tie: bool,
}

struct Classifier<'g> {
    graph: &'g ThetaGraph,
    frame: CanonicalFrame,
    u: usize,
    w: usize,
    near_tie: bool,
}

impl Classifier<'_> {
    fn pos(&self, id: usize) -> Point {
        self.graph.point(id)
    }

    /// Cone of `apex` containing `target`, labelled in the canonical frame.
    fn label(&mut self, apex: Point, target: Point) -> Result<usize> {
        let config = self.graph.config();
        if config.near_cone_boundary(apex, target)? {
            self.near_tie = true;
        }
        Ok(self.frame.to_canonical(config.cone_index(apex, target)?).0)
    }

    fn choice(&self, apex: usize, toward: usize) -> Result<usize> {
        let config = self.graph.config();
        let cone = config.cone_index(self.pos(apex), self.pos(toward))?;
        self.graph.cone_choice(apex, cone).ok_or_else(|| {
            Error::GraphIntegrity(format!(
                "vertex {apex} has no neighbour in {cone} although {toward} lies there"
            ))
        })
    }

    fn exhausted(
        &self,
        stage: &'static str,
        label: usize,
        v_w: Option<usize>,
        v_u: Option<usize>,
    ) -> Error {
        Error::CaseExhaustion(Box::new(CaseContext {
            u: self.u,
            w: self.w,
            u_pos: self.pos(self.u),
            w_pos: self.pos(self.w),
            v_w: v_w.map(|v| (v, self.pos(v))),
            v_u: v_u.map(|v| (v, self.pos(v))),
            stage,
            label,
        }))
    }

    fn done(&self, label: CaseLabel, v_w: Option<usize>, v_u: Option<usize>) -> Classification {
        Classification {
            label,
            v_w,
            v_u,
            near_tie: self.near_tie,
        }
    }
}

fn require_theta5(graph: &ThetaGraph, operation: &'static str) -> Result<()> {
    if graph.k() != 5 {
        return Err(Error::UnsupportedConeCount {
            operation,
            required: 5,
            actual: graph.k(),
        });
    }
    Ok(())
}

/// Decides which case of the inductive argument applies to the ordered pair
/// `(u, w)`. The canonical frame is computed internally.
pub fn classify_case(graph: &ThetaGraph, u: usize, w: usize) -> Result<Classification> {
    require_theta5(graph, "classify_case")?;
    graph.check_vertex(u)?;
    graph.check_vertex(w)?;
    if u == w {
        return Err(Error::InvalidArgument(format!(
            "classify_case needs u != w, got {u}"
        )));
    }
    let config = *graph.config();
    let (pu, pw) = (graph.point(u), graph.point(w));
    let frame = config.to_canonical_frame(pu, pw)?;
    let mut cl = Classifier {
        graph,
        frame,
        u,
        w,
        near_tie: false,
    };

    if graph.has_edge(u, w) {
        return Ok(cl.done(CaseLabel::BaseEdge, None, None));
    }

    let alpha = config.bisector_angle_alpha(pu, pw)?;
    let alpha_tol = config.tolerance() / pu.dist(pw);
    if alpha < PI / 10.0 - alpha_tol {
        return Ok(cl.done(CaseLabel::SwapSides, None, None));
    }
    if (alpha - PI / 10.0).abs() <= alpha_tol {
        cl.near_tie = true;
    }

    let v_w = cl.choice(w, u)?;
    let pvw = graph.point(v_w);
    let label = match cl.label(pu, pvw)? {
        2 => Some(CaseLabel::Case1),
        1 => Some(CaseLabel::Case2),
        0 => Some(CaseLabel::Case3),
        4 => None,
        other => return Err(cl.exhausted("cone of u containing v_w", other, Some(v_w), None)),
    };
    if let Some(label) = label {
        return Ok(cl.done(label, Some(v_w), None));
    }

    // v_w lies in C4 of u. `b` is the corner that is on the right in the frame.
    let tri = config.canonical_triangle(pu, pw)?;
    let b = if frame.reflect {
        tri.corner_a
    } else {
        tri.corner_b
    };
    if pvw.dist(b) > config.tolerance() && cl.label(b, pvw)? == 3 {
        return Ok(cl.done(CaseLabel::Case4a, Some(v_w), None));
    }

    let top = frame.to_world(ConeIndex(0));
    let v_u = graph.cone_choice(u, top).ok_or_else(|| {
        Error::GraphIntegrity(format!(
            "vertex {u} has no neighbour in {top} although {w} lies there"
        ))
    })?;
    let pvu = graph.point(v_u);
    match cl.label(pvu, pw)? {
        4 => return Ok(cl.done(CaseLabel::Case4b, Some(v_w), Some(v_u))),
        0 => return Ok(cl.done(CaseLabel::Case4c, Some(v_w), Some(v_u))),
        1 => {}
        other => return Err(cl.exhausted("cone of v_u containing w", other, Some(v_w), Some(v_u))),
    }
    match cl.label(pw, pvu)? {
        3 => return Ok(cl.done(CaseLabel::Case4d, Some(v_w), Some(v_u))),
        4 => {}
        other => return Err(cl.exhausted("cone of w containing v_u", other, Some(v_w), Some(v_u))),
    }

    let c = SpannerConstants::theta5().c;
    let small = config.triangle_size(pw, pvu)? <= (c - 1.0) / c * tri.size;
    if small {
        return Ok(cl.done(CaseLabel::Case4e1, Some(v_w), Some(v_u)));
    }
    match cl.label(pvw, pvu)? {
        0 => Ok(cl.done(CaseLabel::Case4e2, Some(v_w), Some(v_u))),
        1 => Ok(cl.done(CaseLabel::Case4e3, Some(v_w), Some(v_u))),
        other => Err(cl.exhausted("cone of v_w containing v_u", other, Some(v_w), Some(v_u))),
    }
}

struct Builder<'g> {
    graph: &'g ThetaGraph,
    trace: Vec<TraceStep>,
    depth_cap: usize,
}

impl Builder<'_> {
    /// Vertices of a path from `u` to `w`, both included.
    fn path(&mut self, u: usize, w: usize, parent: Option<f64>) -> Result<Vec<usize>> {
        let config = self.graph.config();
        let size = config.triangle_size(self.graph.point(u), self.graph.point(w))?;
        if let Some(parent) = parent {
            if size.partial_cmp(&parent) != Some(std::cmp::Ordering::Less) {
                return Err(Error::ConstructionFailure(format!(
                    "triangle T({u},{w}) of size {size} does not shrink below {parent}"
                )));
            }
        }
        if self.trace.len() >= self.depth_cap {
            return Err(Error::ConstructionFailure(format!(
                "recursion depth cap {} exceeded at ({u},{w})",
                self.depth_cap
            )));
        }
        let cl = classify_case(self.graph, u, w)?;
        self.trace.push(TraceStep {
            label: cl.label,
            u,
            w,
            size,
            near_tie: cl.near_tie,
        });
        let v_w = cl.v_w.unwrap_or(usize::MAX);
        let v_u = cl.v_u.unwrap_or(usize::MAX);
        let s = Some(size);
        use CaseLabel::*;
        let out = match cl.label {
            BaseEdge => vec![u, w],
            SwapSides => reversed(self.path(w, u, s)?),
            Case1 | Case2 | Case3 | Case4a => {
                let mut p = self.path(u, v_w, s)?;
                p.push(w);
                p
            }
            Case4b | Case4c => {
                let mut p = vec![u];
                p.extend(self.path(v_u, w, s)?);
                p
            }
            Case4d => {
                let mut p = vec![u];
                p.extend(self.path(v_u, v_w, s)?);
                p.push(w);
                p
            }
            Case4e1 => {
                let mut p = vec![u];
                p.extend(reversed(self.path(w, v_u, s)?));
                p
            }
            Case4e2 | Case4e3 => {
                let mut p = vec![u];
                p.extend(reversed(self.path(v_w, v_u, s)?));
                p.push(w);
                p
            }
        };
        Ok(out)
    }
}

fn reversed(mut v: Vec<usize>) -> Vec<usize> {
    v.reverse();
    v
}

pub fn spanning_path(graph: &ThetaGraph, u: usize, w: usize) -> Result<PathResult> {
    require_theta5(graph, "spanning_path")?;
    graph.check_vertex(u)?;
    graph.check_vertex(w)?;
    if u == w {
        return Err(Error::InvalidArgument(format!(
            "spanning_path needs u != w, got {u}"
        )));
    }
    let mut b = Builder {
        graph,
        trace: Vec::new(),
        depth_cap: 4 * graph.len(),
    };
    let vertices = b.path(u, w, None)?;
    let mut result = PathResult::from_vertices(graph, vertices);
    result.case_trace = b.trace;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeomConfig;
    use crate::graph::build_theta_graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(points: Vec<Point>) -> ThetaGraph {
        let cfg = GeomConfig::for_points(5, &points).unwrap();
        build_theta_graph(cfg, points).unwrap()
    }

    fn random_points(n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
    }

    #[test]
    fn constants_match_closed_forms() {
        let k = SpannerConstants::theta5();
        assert!((k.c - 8.472_135_954_999_58).abs() < 1e-12);
        assert!((k.ratio_bound - 9.959_593_139_531_12).abs() < 1e-12);
        assert!((k.lower_bound - 3.798373876248843).abs() < 1e-12);
        let via_angles = k.c / (PI / 5.0).cos() * (PI / 10.0).cos();
        assert!((via_angles - k.ratio_bound).abs() < 1e-12);
    }

    #[test]
    fn case_constants() {
        let s = f64::sin;
        let s5 = 5f64.sqrt();
        let c = SpannerConstants::theta5().c;
        let case1 = s(3.0 * PI / 5.0) / s(3.0 * PI / 10.0) * (PI / 5.0).tan();
        assert!((case1 - 0.854102).abs() < 1e-6 && case1 < 1.0);
        let case4b = s(PI / 10.0) / s(3.0 * PI / 10.0);
        assert!((case4b - 0.5 * (3.0 - s5)).abs() < 1e-12);
        let case4e2 = s(PI / 10.0) / s(7.0 * PI / 10.0) / (PI / 5.0).cos();
        assert!((case4e2 - 2.0 * (s5 - 2.0)).abs() < 1e-12);
        let case4e3 = 1.0 / c + 5.0 - 2.0 * s5;
        assert!((case4e3 - 0.645898).abs() < 1e-6 && case4e3 < 1.0);
        let case2 = s(7.0 * PI / 10.0) / s(PI / 10.0);
        assert!((case2 - 0.5 * (3.0 + s5)).abs() < 1e-12 && c > case2);
        assert!(c > 1.0 / (2.0 * s5 - 4.0));
    }

    #[test]
    fn two_vertices_is_base_edge() {
        let g = graph(vec![Point::new(0.0, 0.0), Point::new(0.2, 0.9)]);
        assert_eq!(classify_case(&g, 0, 1).unwrap().label, CaseLabel::BaseEdge);
        let p = spanning_path(&g, 0, 1).unwrap();
        assert_eq!(p.vertices, vec![0, 1]);
        assert_eq!(p.labels(), vec![CaseLabel::BaseEdge]);
        let size = g.config().triangle_size(g.point(0), g.point(1)).unwrap();
        assert!(p.length <= size);
    }

    #[test]
    fn small_alpha_swaps_sides() {
        // w nearly straight above u; a blocker makes (u, w) a non-edge.
        let u = Point::new(0.0, 0.0);
        let w = Point::new(0.05, 1.0);
        let pts = vec![
            u,
            w,
            Point::new(0.3, 0.5),
            Point::new(-0.2, 0.6),
            Point::new(0.25, 0.55),
        ];
        let g = graph(pts);
        assert!(!g.has_edge(0, 1));
        let alpha = g.config().bisector_angle_alpha(u, w).unwrap();
        assert!(alpha < PI / 10.0);
        assert_eq!(classify_case(&g, 0, 1).unwrap().label, CaseLabel::SwapSides);
    }

    #[test]
    fn worst_case_configuration_is_case1() {
        // w at the right corner b of T(u, w) (pulled slightly left so it is
        // right of x but inside the cone), v_w near the bottom corner of T(w, u).
        let theta = 2.0 * PI / 5.0;
        let u = Point::new(0.0, 0.0);
        let w = Point::direction(theta / 2.0 - 0.01);
        let cfg = GeomConfig::new(5, 1e-12).unwrap();
        let twu = cfg.canonical_triangle(w, u).unwrap();
        let bottom = if twu.corner_a.y < twu.corner_b.y {
            twu.corner_a
        } else {
            twu.corner_b
        };
        let v_w = bottom
            .offset(bottom.unit_towards(w), 0.02)
            .offset(bottom.unit_towards(u), 0.02);
        let pts = vec![u, w, v_w];
        // Alone in its cone, w is always joined to u; drop that edge to reach
        // the case analysis.
        let g = build_theta_graph(cfg, pts).unwrap().without_edge(0, 1);
        assert_eq!(cfg.cone_index(u, v_w).unwrap(), ConeIndex(2));
        let cl = classify_case(&g, 0, 1).unwrap();
        assert_eq!(cl.label, CaseLabel::Case1);
        assert_eq!(cl.v_w, Some(2));
        let p = spanning_path(&g, 0, 1).unwrap();
        assert_eq!(p.vertices, vec![0, 2, 1]);
    }

    #[test]
    fn rejects_non_theta5_and_bad_ids() {
        let pts = random_points(10, 3);
        let cfg = GeomConfig::for_points(6, &pts).unwrap();
        let g = build_theta_graph(cfg, pts.clone()).unwrap();
        assert!(matches!(
            spanning_path(&g, 0, 1),
            Err(Error::UnsupportedConeCount { .. })
        ));
        let g = graph(pts);
        assert!(matches!(
            spanning_path(&g, 0, 99),
            Err(Error::InvalidVertex { .. })
        ));
        assert!(matches!(
            spanning_path(&g, 4, 4),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn random_pairs_respect_bounds() {
        let k = SpannerConstants::theta5();
        for seed in 0..4 {
            let g = graph(random_points(40, 100 + seed));
            for u in 0..g.len() {
                for w in 0..g.len() {
                    if u == w {
                        continue;
                    }
                    let p = spanning_path(&g, u, w).unwrap();
                    assert_eq!(p.vertices.first(), Some(&u));
                    assert_eq!(p.vertices.last(), Some(&w));
                    assert!(p.is_edge_valid(&g));
                    let size = g.config().triangle_size(g.point(u), g.point(w)).unwrap();
                    assert!(p.length <= k.c * size * (1.0 + 1e-12));
                    assert!(p.length <= k.ratio_bound * g.edge_length(u, w));
                    for pair in p.case_trace.windows(2) {
                        assert!(pair[1].size < pair[0].size);
                    }
                }
            }
        }
    }
}
