//! Shortest paths under Euclidean edge weights, spanning ratios and bound
//! verification.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ThetaGraph;
use crate::path::{spanning_path, PathResult, SpannerConstants};

/// A length that may be infinite because no path exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stretch {
    Finite(f64),
    Unbounded,
}

impl Stretch {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Stretch::Finite(v) => Some(v),
            Stretch::Unbounded => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Stretch::Finite(_))
    }

    fn exceeds(&self, other: &Stretch) -> bool {
        match (self, other) {
            (Stretch::Unbounded, Stretch::Unbounded) => false,
            (Stretch::Unbounded, _) => true,
            (_, Stretch::Unbounded) => false,
            (Stretch::Finite(a), Stretch::Finite(b)) => a > b,
        }
    }
}

/// Single-source result: distances and predecessors.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    pub source: usize,
    pub dist: Vec<Option<f64>>,
    pred: Vec<Option<usize>>,
}

impl ShortestPathTree {
    pub fn path_to(&self, t: usize) -> Option<Vec<usize>> {
        self.dist[t]?;
        let mut path = vec![t];
        let mut cur = t;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    id: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`. Among equal-length paths the one whose vertex-id
/// sequence is lexicographically smallest is kept.
pub fn single_source(graph: &ThetaGraph, source: usize) -> ShortestPathTree {
    let n = graph.len();
    let mut tree = ShortestPathTree {
        source,
        dist: vec![None; n],
        pred: vec![None; n],
    };
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    tree.dist[source] = Some(0.0);
    heap.push(Entry {
        dist: 0.0,
        id: source,
    });
    while let Some(Entry { dist, id }) = heap.pop() {
        if done[id] {
            continue;
        }
        done[id] = true;
        for &v in graph.neighbors(id) {
            if done[v] {
                continue;
            }
            let nd = dist + graph.edge_length(id, v);
            let replace = match tree.dist[v] {
                None => true,
                Some(old) if nd < old => true,
                Some(old) if nd == old => {
                    let via_new = prefix_with(&tree, id, v);
                    let via_old = tree.path_to(v).unwrap_or_default();
                    via_new < via_old
                }
                _ => false,
            };
            if replace {
                tree.dist[v] = Some(nd);
                tree.pred[v] = Some(id);
                heap.push(Entry { dist: nd, id: v });
            }
        }
    }
    tree
}

fn prefix_with(tree: &ShortestPathTree, via: usize, v: usize) -> Vec<usize> {
    let mut p = tree.path_to(via).unwrap_or_default();
    p.push(v);
    p
}

pub fn shortest_path(graph: &ThetaGraph, s: usize, t: usize) -> Result<Option<PathResult>> {
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    let tree = single_source(graph, s);
    Ok(tree
        .path_to(t)
        .map(|vertices| PathResult::from_vertices(graph, vertices)))
}

/// Worst pair stretch certificate.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub k: usize,
    pub n: usize,
    pub worst_pair: (usize, usize),
    pub graph_distance: Stretch,
    pub euclidean_distance: f64,
    pub ratio: Stretch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_pair_ratios: Option<Vec<Vec<Stretch>>>,
    pub bound_checked: Option<f64>,
    pub bound_satisfied: Option<bool>,
}

/// Known upper bound on the spanning ratio of θ_k: `√(50 + 22√5)` for k = 5,
/// `1 / (1 − 2 sin(π/k))` for k ≥ 7. None for k = 4 and k = 6.
pub fn theoretical_bound(k: usize) -> Option<f64> {
    match k {
        5 => Some(SpannerConstants::theta5().ratio_bound),
        k if k >= 7 => Some(1.0 / (1.0 - 2.0 * (PI / k as f64).sin())),
        _ => None,
    }
}

/// `c / cos(π/5) · min(cos α, cos(π/5 − α))`: the bound on the stretch of the
/// constructive path for a pair at angle `α` from its bisector.
pub fn constructive_stretch_at(alpha: f64) -> f64 {
    let c = SpannerConstants::theta5().c;
    c / (PI / 5.0).cos() * alpha.cos().min((PI / 5.0 - alpha).cos())
}

pub fn spanning_ratio(graph: &ThetaGraph) -> Result<RatioReport> {
    spanning_ratio_with(graph, false)
}

pub fn spanning_ratio_with(graph: &ThetaGraph, keep_matrix: bool) -> Result<RatioReport> {
    let n = graph.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "spanning ratio needs at least 2 vertices, got {n}"
        )));
    }
    let mut matrix = keep_matrix.then(|| vec![vec![Stretch::Finite(1.0); n]; n]);
    let mut worst: Option<((usize, usize), Stretch, Stretch, f64)> = None;
    for s in 0..n {
        let tree = single_source(graph, s);
        for t in 0..n {
            if t == s {
                continue;
            }
            let euclid = graph.edge_length(s, t);
            let (gd, ratio) = match tree.dist[t] {
                Some(d) => (Stretch::Finite(d), Stretch::Finite(d / euclid)),
                None => (Stretch::Unbounded, Stretch::Unbounded),
            };
            if let Some(m) = matrix.as_mut() {
                m[s][t] = ratio;
            }
            let better = match &worst {
                None => true,
                Some((_, _, r, _)) => ratio.exceeds(r),
            };
            if better {
                worst = Some(((s, t), gd, ratio, euclid));
            }
        }
    }
    let (worst_pair, graph_distance, ratio, euclidean_distance) =
        worst.expect("n >= 2 gives at least one pair");
    let bound_checked = theoretical_bound(graph.k());
    let bound_satisfied = bound_checked.map(|b| ratio.finite().is_some_and(|r| r <= b));
    Ok(RatioReport {
        k: graph.k(),
        n,
        worst_pair,
        graph_distance,
        euclidean_distance,
        ratio,
        per_pair_ratios: matrix,
        bound_checked,
        bound_satisfied,
    })
}

pub fn is_connected(graph: &ThetaGraph) -> bool {
    let n = graph.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub k: usize,
    pub n: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

pub fn verify_bounds(graph: &ThetaGraph) -> VerificationReport {
    let n = graph.len();
    let k = graph.k();
    let mut report = VerificationReport {
        k,
        n,
        checks: Vec::new(),
    };
    let edges = graph.edge_count();
    report.push(
        "edge_count",
        edges <= k * n,
        format!("{edges} edges, limit {}", k * n),
    );
    if k == 5 {
        report.push("connected", is_connected(graph), format!("{n} vertices"));
    }
    if n < 2 {
        return report;
    }
    match spanning_ratio(graph) {
        Ok(r) => {
            let ratio = match r.ratio {
                Stretch::Finite(v) => format!("{v:.9}"),
                Stretch::Unbounded => "infinite".to_string(),
            };
            match r.bound_checked {
                Some(bound) => report.push(
                    "spanning_ratio",
                    r.bound_satisfied == Some(true),
                    format!("ratio {ratio} at {:?}, bound {bound:.9}", r.worst_pair),
                ),
                None => report.push(
                    "spanning_ratio",
                    r.ratio.is_finite(),
                    format!(
                        "ratio {ratio} at {:?}, no bound known for k = {k}",
                        r.worst_pair
                    ),
                ),
            }
        }
        Err(e) => report.push("spanning_ratio", false, e.to_string()),
    }
    if k == 5 {
        report.checks.push(check_constructive_paths(graph));
    }
    report
}

fn check_constructive_paths(graph: &ThetaGraph) -> Check {
    let c = SpannerConstants::theta5().c;
    let config = graph.config();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut pairs = 0usize;
    for s in 0..graph.len() {
        let tree = single_source(graph, s);
        for t in 0..graph.len() {
            if s == t {
                continue;
            }
            pairs += 1;
            let failure = match spanning_path(graph, s, t) {
                Err(e) => Some(e.to_string()),
                Ok(p) => {
                    let size = config
                        .triangle_size(graph.point(s), graph.point(t))
                        .unwrap_or(f64::NAN);
                    let shortest = tree.dist[t].unwrap_or(f64::INFINITY);
                    worst = worst.max(p.length / size);
                    if !p.is_edge_valid(graph) {
                        Some("path uses a non-edge".to_string())
                    } else if p.length < shortest * (1.0 - 1e-12) {
                        Some(format!("length {} below shortest {shortest}", p.length))
                    } else if p.length > c * size * (1.0 + 1e-12) {
                        Some(format!("length {} above c·|T| = {}", p.length, c * size))
                    } else {
                        None
                    }
                }
            };
            if let Some(f) = failure {
                failures.push(format!("({s},{t}): {f}"));
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{pairs} ordered pairs, max length/|T| = {worst:.9}")
    } else {
        format!(
            "{} of {pairs} pairs failed; first: {}",
            failures.len(),
            failures[0]
        )
    };
    Check {
        name: "constructive_paths".to_string(),
        passed: failures.is_empty(),
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{GeomConfig, Point};
    use crate::graph::build_theta_graph;

    fn graph(k: usize, points: Vec<Point>) -> ThetaGraph {
        let cfg = GeomConfig::for_points(k, &points).unwrap();
        build_theta_graph(cfg, points).unwrap()
    }

    /// Exhaustive simple-path search.
    fn brute_distance(g: &ThetaGraph, s: usize, t: usize) -> Option<f64> {
        fn go(
            g: &ThetaGraph,
            cur: usize,
            t: usize,
            seen: &mut Vec<bool>,
            acc: f64,
            best: &mut Option<f64>,
        ) {
            if cur == t {
                *best = Some(best.map_or(acc, |b: f64| b.min(acc)));
                return;
            }
            for &v in g.neighbors(cur) {
                if !seen[v] {
                    seen[v] = true;
                    go(g, v, t, seen, acc + g.edge_length(cur, v), best);
                    seen[v] = false;
                }
            }
        }
        let mut seen = vec![false; g.len()];
        seen[s] = true;
        let mut best = None;
        go(g, s, t, &mut seen, 0.0, &mut best);
        best
    }

    #[test]
    fn trivial_paths() {
        let g = graph(5, vec![Point::new(0.0, 0.0), Point::new(1.0, 0.3)]);
        let p = shortest_path(&g, 0, 0).unwrap().unwrap();
        assert_eq!((p.vertices.clone(), p.length), (vec![0], 0.0));
        let p = shortest_path(&g, 0, 1).unwrap().unwrap();
        assert_eq!(p.vertices, vec![0, 1]);
        let r = spanning_ratio(&g).unwrap();
        assert_eq!(r.ratio, Stretch::Finite(1.0));
    }

    #[test]
    fn unit_square_matches_enumeration() {
        let g = graph(
            5,
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
                Point::new(1.0, 1.0),
            ],
        );
        let mut expect = 0.0f64;
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    expect = expect.max(brute_distance(&g, s, t).unwrap() / g.edge_length(s, t));
                }
            }
        }
        let got = spanning_ratio(&g).unwrap().ratio.finite().unwrap();
        assert!((got - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn disconnected_graph_reports_infinity() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.1),
            Point::new(2.0, 0.3),
        ];
        let g = graph(5, pts);
        assert!(is_connected(&g));
        let (a, b) = g.edges().next().unwrap();
        let mut h = g.clone();
        // Remove every edge touching `a` so it forms its own component.
        for &v in g.neighbors(a) {
            h = h.without_edge(a, v);
        }
        assert!(!is_connected(&h));
        let r = spanning_ratio(&h).unwrap();
        assert_eq!(r.ratio, Stretch::Unbounded);
        assert!(r.worst_pair.0 == a || r.worst_pair.1 == a);
        assert!(shortest_path(&h, a, b).unwrap().is_none());
        assert_eq!(r.bound_satisfied, Some(false));
    }

    #[test]
    fn single_vertex_cases() {
        let g = graph(5, vec![Point::new(0.0, 0.0)]);
        assert!(is_connected(&g));
        assert!(spanning_ratio(&g).is_err());
        let rep = verify_bounds(&g);
        assert!(rep.all_passed());
    }

    #[test]
    fn bound_table() {
        assert_eq!(theoretical_bound(4), None);
        assert_eq!(theoretical_bound(6), None);
        let b7 = theoretical_bound(7).unwrap();
        assert!((b7 - 7.562436128822012).abs() < 1e-9);
        assert!((theoretical_bound(5).unwrap() - 9.959_593_139_531_12).abs() < 1e-12);
    }

    #[test]
    fn max_of_min_cosines_is_at_pi_over_ten() {
        let steps = 2_000_000;
        let mut best = (0.0, f64::NEG_INFINITY);
        for i in 0..=steps {
            let a = PI / 5.0 * i as f64 / steps as f64;
            let v = a.cos().min((PI / 5.0 - a).cos());
            if v > best.1 {
                best = (a, v);
            }
        }
        assert!((best.0 - PI / 10.0).abs() < 1e-6);
        let peak = constructive_stretch_at(PI / 10.0);
        assert!((peak - SpannerConstants::theta5().ratio_bound).abs() < 1e-12);
    }
}
