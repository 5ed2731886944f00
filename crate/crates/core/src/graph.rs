//! θ_k-graph construction: every vertex links to the vertex with the smallest
//! bisector projection in each of its cones.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{clockwise_angle, ConeIndex, GeomConfig, Point};

#[derive(Debug, Clone, Serialize)]
pub struct ThetaGraph {
    config: GeomConfig,
    vertices: Vec<Point>,
    edges: BTreeSet<(usize, usize)>,
    /// `cone_choice[u][i]` is the neighbour `u` picked in its cone `C_i`.
    cone_choice: Vec<Vec<Option<usize>>>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

impl ThetaGraph {
    pub fn config(&self) -> &GeomConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.config.k()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn point(&self, id: usize) -> Point {
        self.vertices[id]
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted neighbour ids.
    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn cone_choice(&self, u: usize, cone: ConeIndex) -> Option<usize> {
        self.cone_choice[u][cone.0]
    }

    pub fn check_vertex(&self, id: usize) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { id, n: self.len() })
        }
    }

    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        self.vertices[a].dist(self.vertices[b])
    }

    /// Copy of the graph without the edge `{a, b}`. Cone witnesses are kept,
    /// so the result no longer satisfies the construction invariant; meant for
    /// exercising analysis code on non-θ graphs.
    pub fn without_edge(&self, a: usize, b: usize) -> ThetaGraph {
        let mut g = self.clone();
        g.edges.remove(&(a.min(b), a.max(b)));
        g.adjacency = adjacency_of(g.len(), &g.edges);
        g
    }
}

fn adjacency_of(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Rejects non-finite coordinates and repeated points.
pub fn validate_points(config: &GeomConfig, points: &[Point]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x));
    let tol = config.tolerance();
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if points[j].x - points[i].x > tol {
                break;
            }
            if points[i].dist(points[j]) <= tol {
                return Err(Error::DuplicatePoint {
                    first: i.min(j),
                    second: i.max(j),
                });
            }
        }
    }
    Ok(())
}

/// Angle of `target` inside its cone, measured clockwise from the cone's
/// counter-clockwise boundary.
fn sweep_angle(config: &GeomConfig, apex: Point, target: Point, cone: ConeIndex) -> f64 {
    let start = cone.0 as f64 * config.theta() - config.half_angle();
    (clockwise_angle(apex, target) - start).rem_euclid(TAU)
}

pub fn closest_in_cone(
    config: &GeomConfig,
    points: &[Point],
    u: usize,
    cone: ConeIndex,
) -> Result<Option<usize>> {
    if u >= points.len() {
        return Err(Error::InvalidVertex {
            id: u,
            n: points.len(),
        });
    }
    let apex = points[u];
    let bisector = config.bisector(cone);
    let tol = config.tolerance();
    let mut best: Option<(usize, f64)> = None;
    for (v, &p) in points.iter().enumerate() {
        if v == u || config.cone_index(apex, p)? != cone {
            continue;
        }
        let proj = p.sub(apex).dot(bisector);
        best = match best {
            None => Some((v, proj)),
            Some((b, bp)) => {
                let better = if (proj - bp).abs() <= tol {
                    // Clockwise-last candidate wins a near tie.
                    let sv = sweep_angle(config, apex, p, cone);
                    let sb = sweep_angle(config, apex, points[b], cone);
                    sv > sb || (sv == sb && v < b)
                } else {
                    proj < bp
                };
                if better {
                    Some((v, proj))
                } else {
                    Some((b, bp))
                }
            }
        };
    }
    Ok(best.map(|(v, _)| v))
}

pub fn build_theta_graph(config: GeomConfig, points: Vec<Point>) -> Result<ThetaGraph> {
    validate_points(&config, &points)?;
    let n = points.len();
    let k = config.k();
    let mut cone_choice = vec![vec![None; k]; n];
    let mut edges = BTreeSet::new();
    for (u, choices) in cone_choice.iter_mut().enumerate() {
        for (i, slot) in choices.iter_mut().enumerate() {
            if let Some(v) = closest_in_cone(&config, &points, u, ConeIndex(i))? {
                *slot = Some(v);
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    let adjacency = adjacency_of(n, &edges);
    Ok(ThetaGraph {
        config,
        vertices: points,
        edges,
        cone_choice,
        adjacency,
    })
}
