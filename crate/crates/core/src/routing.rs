//! θ-routing: forward to the closest vertex in the cone containing the
//! destination until it is reached.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ThetaGraph;
use crate::path::PathResult;

#[derive(Debug, Clone, Serialize)]
pub struct RoutingOutcome {
    pub path: PathResult,
    pub reached: bool,
    /// Hops taken.
    pub steps: usize,
    /// `path.length / |st|`, only when the destination was reached.
    pub competitiveness: Option<f64>,
}

pub fn default_step_cap(graph: &ThetaGraph) -> usize {
    10 * graph.len()
}

pub fn theta_route(
    graph: &ThetaGraph,
    s: usize,
    t: usize,
    step_cap: usize,
) -> Result<RoutingOutcome> {
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    if s == t {
        return Err(Error::InvalidArgument("source equals destination".into()));
    }
    if step_cap == 0 {
        return Err(Error::InvalidArgument("step cap must be at least 1".into()));
    }
    let config = graph.config();
    let target = graph.point(t);
    let mut vertices = vec![s];
    let mut cur = s;
    while cur != t && vertices.len() <= step_cap {
        let cone = config.cone_index(graph.point(cur), target)?;
        let next = graph.cone_choice(cur, cone).ok_or_else(|| {
            Error::GraphIntegrity(format!(
                "vertex {cur} has no neighbour in cone {} even though {t} lies there",
                cone.0
            ))
        })?;
        if !graph.has_edge(cur, next) {
            return Err(Error::GraphIntegrity(format!(
                "cone witness {next} of vertex {cur} is not an edge"
            )));
        }
        vertices.push(next);
        cur = next;
    }
    let reached = cur == t;
    let steps = vertices.len() - 1;
    let path = PathResult::from_vertices(graph, vertices);
    let competitiveness = reached.then(|| path.length / graph.edge_length(s, t));
    Ok(RoutingOutcome {
        path,
        reached,
        steps,
        competitiveness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairOutcome {
    pub source: usize,
    pub destination: usize,
    pub reached: bool,
    pub steps: usize,
    pub competitiveness: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompetitivenessReport {
    pub step_cap: usize,
    /// Over reached pairs; None when no pair exists or none was reached.
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub worst_pair: Option<(usize, usize)>,
    pub unreached: Vec<(usize, usize)>,
    pub pairs: Vec<PairOutcome>,
}

pub fn competitiveness_sweep(graph: &ThetaGraph, step_cap: usize) -> Result<CompetitivenessReport> {
    let n = graph.len();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1));
    let mut unreached = Vec::new();
    let mut best: Option<((usize, usize), f64)> = None;
    let mut sum = 0.0;
    let mut reached_count = 0usize;
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let out = theta_route(graph, s, t, step_cap)?;
            match out.competitiveness {
                Some(c) => {
                    sum += c;
                    reached_count += 1;
                    if best.is_none_or(|(_, b)| c > b) {
                        best = Some(((s, t), c));
                    }
                }
                None => unreached.push((s, t)),
            }
            pairs.push(PairOutcome {
                source: s,
                destination: t,
                reached: out.reached,
                steps: out.steps,
                competitiveness: out.competitiveness,
            });
        }
    }
    Ok(CompetitivenessReport {
        step_cap,
        max: best.map(|(_, c)| c),
        mean: (reached_count > 0).then(|| sum / reached_count as f64),
        worst_pair: best.map(|(p, _)| p),
        unreached,
        pairs,
    })
}
