//! Point files, graph files and graph export.
//!
//! A point file holds one `x,y` record per line. Blank lines and lines
//! starting with `#` are ignored, and an optional first record whose fields
//! are both non-numeric (such as `x,y`) is read as a header.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bounding_diagonal, GeomConfig, Point};
use crate::graph::{build_theta_graph, validate_points, ThetaGraph};

pub fn load_points<R: BufRead>(reader: R) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    let mut seen_record = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<(usize, &str)> = split_fields(&line);
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                column: 1,
                message: format!("expected 2 comma-separated fields, found {}", fields.len()),
            });
        }
        let parsed: Vec<Option<f64>> = fields.iter().map(|(_, f)| f.parse::<f64>().ok()).collect();
        if !seen_record
            && parsed.iter().all(Option::is_none)
            && fields.iter().all(|(_, f)| is_label(f))
        {
            seen_record = true;
            continue;
        }
        seen_record = true;
        let mut xy = [0.0; 2];
        for (slot, ((column, text), value)) in xy.iter_mut().zip(fields.iter().zip(&parsed)) {
            let v = value.ok_or_else(|| Error::Parse {
                line: lineno,
                column: *column,
                message: format!("{text:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteLine {
                    line: lineno,
                    column: *column,
                });
            }
            *slot = v;
        }
        points.push(Point::new(xy[0], xy[1]));
        lines.push(lineno);
    }
    let cfg = GeomConfig::for_points(5, &points)?;
    if let Err(Error::DuplicatePoint { first, second }) = validate_points(&cfg, &points) {
        return Err(Error::DuplicateLine {
            line: lines[second],
            first_line: lines[first],
        });
    }
    Ok(points)
}

/// Trimmed fields with their 1-based starting columns.
fn split_fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in line.split(',') {
        let lead = part.len() - part.trim_start().len();
        out.push((start + lead + 1, part.trim()));
        start += part.len() + 1;
    }
    out
}

fn is_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphabetic() || c == '_')
}

/// Writes `x,y` with 17 significant digits, enough to read back the same
/// binary value.
pub fn write_points<W: Write>(mut out: W, points: &[Point]) -> Result<()> {
    writeln!(out, "x,y")?;
    for p in points {
        writeln!(out, "{:.16e},{:.16e}", p.x, p.y)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dot,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" => Ok(ExportFormat::EdgeList),
            "dot" => Ok(ExportFormat::Dot),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn export_graph(
    graph: &ThetaGraph,
    format: ExportFormat,
    highlight: Option<&[usize]>,
) -> String {
    match format {
        ExportFormat::EdgeList => edge_list(graph),
        ExportFormat::Dot => dot(graph),
        ExportFormat::Svg => svg(graph, highlight),
    }
}

/// `# u v length` followed by one line per edge, in lexicographic order.
pub fn edge_list(graph: &ThetaGraph) -> String {
    let mut s = String::from("# u v length\n");
    for (a, b) in graph.edges() {
        let _ = writeln!(s, "{a} {b} {:.12}", graph.edge_length(a, b));
    }
    s
}

pub fn dot(graph: &ThetaGraph) -> String {
    let mut s = format!("graph theta{} {{\n", graph.k());
    for (i, p) in graph.vertices().iter().enumerate() {
        let _ = writeln!(s, "  {i} [pos=\"{:.12},{:.12}!\"];", p.x, p.y);
    }
    for (a, b) in graph.edges() {
        let _ = writeln!(s, "  {a} -- {b};");
    }
    s.push_str("}\n");
    s
}

pub fn svg(graph: &ThetaGraph, highlight: Option<&[usize]>) -> String {
    const SIZE: f64 = 800.0;
    const MARGIN: f64 = 20.0;
    let pts = graph.vertices();
    let (min_x, max_y) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(mx, my), p| {
            (mx.min(p.x), my.max(p.y))
        });
    let span = bounding_diagonal(pts);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: Point| {
        (
            MARGIN + (p.x - min_x) * scale,
            MARGIN + (max_y - p.y) * scale,
        )
    };

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    s.push_str("<style>.edge{stroke:#888;stroke-width:1}.vertex{fill:#222}.path{fill:none;stroke:#d22;stroke-width:3}</style>\n");
    for (a, b) in graph.edges() {
        let (x1, y1) = map(pts[a]);
        let (x2, y2) = map(pts[b]);
        let _ = writeln!(
            s,
            "<line class=\"edge\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>"
        );
    }
    if let Some(path) = highlight.filter(|p| p.len() >= 2) {
        let coords: Vec<String> = path
            .iter()
            .map(|&v| {
                let (x, y) = map(pts[v]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline class=\"path\" points=\"{}\"/>",
            coords.join(" ")
        );
    }
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = map(p);
        let _ = writeln!(
            s,
            "<circle class=\"vertex\" id=\"v{i}\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}

/// On-disk form of a built graph, written by `build` and read back by the
/// other subcommands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub k: usize,
    pub tolerance: f64,
    pub points: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn from_graph(graph: &ThetaGraph) -> Self {
        GraphFile {
            k: graph.k(),
            tolerance: graph.config().tolerance(),
            points: graph.vertices().to_vec(),
            edges: graph.edges().collect(),
        }
    }

    /// Rebuilds the graph and checks the stored edges against it.
    pub fn into_graph(self) -> Result<ThetaGraph> {
        let cfg = GeomConfig::new(self.k, self.tolerance)?;
        let g = build_theta_graph(cfg, self.points)?;
        let rebuilt: Vec<(usize, usize)> = g.edges().collect();
        if rebuilt != self.edges {
            return Err(Error::GraphFile(format!(
                "stored edges ({}) differ from the rebuilt graph ({})",
                self.edges.len(),
                rebuilt.len()
            )));
        }
        Ok(g)
    }
}

pub fn write_graph_file<W: Write>(out: W, graph: &ThetaGraph) -> Result<()> {
    serde_json::to_writer_pretty(out, &GraphFile::from_graph(graph))
        .map_err(|e| Error::GraphFile(e.to_string()))
}

pub fn read_graph_file<R: std::io::Read>(input: R) -> Result<ThetaGraph> {
    let file: GraphFile =
        serde_json::from_reader(input).map_err(|e| Error::GraphFile(e.to_string()))?;
    file.into_graph()
}
