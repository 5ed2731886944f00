use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use theta_spanner::analysis::{shortest_path, spanning_ratio, verify_bounds};
use theta_spanner::constructions::{adversary_instance, appendix_instance, theorem3_path};
use theta_spanner::geometry::{bounding_diagonal, DEFAULT_RELATIVE_TOLERANCE};
use theta_spanner::io::{
    export_graph, load_points, read_graph_file, write_graph_file, write_points, ExportFormat,
};
use theta_spanner::routing::{default_step_cap, theta_route};
use theta_spanner::{
    build_theta_graph, spanning_path, Error, GeomConfig, Point, Result, ThetaGraph,
};

#[derive(Parser)]
#[command(
    name = "theta",
    version,
    about = "Build and analyse θ_k-graph spanners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a θ_k-graph from a point file.
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Tolerance relative to the bounding-box diagonal.
        #[arg(long, default_value_t = DEFAULT_RELATIVE_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        /// Comma-separated vertex ids drawn on top of an svg export.
        #[arg(long, value_delimiter = ',')]
        highlight: Option<Vec<usize>>,
    },
    /// Exact spanning ratio with its worst pair.
    Ratio(GraphInput),
    /// A path between two vertices.
    Path {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        dest: usize,
        /// The recursive construction for θ₅ (default).
        #[arg(long, conflicts_with = "shortest")]
        constructive: bool,
        /// A Dijkstra shortest path.
        #[arg(long)]
        shortest: bool,
    },
    /// Follow θ-routing from source to destination.
    Route {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        dest: usize,
        /// Defaults to 10·n.
        #[arg(long)]
        step_cap: Option<usize>,
    },
    /// Write one of the hand-built instances as a point file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        cycles: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the edge-count, connectivity and stretch bounds; exit status 1 if
    /// any check fails.
    Verify {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_RELATIVE_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct GraphInput {
    /// Graph file written by `build`.
    #[arg(long, conflicts_with_all = ["points", "k"])]
    graph: Option<PathBuf>,
    #[arg(long, requires = "k")]
    points: Option<PathBuf>,
    #[arg(long, requires = "points")]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_RELATIVE_TOLERANCE)]
    tolerance: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    EdgeList,
    Dot,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Theorem3,
    Appendix,
    Adversary,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn build(k: usize, points: Vec<Point>, relative_tolerance: f64) -> Result<ThetaGraph> {
    if !(relative_tolerance.is_finite() && relative_tolerance >= 0.0) {
        return Err(Error::InvalidTolerance(relative_tolerance));
    }
    let cfg = GeomConfig::new(k, relative_tolerance * bounding_diagonal(&points))?;
    build_theta_graph(cfg, points)
}

impl GraphInput {
    fn load(&self) -> Result<ThetaGraph> {
        match (&self.graph, &self.points, self.k) {
            (Some(g), _, _) => read_graph_file(open(g)?),
            (None, Some(p), Some(k)) => build(k, load_points(open(p)?)?, self.tolerance),
            _ => Err(Error::InvalidArgument(
                "pass --graph, or --points with --k".into(),
            )),
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build {
            k,
            points,
            out,
            tolerance,
            format,
            highlight,
        } => {
            let g = build(k, load_points(open(&points)?)?, tolerance)?;
            let mut file = BufWriter::new(File::create(&out)?);
            let fmt = match format {
                OutFormat::Json => None,
                OutFormat::EdgeList => Some(ExportFormat::EdgeList),
                OutFormat::Dot => Some(ExportFormat::Dot),
                OutFormat::Svg => Some(ExportFormat::Svg),
            };
            match fmt {
                None => write_graph_file(&mut file, &g)?,
                Some(f) => {
                    if let Some(h) = &highlight {
                        for &v in h {
                            g.check_vertex(v)?;
                        }
                    }
                    file.write_all(export_graph(&g, f, highlight.as_deref()).as_bytes())?;
                }
            }
            file.flush()?;
        }
        Command::Ratio(input) => print_json(&spanning_ratio(&input.load()?)?)?,
        Command::Path {
            input,
            source,
            dest,
            constructive: _,
            shortest,
        } => {
            let g = input.load()?;
            if shortest {
                match shortest_path(&g, source, dest)? {
                    Some(p) => print_json(&p)?,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "no path between {source} and {dest}"
                        )))
                    }
                }
            } else {
                print_json(&spanning_path(&g, source, dest)?)?;
            }
        }
        Command::Route {
            input,
            source,
            dest,
            step_cap,
        } => {
            let g = input.load()?;
            let cap = step_cap.unwrap_or_else(|| default_step_cap(&g));
            print_json(&theta_route(&g, source, dest, cap)?)?;
        }
        Command::Gen {
            kind,
            epsilon,
            cycles,
            out,
        } => {
            let (points, tolerance) = match kind {
                GenKind::Theorem3 => {
                    let inst = theorem3_path(epsilon)?;
                    (inst.points, None)
                }
                GenKind::Appendix => {
                    let inst = appendix_instance(epsilon)?;
                    (inst.points, Some(inst.tolerance))
                }
                GenKind::Adversary => {
                    let inst = adversary_instance(cycles, epsilon)?;
                    (inst.points, Some(inst.tolerance))
                }
            };
            if let Some(tol) = tolerance {
                eprintln!(
                    "note: build this instance with --tolerance {:e}",
                    tol / bounding_diagonal(&points)
                );
            }
            match out {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(path)?);
                    write_points(&mut f, &points)?;
                    f.flush()?;
                }
                None => write_points(io::stdout().lock(), &points)?,
            }
        }
        Command::Verify {
            points,
            k,
            tolerance,
        } => {
            let g = build(k, load_points(open(&points)?)?, tolerance)?;
            let report = verify_bounds(&g);
            print_json(&report)?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
