//! θ_k-graphs on planar point sets: construction, exact spanning ratios, the
//! constructive θ₅ spanning path, lower-bound instances and θ-routing.

pub mod analysis;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod path;
pub mod routing;

pub use analysis::{
    is_connected, shortest_path, spanning_ratio, verify_bounds, RatioReport, Stretch,
};
pub use error::{Error, Result};
pub use geometry::{ConeIndex, GeomConfig, Point};
pub use graph::{build_theta_graph, ThetaGraph};
pub use path::{spanning_path, PathResult, SpannerConstants};
