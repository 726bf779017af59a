//! Shortest paths, homotopy classes and evader territories.

mod arrangement;
mod homotopy;
mod paths;
mod region;
mod territory;

use thiserror::Error;

use crate::geom::Point;

pub use arrangement::{environment_segments, Arrangement, Face, LabeledSegment};
pub use homotopy::{interior_point, HomotopySignature, RaySystem};
pub use paths::{
    find_split_point, find_split_point_on, find_split_point_with, is_minimal_path, path_projection,
    second_shortest_path, snip_segment, third_path, Projector, SplitPoint, PROBE_WALL,
    SPLIT_SAMPLES,
};
pub use region::{Anchor, BoundaryLoop, EdgeLabel, Field, Region, ShortestPath, VertexId};
pub use territory::{
    half_perimeter_point, Anchors, ArcKind, BoundaryArc, Cut, FaceChoice, GeodesicPath, RegionType,
    Territory, Wall,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("no free face contains the query point")]
    NoFace,
    #[error("no path from {0:?} to {1:?}")]
    NoPath(Point, Point),
    #[error("operation needs a territory of type {expected}, found {found}")]
    WrongType {
        expected: &'static str,
        found: RegionType,
    },
    #[error("no split point found on the boundary arc")]
    NoSplit,
    #[error("path does not touch obstacle {0}")]
    NoTouch(usize),
}
