//! Geometry of pieces of the Cantor attractor: rectangles, thickness, scaling, sticks, dimension.

mod dimension;
mod pieces;
mod rect;
mod stick;
mod tangent;

pub use dimension::{dimension_by_level, hausdorff_dimension_estimate, level_sigmas, DimensionEstimate};
pub use pieces::{
    analyze_level, analyze_piece, classify_universal, measure_d1, own_scale_cloud, piece_sigma, view_from_scale,
    PieceGeometry, ProperScalings, Universality,
};
pub use rect::{bounding_rectangle, regularity, scaling_number, thickness, Orientation, Point, Rect};
pub use stick::{convex_hull, min_width_direction, precision, principal_axis, stick_at_angle, Conformal, Stick};
pub use tangent::{line_distance, tangent_estimate, TangentEstimate};

use thiserror::Error;

use crate::henon::HenonError;
use crate::unimodal::UnimodalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("rectangle has zero size")]
    DegenerateRectangle,
    #[error("child cloud projects outside the parent frame")]
    ChildOutsideFrame,
    #[error("level {level} exceeds the available depth {depth}")]
    TooDeep { level: usize, depth: usize },
    #[error(transparent)]
    Henon(#[from] HenonError),
    #[error(transparent)]
    Unimodal(#[from] UnimodalError),
}
