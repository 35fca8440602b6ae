//! Period-doubling renormalization of Hénon-like maps.
//!
//! - [`unimodal`]: the one-dimensional fixed point, cycles, proper scaling, distortion
//! - [`henon`]: Hénon-like maps, the renormalization tower, tip, average Jacobian, tilt
//! - [`geometry`]: piece rectangles, sticks, thickness, scaling numbers, precision, dimension
//! - [`combinatorics`]: words, depths, control functions, controlled-piece counting, the walk
//! - [`experiments`]: configured pipelines, reports and the command line front-end

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cheb;
pub mod combinatorics;
pub mod experiments;
pub mod geometry;
pub mod henon;
pub mod unimodal;
