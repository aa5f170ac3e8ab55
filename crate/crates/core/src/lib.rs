//! Circular graph layouts with few bundled crossings.
//!
//! The crate models circular drawings combinatorially (crossing orders along
//! edges), validates partitions of their crossings into bundled crossings,
//! builds layouts with provable bundle counts, reports lower bounds, solves
//! tiny instances exactly, and handles block crossings of metro lines on trees.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod layout;
pub mod metro;
pub mod model;
pub mod oracle;
pub mod simplify;
pub mod svg;

pub use error::{Error, Result};
