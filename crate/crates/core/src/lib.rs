//! Constructive translation-like actions by the integers on locally finite
//! graphs and finitely generated groups with decidable word problem.

pub mod action;
pub mod config;
pub mod decidability;
pub mod error;
pub mod extenders;
pub mod fuel;
pub mod graph;
pub mod groups;
pub mod paths;
pub mod stallings;
pub mod subshift;
pub mod verify;

/// Vertices are named by natural numbers through a numbering.
pub type Vertex = u128;

pub use error::{Error, Result};
pub use fuel::Fuel;
