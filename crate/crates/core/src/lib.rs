//! Exact construction and verification of cluster scattering diagrams of acyclic affine type.

pub mod almost_positive;
pub mod cartan;
pub mod cone;
pub mod dynkin;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod mutation;
pub mod rational;
pub mod scattering;
pub mod shards;
pub mod series;
pub mod sortable;
pub mod weyl;

pub use error::{Error, Result};
