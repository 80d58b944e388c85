//! The product measure on random continuous structures.
//!
//! A density model assigns a validated density on `[0,1]` to every
//! (relation, identity pattern) key; a flat, prefix-closed cell layout pins
//! one random-stream position to every relation cell; the sampler draws each
//! cell's value independently from the density its pattern selects.

mod density;
mod layout;
mod model;
mod structure;

pub use density::{Density, DensitySpec};
pub use layout::FlatLayout;
pub use model::DensityModel;
pub use structure::{sample_structure, ContinuousStructure};
