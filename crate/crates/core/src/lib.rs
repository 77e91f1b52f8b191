//! Exact exterior calculus and quaternionic gauge theory for verifying
//! identities about G2-structures and G2-instantons on the 7-sphere.

pub mod check;
pub mod deformation;
pub mod error;
pub mod exact;
pub mod exterior;
pub mod instanton;
pub mod quaternion;
pub mod registry;
pub mod report;
pub mod sphere;
pub mod structures;

pub use error::{Error, Result};
