//! Spectral simulation and verification toolkit for the derivative
//! nonlinear Schrödinger equation with quasi-periodic initial data.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
