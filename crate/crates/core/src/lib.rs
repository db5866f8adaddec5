//! Exact combinatorial patchworking of real algebraic hypersurfaces.
//!
//! A signed lattice triangulation determines a piecewise-linear hypersurface
//! whose topology matches that of a real algebraic hypersurface. This crate
//! builds that hypersurface as a cell complex, computes its Z/2 Betti
//! numbers and Euler characteristic, counts combinatorial critical simplices
//! relative to an external origin, and audits the classical face-count and
//! Hodge-number bounds at finite scale.

pub mod analyze;
pub mod arith;
pub mod bounds;
pub mod complex;
pub mod constructions;
pub mod critical;
pub mod error;
pub mod io;
pub mod lattice;
pub mod par;
pub mod render;
pub mod signs;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{LatticePoint, LatticePolytope, LatticeSimplex, RationalPoint};
