//! Milnor fiber invariants of a hypersurface singularity at the origin,
//! computed exactly from the Newton polyhedron of the defining polynomial.

pub mod error;
pub mod lattice_geometry;
pub mod newton_polyhedron;
pub mod numbers;
pub mod poly;
pub mod poset_polynomials;
pub mod subdivision_complex;
pub mod weight;
pub mod weighted_ehrhart;
pub mod milnor_invariants;

pub use error::{Error, Result};
pub use numbers::{Rational, RotationNumber};
