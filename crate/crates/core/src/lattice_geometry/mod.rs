//! Lattice polytopes: hulls, faces, lattice bases, distances, volumes and
//! lattice points.

mod hull;
pub mod linalg;
mod polytope;

pub use hull::Halfspace;
pub(crate) use hull::vertices_of_halfspaces;
pub use linalg::{content, dot, hermite_basis, int_kernel, primitive, row_hnf, Chart, IntVec};
pub use polytope::{Apex, Face, FaceLattice, LatticePolytope};

use crate::error::Result;

pub fn lattice_distance(face: &LatticePolytope) -> Result<i64> {
    face.lattice_distance()
}

pub fn normalized_volume(poly: &LatticePolytope) -> u64 {
    poly.normalized_volume()
}

pub fn lattice_points(poly: &LatticePolytope, dilate: i64) -> Vec<IntVec> {
    poly.lattice_points(dilate)
}
