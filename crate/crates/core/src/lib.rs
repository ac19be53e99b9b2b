//! Bruhat-shaped cochain complexes over GF(2) whose Euler characteristics are
//! generalized Vandermonde determinants.
//!
//! The pipeline is: a [`linkdiag::LinkDiagram`] with ordered crossings and a
//! [`complex::ColorVector`] give, for every permutation in the Bruhat order,
//! a tensor product of the special Frobenius algebras `A_x = GF(2)^x`
//! ([`tqft`]); cover relations become merge/split maps and the resulting
//! cochain complex is analysed with the packed GF(2) kernel in [`gf2`].
//! [`zndiag`] adds the maps induced by arc-and-dot morphisms between color
//! vectors, and [`gendet`] holds exact determinants plus the unit/counit
//! complexes for arbitrary positive integer matrices.

pub mod bruhat;
pub mod checks;
pub mod complex;
pub mod error;
pub mod gendet;
pub mod gf2;
pub mod linkdiag;
pub mod tqft;
pub mod zndiag;

pub use bruhat::{build_bruhat, BruhatPoset, Permutation};
pub use complex::{
    build_complex, homology, order_independence_check, verify_euler, CochainComplex,
    ColorVector, ComplexLayout, HomologyReport,
};
pub use error::{Error, Result};
pub use gf2::{GF2Matrix, GF2Vector};
pub use linkdiag::{parse_diagram, torus_two_n, LinkDiagram, SmoothingProfile};
pub use zndiag::{chain_map, induced_cohomology_map, ZndiagMorphism};
