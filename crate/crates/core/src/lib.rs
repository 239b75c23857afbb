//! Exact analysis of simple polytopes presented by conormals and support
//! numbers: center of mass as a function of the support numbers, mass linear
//! functions, facet equivalence, bundle and expansion structure, and the
//! lattice computations attached to smooth polytopes.

pub mod analysis;
pub mod build;
pub mod combin;
pub mod equiv;
pub mod error;
pub mod intlin;
pub mod kpoly;
pub mod linalg;
pub mod masslin;
pub mod polytope;
pub mod rat;
pub mod report;
pub mod structure;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
pub use kpoly::{Calculus, KPoly};
pub use polytope::{Polytope, PolytopeDoc};
pub use rat::Rat;
