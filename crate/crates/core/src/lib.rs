//! Exact arithmetic for definite rational quaternion algebras, their maximal
//! orders, the E₈-isometric lattices they carry, Hamiltonian binary forms and
//! the correspondence with ternary lattices.

pub mod arith;
pub mod error;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod quat;
pub mod ternary;

pub use error::{Error, Result};
