//! 𝒪-lattices in `A × A`, the two E₈ constructions, Hamiltonian binary
//! forms and the unitary-group counts.

mod construct;
mod olattice;

pub use construct::{
    build_glue_lattice, build_lambda_lattice, count_root_pairs, factor_24, form_from_obasis, form_minimum,
    glue_report, lambda_report, orbit_report, pi_lambda_form, verify_gamma2, Construction, E8Report, GlueLattice,
    HamiltonianBinaryForm, OrbitReport,
};
pub use olattice::{find_obasis, E8Invariants, OLattice};
