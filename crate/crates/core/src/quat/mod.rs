mod algebra;
mod catalog;
mod elements;
mod order;

pub use algebra::{algebra_from_pair, algebra_with_discriminant, hilbert_symbol, Place, QuatElement, QuaternionAlgebra};
pub use elements::{
    different_generator, elements_up_to_norm, enumerate_by_norm, find_pi_lambda, pick, principal_different_witness,
    unit_group,
};
pub use order::{different, maximalize, order_from_basis, Order, Sublattice};
pub use catalog::{all_presets, parse_preset, preset, preset_names, Preset};
