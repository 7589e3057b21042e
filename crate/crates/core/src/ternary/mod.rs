//! Ternary lattices attached to maximal orders: `L(𝒪)`, the transform
//! `M(L; d)`, the sets ℛ(d) and 𝒮(d), and the principal-different table.

mod clifford;
mod enumerate;
mod lattice;
mod table;

pub use clifford::{even_clifford_order, generated_order_contained_in, order_from_ternary};
pub use enumerate::{
    class_index, enumerate_even, enumerate_r, enumerate_s, first_coefficient_is_two, reduced_candidates,
};
pub use lattice::{
    genus_symbol, genus_symbols, is_in_r, is_in_s, is_in_s_by_residue, is_in_s_by_symbols, m_transform,
    trace_zero_lattice, GenusSymbol, Provenance, TernaryLattice,
};
pub use table::{admissible_up_to, class_number, deuring_check, table, table_row, TableRow};

use crate::error::{ensure, Result};
use crate::linalg::{bilinear, rat};
use crate::quat::{different_generator, enumerate_by_norm, Order};

/// The five equivalent conditions for a maximal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Theorem25Report {
    /// ℳ is principal
    pub principal_different: bool,
    /// some x ∈ 𝒪 has n(x) = D_A
    pub norm_d: bool,
    /// some x ∈ 𝒪 has x² = -D_A
    pub square_minus_d: bool,
    /// some x ∈ L(𝒪) has x·x = 2D_A and x·L ⊆ D_Aℤ
    pub trace_zero_vector: bool,
    /// M(L(𝒪); D_A) has minimum 2
    pub m_represents_one: bool,
}

impl Theorem25Report {
    pub fn values(&self) -> [bool; 5] {
        [
            self.principal_different,
            self.norm_d,
            self.square_minus_d,
            self.trace_zero_vector,
            self.m_represents_one,
        ]
    }

    pub fn agree(&self) -> bool {
        let v = self.values();
        v.iter().all(|&x| x == v[0])
    }
}

/// Evaluates the five conditions independently; disagreement is an error.
pub fn theorem25_report(o: &Order) -> Result<Theorem25Report> {
    o.require_maximal()?;
    let d = o.discriminant();
    let principal_different = different_generator(o)?.is_some();
    let norm_d = !enumerate_by_norm(o, d, false)?.is_empty();
    let square_minus_d = !enumerate_by_norm(o, d, true)?.is_empty();
    let l = trace_zero_lattice(o)?;
    let g = l.gram();
    let target = rat(2 * d as i64);
    let dr = rat(d as i64);
    let sv = l.lattice.shortest_vectors(&target)?;
    let trace_zero_vector = sv.vectors.iter().filter(|(q, _)| *q == target).any(|(_, x)| {
        let x: Vec<_> = x.iter().map(|c| crate::linalg::Rational::from_integer(c.clone())).collect();
        (0..3).all(|i| {
            let mut e = vec![rat(0); 3];
            e[i] = rat(1);
            (bilinear(g, &x, &e) / &dr).is_integer()
        })
    });
    let m_represents_one = m_transform(&l, d)?.represents_one()?;
    let report = Theorem25Report {
        principal_different,
        norm_d,
        square_minus_d,
        trace_zero_vector,
        m_represents_one,
    };
    ensure!(report.agree(), "the five conditions disagree: {:?}", report.values());
    Ok(report)
}
