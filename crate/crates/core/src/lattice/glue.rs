use num_traits::Zero;

use super::qe::{residue, Element, QeModule};
use super::zlattice::ZLattice;
use crate::error::{ensure, Error, Result};
use crate::linalg::{lattice_basis, RatMat, Rational};

/// Subgroup of a residue module given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Element>,
}

/// Overlattice of `L` together with its basis in L-coordinates.
#[derive(Clone, Debug)]
pub struct Glued {
    pub lattice: ZLattice,
    pub basis: RatMat,
    pub subgroup_order: u64,
}

/// Preimage of an isotropic subgroup `I ⊆ L♯/L`; `res` must be `residue(l)`.
pub fn glue(l: &ZLattice, res: &QeModule, i: &SubgroupSpec) -> Result<Glued> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let span = res.span(&i.generators);
    if !span.iter().all(|x| res.q(x).is_zero()) {
        return Err(Error::NotIsotropic);
    }
    let n = l.rank();
    let mut rows = RatMat::identity(n).row_vecs();
    rows.extend(i.generators.iter().map(|g| res.lift(g)));
    let basis = lattice_basis(&RatMat::from_rows(&rows));
    let lattice = l.sublattice(&basis)?;
    let order = span.len() as u64;
    let expected = l.det() / Rational::from_integer((order * order).into());
    ensure!(lattice.det() == expected, "glued determinant {} differs from det L/|I|² = {}", lattice.det(), expected);
    ensure!(lattice.is_even(), "glue along an isotropic subgroup produced an odd lattice");
    let r = residue(&lattice)?;
    ensure!(
        Rational::from_integer(r.order().into()) == expected,
        "residue of the glued lattice has order {}",
        r.order()
    );
    Ok(Glued {
        lattice,
        basis,
        subgroup_order: order,
    })
}
