use num_integer::Integer;
use num_traits::Zero;

use super::enumerate::{cholesky, minimum, short_vectors, ShortVectors};
use crate::error::{Error, Result};
use crate::linalg::{det_sym, inverse, RatMat, Rational};

/// Euclidean ℤ-lattice given by the Gram matrix of a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZLattice {
    gram: RatMat,
}

impl ZLattice {
    /// Checks symmetry and positive definiteness.
    pub fn new(gram: RatMat) -> Result<ZLattice> {
        if !gram.is_symmetric() {
            return Err(Error::Dimension("Gram matrix is not symmetric".into()));
        }
        cholesky(&gram)?;
        Ok(ZLattice { gram })
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Result<ZLattice> {
        ZLattice::new(RatMat::from_i64(n, n, entries))
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> Rational {
        det_sym(&self.gram).expect("Gram matrices are square")
    }

    pub fn is_integral(&self) -> bool {
        self.gram.is_integral()
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| self.gram[(i, i)].to_integer().is_even())
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        crate::linalg::bilinear(&self.gram, x, x)
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        crate::linalg::bilinear(&self.gram, x, y)
    }

    /// Gram matrix of the rows of `basis` (rational coordinates in this lattice's basis).
    pub fn sublattice(&self, basis: &RatMat) -> Result<ZLattice> {
        ZLattice::new(&(basis * &self.gram) * &basis.transpose())
    }

    pub fn scaled(&self, c: &Rational) -> Result<ZLattice> {
        ZLattice::new(self.gram.scale(c))
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &ZLattice) -> ZLattice {
        ZLattice {
            gram: RatMat::block_diag(&self.gram, &other.gram),
        }
    }

    pub fn shortest_vectors(&self, bound: &Rational) -> Result<ShortVectors> {
        short_vectors(&self.gram, bound)
    }

    pub fn minimum(&self) -> Result<Rational> {
        minimum(&self.gram)
    }

    /// Number of vectors with `x·x = n`.
    pub fn count_norm(&self, n: &Rational) -> Result<usize> {
        Ok(self.shortest_vectors(n)?.count_with_norm(n))
    }
}

/// The dual lattice together with its basis in the coordinates of `L`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub lattice: ZLattice,
    /// rows = dual basis vectors in the basis of `L`
    pub basis: RatMat,
}

/// `L♯ = {x : x·L ⊆ ℤ}`; the dual basis is `G⁻¹` in L-coordinates.
pub fn dual(l: &ZLattice) -> Result<Dual> {
    let inv = inverse(l.gram())?;
    Ok(Dual {
        lattice: ZLattice::new(inv.clone())?,
        basis: inv,
    })
}

/// Index of an integral sublattice given by integer coordinates, i.e. |det|.
pub fn index_of(basis: &RatMat) -> Result<Rational> {
    let d = crate::linalg::det(basis)?;
    Ok(if d < Rational::zero() { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};

    #[test]
    fn duals() {
        let z2 = ZLattice::new(RatMat::identity(2)).unwrap();
        assert_eq!(dual(&z2).unwrap().lattice, z2);
        let two = ZLattice::from_i64(1, &[2]).unwrap();
        assert_eq!(dual(&two).unwrap().lattice.gram()[(0, 0)], frac(1, 2));
        let l = ZLattice::from_i64(3, &[2, 1, 0, 1, 4, 1, 0, 1, 6]).unwrap();
        let d = dual(&l).unwrap();
        assert_eq!(d.lattice.det() * l.det(), rat(1));
        assert_eq!(dual(&d.lattice).unwrap().lattice, l);
    }

    #[test]
    fn rejects_indefinite() {
        assert!(ZLattice::from_i64(2, &[1, 2, 2, 1]).is_err());
        assert!(ZLattice::from_i64(2, &[1, 2, 0, 1]).is_err());
    }
}
