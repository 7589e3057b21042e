use num_traits::{One, Signed, Zero};

use crate::error::{ensure, Error, Result};
use crate::lattice::{short_vectors, ZLattice};
use crate::linalg::{det, inverse, lattice_basis, rat, IntMat, RatMat, Rational};
use crate::quat::{Order, QuatElement};

/// Rank-8 lattice in `A × A` stable under right multiplication by 𝒪.
///
/// Vectors are written in ambient coordinates: the order coordinates of the
/// first component followed by those of the second. The ambient form is
/// `(x, y)·(x', y') = tr(x̄x') + s·tr(ȳy')`; `s = 1` is the usual
/// `f₀ = n(u) + n(v)`, and `s = 1/D_A` models the second factor scaled by
/// `1/√D_A`.
#[derive(Clone, Debug)]
pub struct OLattice {
    pub order: Order,
    pub lattice: ZLattice,
    /// rows = lattice basis in ambient coordinates
    pub basis: RatMat,
    pub scale: Rational,
    /// `action[i]`: right multiplication by `bᵢ` on lattice coordinates (row convention)
    pub action: Vec<IntMat>,
    /// `(e₁, e₂)` in ambient coordinates
    pub obasis: Option<(Vec<Rational>, Vec<Rational>)>,
    basis_inv: RatMat,
}

impl OLattice {
    pub fn new(order: Order, basis: RatMat, scale: Rational) -> Result<OLattice> {
        if basis.rows() != 8 || basis.cols() != 8 {
            return Err(Error::Dimension("an O-lattice basis is 8×8".into()));
        }
        let basis = lattice_basis(&basis);
        if basis.rows() != 8 {
            return Err(Error::RankDeficient);
        }
        let basis_inv = inverse(&basis)?;
        let amb = ambient_gram(&order, &scale);
        let lattice = ZLattice::new(&(&basis * &amb) * &basis.transpose())?;
        let mut action = Vec::with_capacity(4);
        for i in 0..4 {
            let r = order.right_mul(i).to_rat();
            let big = RatMat::block_diag(&r, &r);
            let a = &(&basis * &big) * &basis_inv;
            let a = a
                .to_int()
                .ok_or_else(|| Error::NotClosed(format!("lattice is not stable under right multiplication by {}", order.basis[i])))?;
            action.push(a);
        }
        Ok(OLattice {
            order,
            lattice,
            basis,
            scale,
            action,
            obasis: None,
            basis_inv,
        })
    }

    pub fn gram(&self) -> &RatMat {
        self.lattice.gram()
    }

    pub fn to_ambient(&self, c: &[Rational]) -> Vec<Rational> {
        self.basis.left_mul_vec(c)
    }

    pub fn to_coords(&self, w: &[Rational]) -> Vec<Rational> {
        self.basis_inv.left_mul_vec(w)
    }

    pub fn contains(&self, w: &[Rational]) -> bool {
        self.to_coords(w).iter().all(|c| c.is_integer())
    }

    /// The pair of quaternions `(x, y)` with ambient coordinates `w`.
    pub fn pair(&self, w: &[Rational]) -> (QuatElement, QuatElement) {
        (self.order.element_rat(&w[..4]), self.order.element_rat(&w[4..]))
    }

    pub fn from_pair(&self, x: &QuatElement, y: &QuatElement) -> Vec<Rational> {
        let mut w = self.order.coords(x);
        w.extend(self.order.coords(y));
        w
    }

    /// `w·x = (x₁x, y₁x)`.
    pub fn mul_right(&self, w: &[Rational], x: &QuatElement) -> Vec<Rational> {
        let (a, b) = self.pair(w);
        self.from_pair(&self.order.mul(&a, x), &self.order.mul(&b, x))
    }

    /// `h(w', w) = x̄x' + s·ȳy'`.
    pub fn h(&self, w1: &[Rational], w2: &[Rational]) -> QuatElement {
        let (x1, y1) = self.pair(w1);
        let (x2, y2) = self.pair(w2);
        let a = self.order.mul(&x2.conj(), &x1);
        let b = self.order.mul(&y2.conj(), &y1).scale(&self.scale);
        &a + &b
    }

    /// `f₀(w) = w·w/2`.
    pub fn f0(&self, w: &[Rational]) -> Rational {
        let (x, y) = self.pair(w);
        self.order.norm(&x) + &self.scale * self.order.norm(&y)
    }

    /// Determinant (in lattice coordinates) of the 8 vectors `eₐbᵢ`.
    pub fn obasis_det(&self, e1: &[Rational], e2: &[Rational]) -> Rational {
        let mut rows = Vec::with_capacity(8);
        for e in [e1, e2] {
            for b in &self.order.basis {
                rows.push(self.to_coords(&self.mul_right(e, b)));
            }
        }
        det(&RatMat::from_rows(&rows)).expect("square")
    }

    pub fn is_obasis(&self, e1: &[Rational], e2: &[Rational]) -> bool {
        self.contains(e1) && self.contains(e2) && self.obasis_det(e1, e2).abs() == Rational::one()
    }

    pub fn set_obasis(&mut self, e1: Vec<Rational>, e2: Vec<Rational>) -> Result<()> {
        if !self.is_obasis(&e1, &e2) {
            return Err(Error::NoObasis);
        }
        self.obasis = Some((e1, e2));
        Ok(())
    }

    /// Vectors with `w·w = 2`, in ambient coordinates, sorted by lattice coordinates.
    pub fn roots(&self) -> Result<Vec<Vec<Rational>>> {
        self.vectors_of_norm_at_most(&rat(2))
    }

    pub fn vectors_of_norm_at_most(&self, bound: &Rational) -> Result<Vec<Vec<Rational>>> {
        let sv = short_vectors(self.gram(), bound)?;
        Ok(sv
            .vectors
            .iter()
            .map(|(_, c)| {
                let c: Vec<Rational> = c.iter().map(|v| Rational::from_integer(v.clone())).collect();
                self.to_ambient(&c)
            })
            .collect())
    }

    /// Same subset of `A × A` and same ambient form.
    pub fn same_lattice(&self, other: &OLattice) -> bool {
        self.scale == other.scale && self.order.same_lattice(&other.order) && self.basis == other.basis
    }

    /// `A·G·Aᵀ = n(x)·G` for the basis elements and all their pairwise
    /// products, and `A(bᵢbⱼ) = A(bᵢ)A(bⱼ)`.
    pub fn check_action(&self) -> Result<()> {
        let g = self.gram();
        let o = &self.order;
        let mut elements: Vec<(QuatElement, IntMat)> =
            (0..4).map(|i| (o.basis[i].clone(), self.action[i].clone())).collect();
        for i in 0..4 {
            for j in 0..4 {
                let coords = o.right_mul(j).row(i).to_vec();
                let mut m = IntMat::zeros(8, 8);
                for (k, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        for r in 0..8 {
                            for s in 0..8 {
                                let t = c * &self.action[k][(r, s)];
                                m[(r, s)] += t;
                            }
                        }
                    }
                }
                ensure!(
                    &self.action[i] * &self.action[j] == m,
                    "action does not respect the multiplication table at ({i}, {j})"
                );
                elements.push((o.mul(&o.basis[i], &o.basis[j]), m));
            }
        }
        for (x, a) in &elements {
            let ar = a.to_rat();
            let lhs = &(&ar * g) * &ar.transpose();
            ensure!(lhs == g.scale(&o.norm(x)), "right multiplication by {x} is not a similitude of ratio n(x)");
        }
        Ok(())
    }
}

fn ambient_gram(order: &Order, scale: &Rational) -> RatMat {
    RatMat::block_diag(&order.gram, &order.gram.scale(scale))
}

/// Even, det 1, min 2, 240 roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E8Invariants {
    pub is_even: bool,
    pub det: Rational,
    pub minimum: Rational,
    pub root_count: usize,
}

impl E8Invariants {
    pub fn of(l: &ZLattice) -> Result<E8Invariants> {
        let sv = short_vectors(l.gram(), &rat(2))?;
        let minimum = match sv.min.clone() {
            Some(m) => m,
            None => l.minimum()?,
        };
        Ok(E8Invariants {
            is_even: l.is_even(),
            det: l.det(),
            minimum,
            root_count: sv.count_with_norm(&rat(2)),
        })
    }

    /// An even unimodular lattice of rank 8 is E₈; min and roots are checked as well.
    pub fn is_e8(&self) -> bool {
        self.is_even && self.det == Rational::one() && self.minimum == rat(2) && self.root_count == 240
    }
}

/// Search an 𝒪-basis among pairs of vectors with `f₀ ≤ 1`, then `f₀ ≤ 2`.
pub fn find_obasis(l: &OLattice) -> Result<(Vec<Rational>, Vec<Rational>)> {
    for bound in [rat(2), rat(4)] {
        let vs = l.vectors_of_norm_at_most(&bound)?;
        for e1 in &vs {
            for e2 in &vs {
                if l.is_obasis(e1, e2) {
                    return Ok((e1.clone(), e2.clone()));
                }
            }
        }
    }
    Err(Error::NoObasis)
}

pub(crate) fn abs_det(m: &RatMat) -> Result<Rational> {
    Ok(det(m)?.abs())
}
