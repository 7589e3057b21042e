use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::algebra::{QuatElement, QuaternionAlgebra};
use crate::arith::prime_divisors;
use crate::error::{Error, Result};
use crate::linalg::{
    det, det_int, det_sym, exact_sqrt, hnf_basis, inverse, kernel_mod, lattice_basis, solve_row, IntMat, RatMat,
    Rational,
};

/// A ℤ-order of rank 4 in a definite quaternion algebra.
#[derive(Clone)]
pub struct Order {
    pub algebra: QuaternionAlgebra,
    pub basis: [QuatElement; 4],
    /// `tr(b̄ᵢ bⱼ)`
    pub gram: RatMat,
    pub reduced_discriminant: u64,
    basis_mat: RatMat,
    basis_inv: RatMat,
    // right_mul[i] row r = coordinates of b_r·b_i
    right_mul: Vec<IntMat>,
    left_mul: Vec<IntMat>,
}

impl Order {
    /// Validates `basis` as an order: rank 4, contains 1, integral, closed.
    pub fn new(algebra: QuaternionAlgebra, basis: [QuatElement; 4]) -> Result<Order> {
        let basis_mat = RatMat::from_rows(&basis.iter().map(|b| b.0.to_vec()).collect::<Vec<_>>());
        if det(&basis_mat)?.is_zero() {
            return Err(Error::RankDeficient);
        }
        let basis_inv = inverse(&basis_mat)?;
        let coords = |x: &QuatElement| basis_inv.left_mul_vec(&x.0);
        if !coords(&QuatElement::one()).iter().all(|c| c.is_integer()) {
            return Err(Error::NoUnit);
        }
        for b in &basis {
            let (t, n) = algebra.trace_norm(b);
            if !t.is_integer() || !n.is_integer() {
                return Err(Error::NotIntegral(b.to_string()));
            }
        }
        let mut right_mul = vec![IntMat::zeros(4, 4); 4];
        let mut left_mul = vec![IntMat::zeros(4, 4); 4];
        for r in 0..4 {
            for i in 0..4 {
                let prod = algebra.mul(&basis[r], &basis[i]);
                let c = coords(&prod);
                if !c.iter().all(|x| x.is_integer()) {
                    return Err(Error::NotClosed(format!("({})·({}) = {}", basis[r], basis[i], prod)));
                }
                for t in 0..4 {
                    right_mul[i][(r, t)] = c[t].to_integer();
                    left_mul[r][(i, t)] = c[t].to_integer();
                }
            }
        }
        let mut gram = RatMat::zeros(4, 4);
        for r in 0..4 {
            for s in 0..4 {
                gram[(r, s)] = algebra.inner(&basis[r], &basis[s]);
            }
        }
        let d = det_sym(&gram)?;
        let reduced_discriminant = exact_sqrt(&d.to_integer())
            .and_then(|s| s.to_u64())
            .ok_or_else(|| Error::Check(format!("Gram determinant {d} of an order is not a square")))?;
        Ok(Order {
            algebra,
            basis,
            gram,
            reduced_discriminant,
            basis_mat,
            basis_inv,
            right_mul,
            left_mul,
        })
    }

    /// Order spanned by the rows (coordinates in 1, i, j, k) of a rational matrix.
    pub fn from_matrix(algebra: QuaternionAlgebra, rows: &RatMat) -> Result<Order> {
        if rows.rows() != 4 || rows.cols() != 4 {
            return Err(Error::Dimension("an order basis is a 4×4 matrix".into()));
        }
        let basis = std::array::from_fn(|r| QuatElement(std::array::from_fn(|t| rows[(r, t)].clone())));
        Order::new(algebra, basis)
    }

    pub fn discriminant(&self) -> u64 {
        self.algebra.discriminant
    }

    /// Rows are the basis elements in the coordinates (1, i, j, k).
    pub fn basis_matrix(&self) -> &RatMat {
        &self.basis_mat
    }

    /// Coordinates of `x` in the order basis (rational in general).
    pub fn coords(&self, x: &QuatElement) -> Vec<Rational> {
        self.basis_inv.left_mul_vec(&x.0)
    }

    /// Integer coordinates, `None` when `x ∉ 𝒪`.
    pub fn int_coords(&self, x: &QuatElement) -> Option<Vec<BigInt>> {
        let c = self.coords(x);
        c.iter().all(|v| v.is_integer()).then(|| c.iter().map(|v| v.to_integer()).collect())
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.int_coords(x).is_some()
    }

    pub fn element(&self, c: &[BigInt]) -> QuatElement {
        let r: Vec<Rational> = c.iter().map(|v| Rational::from_integer(v.clone())).collect();
        self.element_rat(&r)
    }

    pub fn element_rat(&self, c: &[Rational]) -> QuatElement {
        let v = self.basis_mat.left_mul_vec(c);
        QuatElement(std::array::from_fn(|t| v[t].clone()))
    }

    /// Matrix of `y ↦ y·bᵢ` on order coordinates (row convention).
    pub fn right_mul(&self, i: usize) -> &IntMat {
        &self.right_mul[i]
    }

    /// Matrix of `y ↦ bᵢ·y` on order coordinates (row convention).
    pub fn left_mul(&self, i: usize) -> &IntMat {
        &self.left_mul[i]
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        self.algebra.mul(x, y)
    }

    pub fn norm(&self, x: &QuatElement) -> Rational {
        self.algebra.norm(x)
    }

    /// Integer matrix `tr(bᵢ bⱼ)`.
    pub fn trace_form(&self) -> IntMat {
        let mut t = IntMat::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                t[(i, j)] = self.mul(&self.basis[i], &self.basis[j]).trace().to_integer();
            }
        }
        t
    }

    pub fn is_maximal(&self) -> bool {
        self.reduced_discriminant == self.algebra.discriminant
    }

    pub fn require_maximal(&self) -> Result<()> {
        if self.is_maximal() {
            Ok(())
        } else {
            Err(Error::NotMaximal {
                disc: self.reduced_discriminant.to_string(),
                alg: self.algebra.discriminant.to_string(),
            })
        }
    }

    /// Same ℤ-lattice in A (bases may differ).
    pub fn same_lattice(&self, other: &Order) -> bool {
        self.algebra == other.algebra && lattice_basis(&self.basis_mat) == lattice_basis(&other.basis_mat)
    }

    pub fn contains_order(&self, other: &Order) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }
}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Order[{}; ", self.algebra)?;
        for (t, b) in self.basis.iter().enumerate() {
            if t > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// `order_from_basis`.
pub fn order_from_basis(algebra: QuaternionAlgebra, basis: [QuatElement; 4]) -> Result<Order> {
    Order::new(algebra, basis)
}

/// Full-rank sublattice of an order, stored in order coordinates as an HNF basis.
#[derive(Clone, Debug)]
pub struct Sublattice<'a> {
    pub order: &'a Order,
    pub basis: IntMat,
}

impl<'a> Sublattice<'a> {
    pub fn from_rows(order: &'a Order, rows: &IntMat) -> Result<Self> {
        let basis = hnf_basis(rows);
        if basis.rows() != 4 {
            return Err(Error::RankDeficient);
        }
        Ok(Sublattice { order, basis })
    }

    /// `x𝒪`, for `x ∈ 𝒪`.
    pub fn right_ideal(order: &'a Order, x: &QuatElement) -> Result<Self> {
        Self::generated(order, |b| order.mul(x, b))
    }

    /// `𝒪x`, for `x ∈ 𝒪`.
    pub fn left_ideal(order: &'a Order, x: &QuatElement) -> Result<Self> {
        Self::generated(order, |b| order.mul(b, x))
    }

    fn generated(order: &'a Order, f: impl Fn(&QuatElement) -> QuatElement) -> Result<Self> {
        let rows: Option<Vec<Vec<BigInt>>> = order.basis.iter().map(|b| order.int_coords(&f(b))).collect();
        let rows = rows.ok_or_else(|| Error::InvalidArgument("generator is not in the order".into()))?;
        Self::from_rows(order, &IntMat::from_rows(&rows))
    }

    pub fn index(&self) -> BigInt {
        det_int(&self.basis).abs()
    }

    pub fn elements(&self) -> Vec<QuatElement> {
        (0..4).map(|r| self.order.element(self.basis.row(r))).collect()
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        match self.order.int_coords(x) {
            None => false,
            Some(c) => {
                let c: Vec<Rational> = c.into_iter().map(Rational::from_integer).collect();
                solve_row(&self.basis.to_rat(), &c).is_ok_and(|y| y.iter().all(|v| v.is_integer()))
            }
        }
    }

    pub fn is_right_ideal(&self) -> bool {
        let els = self.elements();
        els.iter()
            .all(|x| self.order.basis.iter().all(|b| self.contains(&self.order.mul(x, b))))
    }

    pub fn is_left_ideal(&self) -> bool {
        let els = self.elements();
        els.iter()
            .all(|x| self.order.basis.iter().all(|b| self.contains(&self.order.mul(b, x))))
    }

    pub fn is_two_sided(&self) -> bool {
        self.is_right_ideal() && self.is_left_ideal()
    }
}

impl PartialEq for Sublattice<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.order.same_lattice(other.order) && self.basis == other.basis
    }
}

/// `{x ∈ 𝒪 : tr(x𝒪) ⊆ D_A ℤ}` for a maximal order.
pub fn different(o: &Order) -> Result<Sublattice<'_>> {
    o.require_maximal()?;
    let d = BigInt::from(o.discriminant());
    // x = Σ cᵢ bᵢ lies in ℳ iff Σᵢ cᵢ tr(bᵢ bⱼ) ≡ 0 (mod D) for every j
    let k = kernel_mod(&o.trace_form(), &d);
    let m = Sublattice::from_rows(o, &k)?;
    crate::error::ensure!(
        m.index() == &d * &d,
        "different has index {} instead of D_A² = {}",
        m.index(),
        &d * &d
    );
    Ok(m)
}

/// A maximal order containing `o`.
///
/// While the index `[𝒪_max : 𝒪] = disc(𝒪)/D_A` is divisible by a prime p,
/// some `x ∈ (1/p)𝒪 − 𝒪` generates together with 𝒪 a larger order; such an
/// x is found by trying all `(Σ cᵢ bᵢ)/p` with `0 ≤ cᵢ < p`.
pub fn maximalize(o: &Order) -> Result<Order> {
    let mut cur = o.clone();
    while !cur.is_maximal() {
        let index = cur.reduced_discriminant / cur.discriminant();
        let p = *prime_divisors(index)
            .first()
            .ok_or_else(|| Error::Check("order discriminant not a multiple of D_A".into()))?;
        cur = enlarge_at(&cur, p)?.ok_or_else(|| {
            Error::Check(format!("no enlargement at p = {p} of a non-maximal order"))
        })?;
    }
    Ok(cur)
}

fn enlarge_at(o: &Order, p: u64) -> Result<Option<Order>> {
    let pi = p as i64;
    let inv_p = Rational::new(BigInt::one(), BigInt::from(p));
    let mut c = [0i64; 4];
    loop {
        // next c in lexicographic order; the all-zero vector is skipped
        let mut t = 3;
        loop {
            c[t] += 1;
            if c[t] < pi {
                break;
            }
            c[t] = 0;
            if t == 0 {
                return Ok(None);
            }
            t -= 1;
        }
        let coeffs: Vec<Rational> = c.iter().map(|&v| Rational::from_integer(BigInt::from(v)) * &inv_p).collect();
        let x = o.element_rat(&coeffs);
        let (tr, n) = o.algebra.trace_norm(&x);
        if !tr.is_integer() || !n.is_integer() {
            continue;
        }
        let mut gens = o.basis_mat.clone();
        gens = gens.vstack(&RatMat::from_rows(&[x.0.to_vec()]));
        if let Some(rows) = ring_closure(&o.algebra, &gens) {
            return Order::from_matrix(o.algebra.clone(), &rows).map(Some);
        }
    }
}

/// Smallest ring containing the row lattice of `gens` (which must contain a
/// full-rank order), or `None` once a non-integral element appears.
fn ring_closure(alg: &QuaternionAlgebra, gens: &RatMat) -> Option<RatMat> {
    let mut cur = lattice_basis(gens);
    loop {
        if cur.rows() != 4 {
            return None;
        }
        let els: Vec<QuatElement> = (0..4)
            .map(|r| QuatElement(std::array::from_fn(|t| cur[(r, t)].clone())))
            .collect();
        for x in &els {
            let (t, n) = alg.trace_norm(x);
            if !t.is_integer() || !n.is_integer() {
                return None;
            }
        }
        // tr(x̄y) integral keeps the Gram determinant a positive integer, which
        // strictly decreases as the lattice grows
        for x in &els {
            for y in &els {
                if !alg.inner(x, y).is_integer() {
                    return None;
                }
            }
        }
        let mut rows = cur.row_vecs();
        for x in &els {
            for y in &els {
                rows.push(alg.mul(x, y).0.to_vec());
            }
        }
        let next = lattice_basis(&RatMat::from_rows(&rows));
        if next == cur {
            return Some(cur);
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, int, rat};

    fn hurwitz() -> Order {
        let alg = QuaternionAlgebra::from_i64(-1, -1).unwrap();
        Order::new(
            alg,
            [
                QuatElement::from_frac([1, 1, 1, 1], 2),
                QuatElement::basis(1),
                QuatElement::basis(2),
                QuatElement::basis(3),
            ],
        )
        .unwrap()
    }

    fn lipschitz() -> Order {
        let alg = QuaternionAlgebra::from_i64(-1, -1).unwrap();
        Order::new(alg, std::array::from_fn(QuatElement::basis)).unwrap()
    }

    #[test]
    fn hurwitz_gram_and_discriminant() {
        let o = hurwitz();
        assert_eq!(det_sym(&o.gram).unwrap(), rat(4));
        assert_eq!(o.reduced_discriminant, 2);
        assert!(o.is_maximal());
    }

    #[test]
    fn lipschitz_is_not_maximal() {
        let o = lipschitz();
        assert_eq!(det_sym(&o.gram).unwrap(), rat(16));
        assert_eq!(o.reduced_discriminant, 4);
        assert!(!o.is_maximal());
        let m = maximalize(&o).unwrap();
        assert_eq!(m.reduced_discriminant, 2);
        assert!(m.contains_order(&o));
        assert!(m.same_lattice(&hurwitz()));
        // idempotent on maximal orders
        assert!(maximalize(&m).unwrap().same_lattice(&m));
    }

    #[test]
    fn d13_order() {
        let alg = QuaternionAlgebra::from_i64(-2, -13).unwrap();
        let o = Order::new(
            alg,
            [
                QuatElement::one(),
                QuatElement::basis(1),
                QuatElement::from_frac([1, 1, -1, 0], 2),
                QuatElement::from_frac([2, 1, 0, 1], 4),
            ],
        )
        .unwrap();
        assert_eq!(o.reduced_discriminant, 13);
        assert!(o.is_maximal());
    }

    #[test]
    fn validation_errors() {
        let alg = QuaternionAlgebra::from_i64(-1, -1).unwrap();
        let no_unit = [
            QuatElement::from_i64([2, 0, 0, 0]),
            QuatElement::basis(1),
            QuatElement::basis(2),
            QuatElement::basis(3),
        ];
        assert!(matches!(Order::new(alg.clone(), no_unit), Err(Error::NoUnit)));
        let not_integral = [
            QuatElement::one(),
            QuatElement::from_frac([0, 1, 0, 0], 2),
            QuatElement::basis(2),
            QuatElement::basis(3),
        ];
        assert!(matches!(Order::new(alg.clone(), not_integral), Err(Error::NotIntegral(_))));
        // ℤ + ℤi + ℤ2j + ℤk: i·k = -j leaves the lattice
        let not_closed = [
            QuatElement::one(),
            QuatElement::basis(1),
            QuatElement::from_i64([0, 0, 2, 0]),
            QuatElement::basis(3),
        ];
        assert!(matches!(Order::new(alg.clone(), not_closed), Err(Error::NotClosed(_))));
        let flat = [QuatElement::one(), QuatElement::basis(1), QuatElement::basis(1), QuatElement::basis(3)];
        assert!(matches!(Order::new(alg, flat), Err(Error::RankDeficient)));
    }

    #[test]
    fn hurwitz_different_is_generated_by_1_plus_i() {
        let o = hurwitz();
        let m = different(&o).unwrap();
        assert_eq!(m.index(), int(4));
        assert!(m.is_two_sided());
        let pi = QuatElement::from_i64([1, 1, 0, 0]);
        assert_eq!(Sublattice::right_ideal(&o, &pi).unwrap(), m);
        assert_eq!(Sublattice::left_ideal(&o, &pi).unwrap(), m);
        for x in m.elements() {
            assert!((o.norm(&x) / rat(2)).is_integer());
        }
        assert!(different(&lipschitz()).is_err());
    }

    #[test]
    fn d11_order_is_maximal_and_j_generates_the_different() {
        let alg = QuaternionAlgebra::from_i64(-1, -11).unwrap();
        let t = QuatElement::from_frac([1, 0, 1, 0], 2);
        let i = QuatElement::basis(1);
        let it = alg.mul(&i, &t);
        let o = Order::new(alg, [QuatElement::one(), t, i, it]).unwrap();
        assert!(o.is_maximal());
        let m = different(&o).unwrap();
        assert_eq!(m.index(), int(121));
        let j = QuatElement::basis(2);
        assert_eq!(Sublattice::right_ideal(&o, &j).unwrap(), m);
        assert_eq!(Sublattice::left_ideal(&o, &j).unwrap(), m);
    }

    #[test]
    fn d11_second_order_by_maximalization() {
        let alg = QuaternionAlgebra::from_i64(-1, -11).unwrap();
        // t' = -1/2 + (i+k)/4
        let t = QuatElement([frac(-1, 2), frac(1, 4), rat(0), frac(1, 4)]);
        assert_eq!(alg.trace_norm(&t), (rat(-1), rat(1)));
        let j = QuatElement::basis(2);
        let jt = alg.mul(&j, &t);
        let o2 = Order::new(alg.clone(), [QuatElement::one(), t.clone(), j, jt]).unwrap();
        assert!(!o2.is_maximal());
        let m = maximalize(&o2).unwrap();
        assert_eq!(m.reduced_discriminant, 11);
        assert!(m.contains_order(&o2));
        assert!(m.contains(&t) && m.contains(&alg.mul(&t, &t)));
    }

    #[test]
    fn multiplication_tables_match_the_algebra() {
        let o = hurwitz();
        for i in 0..4 {
            for r in 0..4 {
                let prod = o.mul(&o.basis[r], &o.basis[i]);
                assert_eq!(o.element(o.right_mul(i).row(r)), prod);
                let prod = o.mul(&o.basis[i], &o.basis[r]);
                assert_eq!(o.element(o.left_mul(i).row(r)), prod);
            }
        }
    }
}
