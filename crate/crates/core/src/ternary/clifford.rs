//! Orders from ternary lattices through the even Clifford algebra.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::lattice::{m_transform, trace_zero_lattice, TernaryLattice};
use crate::error::{ensure, Error, Result};
use crate::lattice::is_isometric;
use crate::linalg::{inverse, rat, RatMat, Rational};
use crate::quat::{Order, QuatElement, QuaternionAlgebra};

// even monomials 1, e₀e₁, e₀e₂, e₁e₂ as bitmasks
const EVEN: [u8; 4] = [0b000, 0b011, 0b101, 0b110];

/// Product of a word in the generators of the Clifford algebra of
/// `Q(x) = x·x/2`, as a combination of increasing monomials.
fn reduce_word(word: &[usize], g: &RatMat) -> BTreeMap<u8, Rational> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(Vec<usize>, Rational)> = vec![(word.to_vec(), rat(1))];
    while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        match (0..w.len().saturating_sub(1)).find(|&t| w[t] >= w[t + 1]) {
            None => {
                let mask = w.iter().fold(0u8, |m, &i| m | (1 << i));
                *out.entry(mask).or_insert_with(Rational::zero) += c;
            }
            Some(t) => {
                let (a, b) = (w[t], w[t + 1]);
                let mut shorter = w[..t].to_vec();
                shorter.extend_from_slice(&w[t + 2..]);
                if a == b {
                    // eₐ² = Q(eₐ)
                    stack.push((shorter, &c * &g[(a, a)] / rat(2)));
                } else {
                    // eₐe_b = -e_be_a + B(eₐ, e_b)
                    let mut swapped = w.clone();
                    swapped.swap(t, t + 1);
                    stack.push((swapped, -c.clone()));
                    stack.push((shorter, c * &g[(a, b)]));
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn word_of(mask: u8) -> Vec<usize> {
    (0..3).filter(|i| mask & (1 << i) != 0).collect()
}

/// Structure constants of `C₀(L)` on the basis `1, e₀e₁, e₀e₂, e₁e₂`:
/// `table[r][s]` = coordinates of `b_r·b_s`.
fn even_clifford_table(g: &RatMat) -> Vec<Vec<Vec<Rational>>> {
    let mut table = vec![vec![vec![rat(0); 4]; 4]; 4];
    for (r, &mr) in EVEN.iter().enumerate() {
        for (s, &ms) in EVEN.iter().enumerate() {
            let mut w = word_of(mr);
            w.extend(word_of(ms));
            for (mask, c) in reduce_word(&w, g) {
                let t = EVEN.iter().position(|&e| e == mask).expect("even times even is even");
                table[r][s][t] = c;
            }
        }
    }
    table
}

struct Table(Vec<Vec<Vec<Rational>>>);

impl Table {
    fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![rat(0); 4];
        for r in 0..4 {
            if x[r].is_zero() {
                continue;
            }
            for s in 0..4 {
                if y[s].is_zero() {
                    continue;
                }
                let c = &x[r] * &y[s];
                for t in 0..4 {
                    out[t] += &c * &self.0[r][s][t];
                }
            }
        }
        out
    }

    /// Reduced trace: half the trace of left multiplication.
    fn trace(&self, x: &[Rational]) -> Rational {
        let mut t = rat(0);
        for r in 0..4 {
            for s in 0..4 {
                t += &x[r] * &self.0[r][s][s];
            }
        }
        t / rat(2)
    }

    fn pure(&self, x: &[Rational]) -> Vec<Rational> {
        let mut y: Vec<Rational> = x.iter().map(|c| c * rat(2)).collect();
        y[0] -= self.trace(x);
        y
    }

    fn scalar_square(&self, x: &[Rational]) -> Result<Rational> {
        let sq = self.mul(x, x);
        ensure!(sq[1..].iter().all(Zero::is_zero), "pure element does not square to a scalar");
        Ok(sq[0].clone())
    }
}

/// Largest `s` with `s² | n`, for a nonzero integer `n`.
fn square_part(n: &Rational) -> Rational {
    let mut num = n.numer().abs();
    let mut s = num_bigint::BigInt::one();
    let mut p = num_bigint::BigInt::from(2);
    while &p * &p <= num {
        while (&num % (&p * &p)).is_zero() {
            num /= &p * &p;
            s *= &p;
        }
        p += 1;
    }
    Rational::from_integer(s)
}

/// The even Clifford algebra `C₀(M)` of `Q(x) = x·x/2` as an order in a
/// standard presentation `(a, b)`.
pub fn even_clifford_order(m: &TernaryLattice) -> Result<Order> {
    let table = Table(even_clifford_table(m.gram()));
    let basis: Vec<Vec<Rational>> = (0..4)
        .map(|t| (0..4).map(|s| if s == t { rat(1) } else { rat(0) }).collect())
        .collect();
    let mut i = table.pure(&basis[1]);
    let mut a = table.scalar_square(&i)?;
    let s = square_part(&a);
    i = i.iter().map(|c| c / &s).collect();
    a = a / (&s * &s);
    // a pure element anticommuting with i
    let mut j = None;
    for t in [2, 3] {
        let y = table.pure(&basis[t]);
        let c: Vec<Rational> = table.mul(&i, &y).iter().zip(table.mul(&y, &i)).map(|(u, v)| u - v).collect();
        if c.iter().any(|x| !x.is_zero()) {
            j = Some(c);
            break;
        }
    }
    let mut j = j.ok_or_else(|| Error::Check("even Clifford algebra is commutative".into()))?;
    let mut b = table.scalar_square(&j)?;
    let s = square_part(&b);
    j = j.iter().map(|c| c / &s).collect();
    b = b / (&s * &s);
    let k = table.mul(&i, &j);
    let one = basis[0].clone();
    // rows of P: 1, i, j, k in the Clifford basis; Clifford basis in (1, i, j, k) = P⁻¹
    let p = RatMat::from_rows(&[one, i, j, k]);
    let coords = inverse(&p)?;
    let algebra = QuaternionAlgebra::new(a, b)?;
    let elems: [QuatElement; 4] = std::array::from_fn(|r| QuatElement(std::array::from_fn(|t| coords[(r, t)].clone())));
    // check the multiplication table survives the change of presentation
    for r in 0..4 {
        for s in 0..4 {
            let lhs = algebra.mul(&elems[r], &elems[s]);
            let rhs = coords.left_mul_vec(&table.0[r][s]);
            ensure!(lhs.0.to_vec() == rhs, "presentation of C₀ does not respect the product");
        }
    }
    Order::new(algebra, elems)
}

/// The ℤ-algebra generated by three trace-zero elements:
/// `ℤ + Σℤεᵢ + Σℤεᵢεⱼ + ℤε₁ε₂ε₃`.
pub fn generated_order_contained_in(o: &Order, eps: &[QuatElement; 3]) -> bool {
    let a = &o.algebra;
    let mut gens = vec![QuatElement::one()];
    gens.extend(eps.iter().cloned());
    for x in 0..3 {
        for y in x + 1..3 {
            gens.push(a.mul(&eps[x], &eps[y]));
        }
    }
    gens.push(a.mul(&a.mul(&eps[0], &eps[1]), &eps[2]));
    gens.iter().all(|g| o.contains(g))
}

/// A maximal order with `L(𝒪) ≅ L`, for `L ∈ ℛ(d)`.
///
/// `𝒪 = C₀(M(L; d))`; the isometry `L → L(𝒪)` found afterwards is the
/// embedding of `L` into the pure quaternions, and 𝒪 contains the ring it
/// generates.
pub fn order_from_ternary(l: &TernaryLattice, d: u64) -> Result<(Order, [QuatElement; 3])> {
    ensure!(
        super::lattice::is_in_r(l, d)?,
        "lattice with Gram {:?} is not in R({d})",
        l.gram()
    );
    let m = m_transform(l, d)?;
    let o = even_clifford_order(&m)?;
    ensure!(
        o.discriminant() == d && o.is_maximal(),
        "C0(M) has discriminant {} in an algebra of discriminant {}",
        o.reduced_discriminant,
        o.discriminant()
    );
    let lo = trace_zero_lattice(&o)?;
    let t = is_isometric(&l.lattice, &lo.lattice)?
        .ok_or_else(|| Error::EmbeddingNotFound(format!("L(C0(M)) is not isometric to L for d = {d}")))?;
    let emb_rows = &t.to_rat() * &lo.basis;
    let eps: [QuatElement; 3] = std::array::from_fn(|r| QuatElement(std::array::from_fn(|c| emb_rows[(r, c)].clone())));
    for x in 0..3 {
        for y in 0..3 {
            ensure!(
                o.algebra.inner(&eps[x], &eps[y]) == l.gram()[(x, y)],
                "embedding is not isometric"
            );
        }
    }
    ensure!(generated_order_contained_in(&o, &eps), "the embedded lattice generates a ring outside 𝒪");
    Ok((o, eps))
}
