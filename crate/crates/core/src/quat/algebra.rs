use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, legendre};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, frac, rat, Rational};

/// A place of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Infinity,
}

// a·den² has the same square class as a = num/den
fn square_class_integer(a: &Rational) -> BigInt {
    a.numer() * a.denom()
}

fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    (v, n)
}

/// Local Hilbert symbol `(a, b)_p` of two nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let p = match place {
        Place::Infinity => {
            return if a.is_negative() && b.is_negative() { -1 } else { 1 };
        }
        Place::Finite(p) => p,
    };
    let (alpha, u) = valuation(&square_class_integer(a), p);
    let (beta, v) = valuation(&square_class_integer(b), p);
    if p == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_i64().unwrap();
        let (u, v) = (m8(&u), m8(&v));
        let eps = |x: i64| ((x - 1) / 2) & 1;
        let omega = |x: i64| ((x * x - 1) / 8) & 1;
        let e = eps(u) * eps(v) + alpha as i64 * omega(v) + beta as i64 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let pm = BigInt::from(p);
        let red = |x: &BigInt| x.mod_floor(&pm).to_i64().unwrap();
        let eps = ((p - 1) / 2) as i64;
        let mut s = if (alpha as i64 * beta as i64 * eps) % 2 == 0 { 1 } else { -1 };
        if beta % 2 == 1 {
            s *= legendre(red(&u), p);
        }
        if alpha % 2 == 1 {
            s *= legendre(red(&v), p);
        }
        s
    }
}

/// The definite quaternion algebra `(a, b | ℚ)`: `i² = a`, `j² = b`, `k = ij = -ji`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub a: Rational,
    pub b: Rational,
    pub ramified_primes: Vec<u64>,
    pub discriminant: u64,
}

impl QuaternionAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if !a.is_negative() || !b.is_negative() {
            return Err(Error::Indefinite {
                a: format_rational(&a),
                b: format_rational(&b),
            });
        }
        let mut candidates: Vec<u64> = vec![2];
        for x in [&a, &b] {
            for n in [x.numer(), x.denom()] {
                let n = n.abs().to_u64().ok_or_else(|| {
                    Error::InvalidArgument("algebra parameters are too large to factor".into())
                })?;
                candidates.extend(factorize(n).into_iter().map(|(p, _)| p));
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        let ramified_primes: Vec<u64> = candidates
            .into_iter()
            .filter(|&p| hilbert_symbol(&a, &b, Place::Finite(p)) == -1)
            .collect();
        // product formula with (a,b)_∞ = -1
        if ramified_primes.len() % 2 != 1 {
            return Err(Error::Check(
                "product formula violated: even number of finite ramified primes".into(),
            ));
        }
        let discriminant = ramified_primes.iter().product();
        Ok(QuaternionAlgebra {
            a,
            b,
            ramified_primes,
            discriminant,
        })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        Self::new(rat(a), rat(b))
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let (a, b) = (&self.a, &self.b);
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        let ab = a * b;
        QuatElement([
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - &ab * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn norm(&self, x: &QuatElement) -> Rational {
        let [x0, x1, x2, x3] = &x.0;
        x0 * x0 - &self.a * x1 * x1 - &self.b * x2 * x2 + &self.a * &self.b * x3 * x3
    }

    pub fn trace(&self, x: &QuatElement) -> Rational {
        x.trace()
    }

    pub fn trace_norm(&self, x: &QuatElement) -> (Rational, Rational) {
        (x.trace(), self.norm(x))
    }

    pub fn inverse(&self, x: &QuatElement) -> Option<QuatElement> {
        let n = self.norm(x);
        (!n.is_zero()).then(|| x.conj().scale(&(Rational::one() / n)))
    }

    /// The Euclidean product `tr(x̄ y)`.
    pub fn inner(&self, x: &QuatElement, y: &QuatElement) -> Rational {
        self.mul(&x.conj(), y).trace()
    }

    pub fn i(&self) -> QuatElement {
        QuatElement::basis(1)
    }

    pub fn j(&self) -> QuatElement {
        QuatElement::basis(2)
    }

    pub fn k(&self) -> QuatElement {
        QuatElement::basis(3)
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {} | Q), discriminant {}",
            format_rational(&self.a),
            format_rational(&self.b),
            self.discriminant
        )
    }
}

/// `algebra_from_pair`: validates definiteness and computes the ramification.
pub fn algebra_from_pair(a: Rational, b: Rational) -> Result<QuaternionAlgebra> {
    QuaternionAlgebra::new(a, b)
}

/// A small presentation `(a, b)` with integers a, b < 0 of the definite
/// algebra of discriminant `d`.
pub fn algebra_with_discriminant(d: u64) -> Result<QuaternionAlgebra> {
    if !crate::arith::is_admissible(d) {
        return Err(Error::InvalidArgument(format!(
            "{d} is not the discriminant of a definite quaternion algebra"
        )));
    }
    let bound = 8 * d as i64 + 8;
    for s in 2..=bound {
        for a in 1..=s / 2 {
            if let Ok(alg) = QuaternionAlgebra::from_i64(-a, -(s - a)) {
                if alg.discriminant == d {
                    return Ok(alg);
                }
            }
        }
    }
    Err(Error::InvalidArgument(format!("no small presentation for discriminant {d}")))
}

/// Element `x₀ + x₁i + x₂j + x₃k` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuatElement(pub [Rational; 4]);

impl QuatElement {
    pub fn zero() -> Self {
        QuatElement(std::array::from_fn(|_| Rational::zero()))
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn basis(t: usize) -> Self {
        let mut x = Self::zero();
        x.0[t] = Rational::one();
        x
    }

    pub fn from_i64(c: [i64; 4]) -> Self {
        QuatElement(c.map(rat))
    }

    /// Coordinates `c / den`.
    pub fn from_frac(c: [i64; 4], den: i64) -> Self {
        QuatElement(c.map(|x| frac(x, den)))
    }

    pub fn scalar(r: Rational) -> Self {
        let mut x = Self::zero();
        x.0[0] = r;
        x
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        let [x0, x1, x2, x3] = &self.0;
        QuatElement([x0.clone(), -x1, -x2, -x3])
    }

    pub fn trace(&self) -> Rational {
        &self.0[0] * rat(2)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuatElement(std::array::from_fn(|t| &self.0[t] * c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Add for &QuatElement {
    type Output = QuatElement;
    fn add(self, o: &QuatElement) -> QuatElement {
        QuatElement(std::array::from_fn(|t| &self.0[t] + &o.0[t]))
    }
}

impl Sub for &QuatElement {
    type Output = QuatElement;
    fn sub(self, o: &QuatElement) -> QuatElement {
        QuatElement(std::array::from_fn(|t| &self.0[t] - &o.0[t]))
    }
}

impl Neg for &QuatElement {
    type Output = QuatElement;
    fn neg(self) -> QuatElement {
        QuatElement(std::array::from_fn(|t| -&self.0[t]))
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = crate::linalg::common_denominator(self.0.iter());
        let names = ["", "i", "j", "k"];
        let mut out = String::new();
        for (t, c) in self.0.iter().enumerate() {
            let n = (c * Rational::from_integer(den.clone())).to_integer();
            if n.is_zero() {
                continue;
            }
            let neg = n.is_negative();
            let mag = n.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            if mag.is_one() && t > 0 {
                out.push_str(names[t]);
            } else {
                out.push_str(&format!("{mag}{}", names[t]));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if den.is_one() {
            write!(f, "{out}")
        } else {
            write!(f, "({out})/{den}")
        }
    }
}

impl fmt::Debug for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Place {
        Place::Finite(n)
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), p(2)), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-11), p(11)), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-11), p(2)), 1);
        for b in [-7, -3, 2, 5, 12] {
            for q in [2, 3, 5, 7] {
                assert_eq!(hilbert_symbol(&rat(1), &rat(b), p(q)), 1);
            }
        }
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Infinity), -1);
    }

    // (a,b)_2 = 1 iff z² = a x² + b y² has a primitive solution mod 2^6
    // (for a, b units or 2·units this lifts by Hensel)
    fn hilbert_2_brute(a: i64, b: i64) -> i32 {
        let m = 64i64;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn hilbert_at_two_by_brute_force() {
        for (a, b) in [(-1, -1), (-1, -3), (-1, -11), (-2, -5), (-1, -7), (3, 5), (2, 3)] {
            assert_eq!(hilbert_symbol(&rat(a), &rat(b), p(2)), hilbert_2_brute(a, b), "({a},{b})_2");
        }
    }

    #[test]
    fn algebra_discriminants() {
        assert_eq!(QuaternionAlgebra::from_i64(-1, -1).unwrap().discriminant, 2);
        assert_eq!(QuaternionAlgebra::from_i64(-2, -13).unwrap().discriminant, 13);
        assert_eq!(QuaternionAlgebra::from_i64(-1, -3).unwrap().discriminant, 3);
        assert_eq!(QuaternionAlgebra::from_i64(-1, -11).unwrap().discriminant, 11);
        assert!(matches!(QuaternionAlgebra::from_i64(1, -1), Err(Error::Indefinite { .. })));
        for d in [2u64, 3, 5, 7, 30, 37, 97] {
            assert_eq!(algebra_with_discriminant(d).unwrap().discriminant, d);
        }
    }

    #[test]
    fn trace_and_norm() {
        let h = QuaternionAlgebra::from_i64(-1, -1).unwrap();
        assert_eq!(h.trace_norm(&QuatElement::one()), (rat(2), rat(1)));
        let t = QuatElement::from_frac([1, 1, 1, 1], 2);
        assert_eq!(h.trace_norm(&t), (rat(1), rat(1)));
        let a = QuaternionAlgebra::from_i64(-1, -11).unwrap();
        assert_eq!(a.trace_norm(&a.j()), (rat(0), rat(11)));
        assert_eq!(a.mul(&a.j(), &a.j()), QuatElement::scalar(rat(-11)));
        assert_eq!(a.mul(&a.i(), &a.j()), a.k());
        assert_eq!(a.mul(&a.j(), &a.i()), -&a.k());
    }

    fn element() -> impl Strategy<Value = QuatElement> {
        proptest::array::uniform4((-20i64..20, 1i64..6))
            .prop_map(|c| QuatElement(c.map(|(n, d)| frac(n, d))))
    }

    proptest! {
        #[test]
        fn conjugation_is_an_anti_involution(x in element(), y in element(), a in -13i64..-1, b in -13i64..-1) {
            let alg = QuaternionAlgebra { a: rat(a), b: rat(b), ramified_primes: vec![], discriminant: 0 };
            prop_assert_eq!(alg.mul(&x, &y).conj(), alg.mul(&y.conj(), &x.conj()));
            prop_assert_eq!(alg.norm(&alg.mul(&x, &y)), alg.norm(&x) * alg.norm(&y));
            prop_assert_eq!(x.trace(), x.conj().trace());
            prop_assert_eq!(alg.mul(&x, &x.conj()), QuatElement::scalar(alg.norm(&x)));
            // associativity
            let z = &x + &y;
            prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        }
    }
}
