//! Exact integer and rational linear algebra.
//!
//! Matrices are dense and row-major. Lattices are always presented by the
//! *rows* of a basis matrix, and every normal form here is a row-style form
//! (`u * m = h`).

mod hnf;
mod matrix;
mod snf;

pub use hnf::{hnf, hnf_basis, kernel_mod, lattice_basis, lattice_intersection, lattice_sum};
pub use matrix::{IntMat, Matrix, RatMat};
pub use snf::{snf, Snf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac_part(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn to_i64(n: &BigInt) -> i64 {
    n.to_i64().expect("integer does not fit in i64")
}

pub fn rat_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Determinant of a square rational matrix by exact Gaussian elimination.
pub fn det(m: &RatMat) -> Result<Rational> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            a.swap_rows(p, c);
            d = -d;
        }
        let piv = a[(c, c)].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[(r, c)].is_zero() {
                continue;
            }
            let f = &a[(r, c)] / &piv;
            for k in c..n {
                let t = &f * &a[(c, k)];
                a[(r, k)] -= t;
            }
        }
    }
    Ok(d)
}

/// Determinant of a symmetric rational matrix (Gram matrices).
pub fn det_sym(g: &RatMat) -> Result<Rational> {
    if !g.is_symmetric() {
        return Err(Error::Dimension("det_sym of a non-symmetric matrix".into()));
    }
    det(g)
}

/// Determinant of an integer matrix (fraction-free Bareiss elimination).
pub fn det_int(m: &IntMat) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Inverse of a square rational matrix.
pub fn inverse(m: &RatMat) -> Result<RatMat> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let mut a = m.clone();
    let mut inv = RatMat::identity(n);
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !a[(r, c)].is_zero())
            .ok_or_else(|| Error::Singular)?;
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        let piv = a[(c, c)].clone();
        for k in 0..n {
            a[(c, k)] /= &piv;
            inv[(c, k)] /= &piv;
        }
        for r in 0..n {
            if r == c || a[(r, c)].is_zero() {
                continue;
            }
            let f = a[(r, c)].clone();
            for k in 0..n {
                let t = &f * &a[(c, k)];
                a[(r, k)] -= t;
                let t = &f * &inv[(c, k)];
                inv[(r, k)] -= t;
            }
        }
    }
    Ok(inv)
}

/// Solves `x * m = v` for the row vector `x` (m square, invertible).
pub fn solve_row(m: &RatMat, v: &[Rational]) -> Result<Vec<Rational>> {
    let inv = inverse(m)?;
    Ok(inv.left_mul_vec(v))
}

/// Rank of a rational matrix.
pub fn rank(m: &RatMat) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for i in r + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for k in c..cols {
                let t = &f * &a[(r, k)];
                a[(i, k)] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x * g * y^T`.
pub fn bilinear(g: &RatMat, x: &[Rational], y: &[Rational]) -> Rational {
    let gy = g.mul_vec(y);
    dot(x, &gy)
}
