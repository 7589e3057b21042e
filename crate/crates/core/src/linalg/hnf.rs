use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{common_denominator, inverse, IntMat, RatMat, Rational};

/// Row-style Hermite normal form: returns `(h, u)` with `u` unimodular and
/// `u * m = h`.
///
/// Convention: `h` is in upper row-echelon form, every pivot is positive,
/// entries above a pivot lie in `[0, pivot)`, zero rows come last.
pub fn hnf(m: &IntMat) -> (IntMat, IntMat) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-combine everything below r into row r
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let e = a.extended_gcd(&b);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            combine_rows(&mut h, r, i, &s, &t, &bg, &ag);
            combine_rows(&mut u, r, i, &s, &t, &bg, &ag);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let piv = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&piv);
            if !q.is_zero() {
                sub_row(&mut h, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

// row_r <- s*row_r + t*row_i ; row_i <- -bg*row_r + ag*row_i
fn combine_rows(m: &mut IntMat, r: usize, i: usize, s: &BigInt, t: &BigInt, bg: &BigInt, ag: &BigInt) {
    for k in 0..m.cols() {
        let x = m[(r, k)].clone();
        let y = m[(i, k)].clone();
        m[(r, k)] = s * &x + t * &y;
        m[(i, k)] = ag * &y - bg * &x;
    }
}

fn negate_row(m: &mut IntMat, r: usize) {
    for x in m.row_mut(r) {
        *x = -x.clone();
    }
}

// row_i -= q * row_r
fn sub_row(m: &mut IntMat, i: usize, r: usize, q: &BigInt) {
    for k in 0..m.cols() {
        let t = q * &m[(r, k)];
        m[(i, k)] -= t;
    }
}

/// Nonzero rows of the HNF: a canonical basis of the row lattice.
pub fn hnf_basis(m: &IntMat) -> IntMat {
    hnf(m).0.nonzero_rows()
}

/// Canonical basis of the ℤ-span of the rows of a rational matrix.
pub fn lattice_basis(m: &RatMat) -> RatMat {
    let den = common_denominator(m.entries());
    let scaled = m.map(|x| (x * Rational::from_integer(den.clone())).to_integer());
    let h = hnf_basis(&scaled);
    let den = Rational::from_integer(den);
    h.map(|x| Rational::from_integer(x.clone()) / &den)
}

/// Canonical basis of the sum of two row lattices.
pub fn lattice_sum(a: &RatMat, b: &RatMat) -> RatMat {
    lattice_basis(&a.vstack(b))
}

/// Intersection of two full-rank row lattices in ℚⁿ.
pub fn lattice_intersection(a: &RatMat, b: &RatMat) -> RatMat {
    let da = coordinate_dual(&lattice_basis(a));
    let db = coordinate_dual(&lattice_basis(b));
    coordinate_dual(&lattice_sum(&da, &db))
}

// dual under the standard dot product of ℚⁿ
fn coordinate_dual(basis: &RatMat) -> RatMat {
    assert_eq!(basis.rows(), basis.cols(), "coordinate dual needs a full-rank basis");
    inverse(basis).expect("full-rank basis").transpose()
}

/// Basis (as rows) of `{x ∈ ℤⁿ : a·x ≡ 0 (mod modulus)}`; `modulus = 0`
/// gives the integer kernel.
pub fn kernel_mod(a: &IntMat, modulus: &BigInt) -> IntMat {
    let (r, n) = (a.rows(), a.cols());
    let mut big = IntMat::zeros(n + r, r + n);
    for i in 0..n {
        for k in 0..r {
            big[(i, k)] = a[(k, i)].clone();
        }
        big[(i, r + i)] = BigInt::one();
    }
    for k in 0..r {
        big[(n + k, k)] = modulus.clone();
    }
    let h = hnf(&big).0;
    let rows: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&i| h.row(i)[..r].iter().all(Zero::is_zero) && !h.row(i)[r..].iter().all(Zero::is_zero))
        .map(|i| h.row(i)[r..].to_vec())
        .collect();
    if rows.is_empty() {
        IntMat::zeros(0, n)
    } else {
        IntMat::from_rows(&rows)
    }
}
