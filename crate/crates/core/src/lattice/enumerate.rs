//! Exact short-vector enumeration.
//!
//! Fincke–Pohst on the rational LDLᵀ decomposition of a Gram matrix, with an
//! exact LLL reduction used only as a pre-conditioner: every vector returned
//! is expressed in the caller's basis and its norm is recomputed exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, frac, IntMat, RatMat, Rational};

/// Decomposition `Q(x) = Σᵢ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²` of `x·G·xᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    pub diag: Vec<Rational>,
    /// upper triangle (i < j) holds μᵢⱼ
    pub mu: RatMat,
}

pub fn cholesky(g: &RatMat) -> Result<Cholesky> {
    let n = g.rows();
    if n != g.cols() || !g.is_symmetric() {
        return Err(Error::Dimension("Gram matrix must be square and symmetric".into()));
    }
    let mut q = g.clone();
    for i in 0..n {
        if !q[(i, i)].is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for j in i + 1..n {
            q[(j, i)] = q[(i, j)].clone();
            let v = &q[(i, j)] / &q[(i, i)];
            q[(i, j)] = v;
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &q[(k, i)] * &q[(i, l)];
                q[(k, l)] -= t;
            }
        }
    }
    let diag = (0..n).map(|i| q[(i, i)].clone()).collect();
    let mut mu = RatMat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            mu[(i, j)] = q[(i, j)].clone();
        }
    }
    Ok(Cholesky { diag, mu })
}

pub fn is_positive_definite(g: &RatMat) -> bool {
    cholesky(g).is_ok()
}

/// All nonzero integer row vectors `x` with `x·G·xᵀ ≤ bound`, found by
/// Fincke–Pohst directly in the given basis.
pub fn fincke_pohst(g: &RatMat, bound: &Rational) -> Result<Vec<Vec<BigInt>>> {
    let ch = cholesky(g)?;
    let n = g.rows();
    let mut out = Vec::new();
    if n == 0 || bound.is_negative() {
        return Ok(out);
    }
    let mut x = vec![BigInt::zero(); n];
    search(&ch, n - 1, bound.clone(), &mut x, &mut out);
    Ok(out)
}

fn search(ch: &Cholesky, i: usize, remaining: Rational, x: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) {
    let n = x.len();
    let mut center = Rational::zero();
    for j in i + 1..n {
        if !x[j].is_zero() {
            center -= &ch.mu[(i, j)] * Rational::from_integer(x[j].clone());
        }
    }
    let radius2 = &remaining / &ch.diag[i];
    // isqrt(floor(r)) + 1 over-covers sqrt(r); candidates are filtered exactly below
    let s = radius2.floor().to_integer().sqrt() + BigInt::one();
    let lo = center.floor().to_integer() - &s;
    let hi = center.ceil().to_integer() + &s;
    let mut v = lo;
    while v <= hi {
        let diff = Rational::from_integer(v.clone()) - &center;
        let used = &ch.diag[i] * &diff * &diff;
        if used <= remaining {
            x[i] = v.clone();
            if i == 0 {
                if x.iter().any(|c| !c.is_zero()) {
                    out.push(x.clone());
                }
            } else {
                search(ch, i - 1, &remaining - &used, x, out);
            }
        }
        v += 1;
    }
    x[i] = BigInt::zero();
}

/// Exact LLL (δ = 3/4) on a Gram matrix. Returns `(h, g')` with `h`
/// unimodular and `g' = h·g·hᵀ` reduced.
pub fn lll_gram(g: &RatMat) -> Result<(IntMat, RatMat)> {
    let n = g.rows();
    let mut g = g.clone();
    let mut h = IntMat::identity(n);
    if n <= 1 {
        return Ok((h, g));
    }
    let delta = frac(3, 4);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Check("LLL did not terminate".into()));
        }
        for j in (0..k).rev() {
            let (mu, _) = gso(&g)?;
            let r = round(&mu[(k, j)]);
            if !r.is_zero() {
                row_sub(&mut h, &mut g, k, j, &r);
            }
        }
        let (mu, b) = gso(&g)?;
        let m = &mu[(k, k - 1)];
        if b[k] < (&delta - m * m) * &b[k - 1] {
            h.swap_rows(k, k - 1);
            swap_sym(&mut g, k, k - 1);
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
    Ok((h, g))
}

fn round(r: &Rational) -> BigInt {
    (r + frac(1, 2)).floor().to_integer()
}

// b_k -= r b_j
fn row_sub(h: &mut IntMat, g: &mut RatMat, k: usize, j: usize, r: &BigInt) {
    let n = g.rows();
    for c in 0..h.cols() {
        let t = r * &h[(j, c)];
        h[(k, c)] -= t;
    }
    let rr = Rational::from_integer(r.clone());
    for c in 0..n {
        let t = &rr * &g[(j, c)];
        g[(k, c)] -= t;
    }
    for c in 0..n {
        let t = &rr * &g[(c, j)];
        g[(c, k)] -= t;
    }
}

fn swap_sym(g: &mut RatMat, a: usize, b: usize) {
    g.swap_rows(a, b);
    let n = g.rows();
    for i in 0..n {
        let t = g[(i, a)].clone();
        g[(i, a)] = g[(i, b)].clone();
        g[(i, b)] = t;
    }
}

// Gram–Schmidt coefficients: mu[i][j] (j < i) and squared lengths b[i]
fn gso(g: &RatMat) -> Result<(RatMat, Vec<Rational>)> {
    let n = g.rows();
    let mut mu = RatMat::zeros(n, n);
    let mut b: Vec<Rational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut v = g[(i, j)].clone();
            for l in 0..j {
                v -= &mu[(j, l)] * &mu[(i, l)] * &b[l];
            }
            mu[(i, j)] = v / &b[j];
        }
        let mut bi = g[(i, i)].clone();
        for l in 0..i {
            bi -= &mu[(i, l)] * &mu[(i, l)] * &b[l];
        }
        if !bi.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        b.push(bi);
    }
    Ok((mu, b))
}

/// Result of an exhaustive enumeration up to a bound.
#[derive(Clone, Debug)]
pub struct ShortVectors {
    /// smallest nonzero norm found (`None` when nothing lies below the bound)
    pub min: Option<Rational>,
    /// `(norm, coordinates)`, sorted by norm then lexicographically
    pub vectors: Vec<(Rational, Vec<BigInt>)>,
}

impl ShortVectors {
    pub fn count_with_norm(&self, n: &Rational) -> usize {
        self.vectors.iter().filter(|(v, _)| v == n).count()
    }
}

/// All nonzero `x` with `x·G·xᵀ ≤ bound`, complete and exact.
pub fn short_vectors(g: &RatMat, bound: &Rational) -> Result<ShortVectors> {
    let (h, reduced) = lll_gram(g)?;
    let found = fincke_pohst(&reduced, bound)?;
    let grat = g;
    let mut vectors: Vec<(Rational, Vec<BigInt>)> = found
        .into_iter()
        .map(|y| {
            let x = h.left_mul_vec(&y);
            let xr: Vec<Rational> = x.iter().map(|c| Rational::from_integer(c.clone())).collect();
            (bilinear(grat, &xr, &xr), x)
        })
        .collect();
    vectors.sort();
    let min = vectors.first().map(|(n, _)| n.clone());
    Ok(ShortVectors { min, vectors })
}

/// Minimum nonzero norm of a positive definite Gram matrix.
pub fn minimum(g: &RatMat) -> Result<Rational> {
    let (_, reduced) = lll_gram(g)?;
    // the first reduced basis vector bounds the minimum from above
    let bound = (0..reduced.rows())
        .map(|i| reduced[(i, i)].clone())
        .min()
        .ok_or_else(|| Error::Dimension("empty lattice".into()))?;
    let sv = short_vectors(g, &bound)?;
    sv.min.ok_or_else(|| Error::Check("enumeration missed the basis vectors".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det, rat, RatMat};
    use proptest::prelude::*;

    fn e8_gram() -> RatMat {
        // Cartan matrix of E8 (Bourbaki numbering)
        let mut g = RatMat::identity(8).scale(&rat(2));
        for (a, b) in [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)] {
            g[(a, b)] = rat(-1);
            g[(b, a)] = rat(-1);
        }
        g
    }

    #[test]
    fn e8_has_240_roots() {
        let g = e8_gram();
        assert_eq!(det(&g).unwrap(), rat(1));
        let sv = short_vectors(&g, &rat(2)).unwrap();
        assert_eq!(sv.min, Some(rat(2)));
        assert_eq!(sv.vectors.len(), 240);
        assert_eq!(minimum(&g).unwrap(), rat(2));
    }

    #[test]
    fn z_n_has_2n_unit_vectors() {
        for n in 1..6 {
            let sv = short_vectors(&RatMat::identity(n), &rat(1)).unwrap();
            assert_eq!(sv.vectors.len(), 2 * n);
            assert_eq!(sv.min, Some(rat(1)));
        }
    }

    #[test]
    fn scaling_scales_the_minimum() {
        let g = RatMat::from_i64(3, 3, &[2, 1, 0, 1, 4, 1, 0, 1, 6]);
        let c = frac(7, 3);
        let a = short_vectors(&g, &rat(6)).unwrap();
        let b = short_vectors(&g.scale(&c), &(rat(6) * &c)).unwrap();
        assert_eq!(b.min.unwrap(), a.min.clone().unwrap() * &c);
        let va: Vec<_> = a.vectors.iter().map(|(_, v)| v.clone()).collect();
        let vb: Vec<_> = b.vectors.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(va, vb);
    }

    #[test]
    fn not_positive_definite_is_rejected() {
        let g = RatMat::from_i64(2, 2, &[1, 2, 2, 1]);
        assert!(matches!(cholesky(&g), Err(Error::NotPositiveDefinite)));
    }

    // brute force over a coordinate box large enough to contain every vector of
    // norm ≤ bound: |x_i| ≤ sqrt(bound · (G⁻¹)_ii)
    fn box_brute_force(g: &RatMat, bound: &Rational) -> Vec<Vec<BigInt>> {
        let n = g.rows();
        let inv = crate::linalg::inverse(g).unwrap();
        let radius: Vec<i64> = (0..n)
            .map(|i| {
                let r = bound * &inv[(i, i)];
                let s = r.floor().to_integer().sqrt() + BigInt::one();
                crate::linalg::to_i64(&s)
            })
            .collect();
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        fn rec(i: usize, radius: &[i64], x: &mut Vec<i64>, g: &RatMat, bound: &Rational, out: &mut Vec<Vec<BigInt>>) {
            if i == x.len() {
                if x.iter().all(|&c| c == 0) {
                    return;
                }
                let xr: Vec<Rational> = x.iter().map(|&c| rat(c)).collect();
                if bilinear(g, &xr, &xr) <= *bound {
                    out.push(x.iter().map(|&c| BigInt::from(c)).collect());
                }
                return;
            }
            for v in -radius[i]..=radius[i] {
                x[i] = v;
                rec(i + 1, radius, x, g, bound, out);
            }
            x[i] = 0;
        }
        rec(0, &radius, &mut x, g, bound, &mut out);
        out.sort();
        out
    }

    fn random_gram() -> impl Strategy<Value = RatMat> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
                // B Bᵀ + I is positive definite
                let b = RatMat::from_i64(n, n, &v);
                let mut g = &b * &b.transpose();
                for i in 0..n {
                    g[(i, i)] += rat(1);
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn enumeration_agrees_with_box_brute_force(g in random_gram(), b in 1i64..12) {
            let bound = rat(b);
            let sv = short_vectors(&g, &bound).unwrap();
            let mut got: Vec<Vec<BigInt>> = sv.vectors.iter().map(|(_, v)| v.clone()).collect();
            got.sort();
            prop_assert_eq!(got, box_brute_force(&g, &bound));
        }

        #[test]
        fn lll_output_is_equivalent(g in random_gram()) {
            let (h, r) = lll_gram(&g).unwrap();
            prop_assert_eq!(crate::linalg::det_int(&h).abs(), BigInt::one());
            let hr = h.to_rat();
            prop_assert_eq!(&(&hr * &g) * &hr.transpose(), r);
        }
    }
}
