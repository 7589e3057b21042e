use std::collections::BTreeMap;

use super::lattice::{is_in_r, is_in_s, TernaryLattice};
use crate::arith::is_admissible;
use crate::error::{Error, Result};
use crate::lattice::{is_isometric, short_vectors};
use crate::linalg::{rat, RatMat, Rational};

/// Gram `[[a, f, e], [f, b, g], [e, g, c]]` of an even ternary form.
type Entries = [i64; 6];

const THETA_BOUND: i64 = 8;

fn det3(x: &Entries) -> i64 {
    let [a, b, c, f, e, g] = *x;
    a * (b * c - g * g) - f * (f * c - g * e) + e * (f * g - b * e)
}

fn gram(x: &Entries) -> RatMat {
    let [a, b, c, f, e, g] = *x;
    RatMat::from_i64(3, 3, &[a, f, e, f, b, g, e, g, c])
}

/// Even positive definite Grams of determinant `det` satisfying the
/// necessary Minkowski conditions `a ≤ b ≤ c`, `2|f|, 2|e| ≤ a`,
/// `2|g| ≤ b`, `f, e ≥ 0` and `abc ≤ 2·det`, in lexicographic order of
/// `(a, b, c, f, e, g)`. Every class has at least one such Gram.
pub fn reduced_candidates(det: i64) -> Vec<RatMat> {
    let mut out = Vec::new();
    let bound = 2 * det;
    let mut a = 2;
    while a * a * a <= bound {
        let mut b = a;
        while a * b * b <= bound {
            let mut c = b;
            while a * b * c <= bound {
                for f in 0..=a / 2 {
                    for e in 0..=a / 2 {
                        for g in -(b / 2)..=b / 2 {
                            let x = [a, b, c, f, e, g];
                            if a * b - f * f > 0 && det3(&x) == det {
                                out.push(gram(&x));
                            }
                        }
                    }
                }
                c += 2;
            }
            b += 2;
        }
        a += 2;
    }
    out
}

// numbers of vectors of each norm up to a fixed bound (an isometry invariant)
fn theta_prefix(g: &RatMat) -> Result<Vec<(Rational, usize)>> {
    let sv = short_vectors(g, &rat(THETA_BOUND))?;
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for (q, _) in &sv.vectors {
        *counts.entry(q.clone()).or_default() += 1;
    }
    Ok(counts.into_iter().collect())
}

/// One representative per isometry class among the Grams passing `keep`,
/// each the lexicographically first candidate of its class.
fn classes(det: i64, keep: impl Fn(&TernaryLattice) -> Result<bool>) -> Result<Vec<TernaryLattice>> {
    let mut reps: Vec<(Vec<(Rational, usize)>, TernaryLattice)> = Vec::new();
    for g in reduced_candidates(det) {
        let l = TernaryLattice::from_gram(g)?;
        if !keep(&l)? {
            continue;
        }
        let theta = theta_prefix(l.gram())?;
        let mut seen = false;
        for (t, r) in &reps {
            if *t == theta && is_isometric(&l.lattice, &r.lattice)?.is_some() {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push((theta, l));
        }
    }
    Ok(reps.into_iter().map(|(_, l)| l).collect())
}

fn require_admissible(d: u64) -> Result<()> {
    if !is_admissible(d) {
        return Err(Error::InvalidArgument(format!(
            "d = {d} must be squarefree with an odd number of prime factors"
        )));
    }
    Ok(())
}

/// Representatives of 𝒮(d): even, det 2d, with the residue conditions at odd p | d.
pub fn enumerate_s(d: u64) -> Result<Vec<TernaryLattice>> {
    require_admissible(d)?;
    classes(2 * d as i64, |m| is_in_s(m, d))
}

/// Representatives of ℛ(d): even, det 2d², anisotropic residue at odd p | d.
pub fn enumerate_r(d: u64) -> Result<Vec<TernaryLattice>> {
    require_admissible(d)?;
    classes(2 * (d * d) as i64, |l| is_in_r(l, d))
}

/// All even rank-3 classes of determinant `det`, without residue conditions.
pub fn enumerate_even(det: u64) -> Result<Vec<TernaryLattice>> {
    classes(det as i64, |_| Ok(true))
}

/// Index of the class of `l` in `list`, if any.
pub fn class_index(list: &[TernaryLattice], l: &TernaryLattice) -> Result<Option<usize>> {
    for (i, r) in list.iter().enumerate() {
        if is_isometric(&l.lattice, &r.lattice)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The first coefficient of the representative is 2, i.e. `Q` represents 1.
pub fn first_coefficient_is_two(l: &TernaryLattice) -> bool {
    l.gram()[(0, 0)] == rat(2)
}
