use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::enumerate::{lll_gram, short_vectors};
use super::zlattice::ZLattice;
use crate::error::{Error, Result};
use crate::linalg::{det_int, dot, inverse, IntMat, RatMat, Rational};

pub const MAX_ISOMETRY_RANK: usize = 4;

/// An integer `T` with `T·G₂·Tᵀ = G₁`, if the lattices are isometric.
///
/// Backtracking over vectors of `L₂` whose norms match the diagonal of an
/// LLL-reduced Gram of `L₁`, row by row, pruning on inner products.
pub fn is_isometric(l1: &ZLattice, l2: &ZLattice) -> Result<Option<IntMat>> {
    let n = l1.rank();
    if n > MAX_ISOMETRY_RANK || l2.rank() > MAX_ISOMETRY_RANK {
        return Err(Error::RankUnsupported(n.max(l2.rank())));
    }
    if n != l2.rank() || l1.det() != l2.det() {
        return Ok(None);
    }
    let (h1, r1) = lll_gram(l1.gram())?;
    let bound = (0..n).map(|i| r1[(i, i)].clone()).max().expect("rank ≥ 1");
    let sv = short_vectors(l2.gram(), &bound)?;
    let g2 = l2.gram();
    // (vector, vector·G₂) grouped by the target diagonal entry
    let cands: Vec<Vec<(Vec<BigInt>, Vec<Rational>)>> = (0..n)
        .map(|k| {
            sv.vectors
                .iter()
                .filter(|(q, _)| *q == r1[(k, k)])
                .map(|(_, v)| {
                    let vr: Vec<Rational> = v.iter().map(|c| Rational::from_integer(c.clone())).collect();
                    (v.clone(), g2.left_mul_vec(&vr))
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    if !backtrack(&cands, &r1, &mut chosen) {
        return Ok(None);
    }
    let rows: Vec<Vec<BigInt>> = chosen.iter().enumerate().map(|(k, &c)| cands[k][c].0.clone()).collect();
    let t_red = IntMat::from_rows(&rows);
    let h1_inv = inverse(&h1.to_rat())?.to_int().expect("LLL transform is unimodular");
    let t = &h1_inv * &t_red;
    debug_assert!(det_int(&t).abs() == BigInt::one());
    let tr = t.to_rat();
    crate::error::ensure!(
        &(&tr * l2.gram()) * &tr.transpose() == *l1.gram(),
        "isometry search returned a non-isometry"
    );
    Ok(Some(t))
}

fn backtrack(cands: &[Vec<(Vec<BigInt>, Vec<Rational>)>], target: &RatMat, chosen: &mut Vec<usize>) -> bool {
    let k = chosen.len();
    if k == cands.len() {
        return true;
    }
    'next: for (c, (v, _)) in cands[k].iter().enumerate() {
        let vr: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
        for (j, &cj) in chosen.iter().enumerate() {
            if dot(&cands[j][cj].1, &vr) != target[(k, j)] {
                continue 'next;
            }
        }
        chosen.push(c);
        if backtrack(cands, target, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(l1: &ZLattice, l2: &ZLattice) -> bool {
        match is_isometric(l1, l2).unwrap() {
            Some(t) => {
                let tr = t.to_rat();
                assert_eq!(&(&tr * l2.gram()) * &tr.transpose(), *l1.gram());
                true
            }
            None => false,
        }
    }

    #[test]
    fn self_and_permuted() {
        let l = ZLattice::from_i64(3, &[2, 1, 0, 1, 4, 1, 0, 1, 6]).unwrap();
        assert!(check(&l, &l));
        let p = RatMat::from_i64(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
        let lp = l.sublattice(&p).unwrap();
        assert!(check(&l, &lp));
        // a unimodular change of basis
        let u = RatMat::from_i64(3, 3, &[1, 2, -1, 0, 1, 3, 0, 0, 1]);
        assert!(check(&lp, &l.sublattice(&u).unwrap()));
    }

    #[test]
    fn same_determinant_different_class() {
        // det 4 in rank 2: x² + 4y² (min 1) vs 2x² + 2y² (min 2)
        let a = ZLattice::from_i64(2, &[1, 0, 0, 4]).unwrap();
        let b = ZLattice::from_i64(2, &[2, 0, 0, 2]).unwrap();
        assert!(!check(&a, &b));
    }

    #[test]
    fn rank_cap() {
        let l = ZLattice::new(RatMat::identity(5)).unwrap();
        assert!(matches!(is_isometric(&l, &l), Err(Error::RankUnsupported(5))));
    }
}
