use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMat;

/// Smith normal form `u * m * v = diag(d)` with `d[0] | d[1] | …`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: Vec<BigInt>,
    pub u: IntMat,
    pub v: IntMat,
}

pub fn snf(m: &IntMat) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[(i, j)].is_zero()
                        && best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, n);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                if !q.is_zero() {
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[(i, j)] % &a[(t, t)]).is_zero());
            match bad {
                Some((i, _)) => {
                    // row_t += row_i, then re-reduce
                    row_axpy(&mut a, t, i, &BigInt::from(-1));
                    row_axpy(&mut u, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for x in a.row_mut(t) {
                *x = -x.clone();
            }
            for x in u.row_mut(t) {
                *x = -x.clone();
            }
        }
    }
    finish(a, u, v, n)
}

fn finish(a: IntMat, u: IntMat, v: IntMat, n: usize) -> Snf {
    Snf {
        d: (0..n).map(|i| a[(i, i)].clone()).collect(),
        u,
        v,
    }
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = x;
    }
}

// row_i -= q * row_t
fn row_axpy(m: &mut IntMat, i: usize, t: usize, q: &BigInt) {
    for k in 0..m.cols() {
        let x = q * &m[(t, k)];
        m[(i, k)] -= x;
    }
}

// col_j -= q * col_t
fn col_axpy(m: &mut IntMat, j: usize, t: usize, q: &BigInt) {
    for k in 0..m.rows() {
        let x = q * &m[(k, t)];
        m[(k, j)] -= x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det_int, int};
    use num_traits::One;
    use proptest::prelude::*;

    fn diag(s: &Snf, rows: usize, cols: usize) -> IntMat {
        let mut d = IntMat::zeros(rows, cols);
        for (i, x) in s.d.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    #[test]
    fn examples() {
        assert_eq!(snf(&IntMat::identity(3)).d, vec![int(1); 3]);
        assert_eq!(snf(&IntMat::from_i64(2, 2, &[2, 0, 0, 4])).d, vec![int(2), int(4)]);
        assert_eq!(snf(&IntMat::from_i64(2, 2, &[2, 1, 1, 2])).d, vec![int(1), int(3)]);
        assert_eq!(snf(&IntMat::from_i64(2, 2, &[4, 0, 0, 6])).d, vec![int(2), int(12)]);
    }

    fn small_matrix() -> impl Strategy<Value = IntMat> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..10, r * c).prop_map(move |v| IntMat::from_i64(r, c, &v))
        })
    }

    proptest! {
        #[test]
        fn snf_is_a_valid_decomposition(m in small_matrix()) {
            let s = snf(&m);
            let (r, c) = (m.rows(), m.cols());
            prop_assert_eq!(&(&s.u * &m) * &s.v, diag(&s, r, c));
            prop_assert_eq!(det_int(&s.u).abs(), BigInt::one());
            prop_assert_eq!(det_int(&s.v).abs(), BigInt::one());
            for w in s.d.windows(2) {
                prop_assert!(!w[0].is_negative() && !w[1].is_negative());
                if w[0].is_zero() { prop_assert!(w[1].is_zero()); }
                else { prop_assert!((&w[1] % &w[0]).is_zero()); }
            }
            if r == c {
                let prod: BigInt = s.d.iter().product();
                prop_assert_eq!(prod, det_int(&m).abs());
            }
            // idempotent
            let again = snf(&diag(&s, r, c));
            prop_assert_eq!(again.d, s.d);
        }
    }
}
