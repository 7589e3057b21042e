//! Small-integer number theory: primes, factorization, Legendre symbols.

/// Primes dividing `n`, ascending, with multiplicity exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Squarefree with an odd number of prime factors: the discriminants of
/// definite quaternion algebras over ℚ.
pub fn is_admissible(d: u64) -> bool {
    is_squarefree(d) && factorize(d).len() % 2 == 1
}

pub fn mod_pow(mut b: i64, mut e: u64, m: i64) -> i64 {
    let mut r = 1i64.rem_euclid(m);
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as i128 * b as i128) % m as i128) as i64;
        }
        b = ((b as i128 * b as i128) % m as i128) as i64;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(a/p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let p = p as i64;
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    if mod_pow(a, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_divisors(97), vec![97]);
    }

    #[test]
    fn admissible_discriminants() {
        let ds: Vec<u64> = (1..=100).filter(|&d| is_admissible(d)).collect();
        assert_eq!(ds.len(), 30);
        assert_eq!(&ds[..6], &[2, 3, 5, 7, 11, 13]);
        assert!(ds.contains(&30) && ds.contains(&78) && !ds.contains(&6) && !ds.contains(&1));
    }

    #[test]
    fn legendre_by_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 37] {
            for a in -20i64..20 {
                let squares: Vec<i64> = (1..p as i64).map(|x| x * x % p as i64).collect();
                let expect = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if squares.contains(&a.rem_euclid(p as i64)) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a, p), expect, "({a}/{p})");
            }
        }
    }
}
