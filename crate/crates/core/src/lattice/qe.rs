//! Residue groups `L♯/L` with their ℚ/ℤ-valued quadratic form.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::zlattice::ZLattice;
use crate::arith::{factorize, gcd};
use crate::error::{Error, Result};
use crate::linalg::{frac_part, inverse, snf, to_i64, RatMat, Rational};

/// Finite abelian group `⊕ ℤ/dᵢ` with a quadratic form `q` valued in ℚ/ℤ.
///
/// Elements are coordinate vectors reduced into `[0, dᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QeModule {
    pub invariant_factors: Vec<i64>,
    /// rows = lifts of the generators to `L♯`, in the coordinates of `L`
    pub generator_lift: RatMat,
    /// `q(gᵢ)` in `[0, 1)`
    pub q_values: Vec<Rational>,
    /// `b(gᵢ, gⱼ)` in `[0, 1)`
    pub bilinear: RatMat,
    // Converts L-coordinates of an element of L♯ to residue coordinates: (x·G·V) mod d.
    to_residue: RatMat,
}

pub type Element = Vec<i64>;

/// `residue(L)`: the group `L♯/L` in Smith coordinates with `q(x) = x·x/2 mod 1`.
pub fn residue(l: &ZLattice) -> Result<QeModule> {
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let g = l.gram().to_int().expect("even lattices are integral");
    let n = l.rank();
    let s = snf(&g);
    let ginv = inverse(l.gram())?;
    let vinv = inverse(&s.v.to_rat())?;
    let gv = (&g * &s.v).to_rat();
    let keep: Vec<usize> = (0..n).filter(|&i| s.d[i] != BigInt::from(1)).collect();
    let invariant_factors: Vec<i64> = keep.iter().map(|&i| to_i64(&s.d[i])).collect();
    let lifts: Vec<Vec<Rational>> = keep.iter().map(|&i| ginv.left_mul_vec(vinv.row(i))).collect();
    let m = keep.len();
    let generator_lift = if m == 0 { RatMat::zeros(0, n) } else { RatMat::from_rows(&lifts) };
    let mut to_residue = RatMat::zeros(n, m);
    for (c, &i) in keep.iter().enumerate() {
        for r in 0..n {
            to_residue[(r, c)] = gv[(r, i)].clone();
        }
    }
    Ok(QeModule::from_lifts(l, invariant_factors, generator_lift, to_residue))
}

impl QeModule {
    fn from_lifts(l: &ZLattice, invariant_factors: Vec<i64>, generator_lift: RatMat, to_residue: RatMat) -> QeModule {
        let m = invariant_factors.len();
        let half = Rational::new(1.into(), 2.into());
        let q_values = (0..m)
            .map(|i| frac_part(&(l.norm(generator_lift.row(i)) * &half)))
            .collect();
        let mut bilinear = RatMat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                bilinear[(i, j)] = frac_part(&l.inner(generator_lift.row(i), generator_lift.row(j)));
            }
        }
        QeModule {
            invariant_factors,
            generator_lift,
            q_values,
            bilinear,
            to_residue,
        }
    }

    /// Module given directly by generator values (no lattice behind it).
    pub fn from_values(invariant_factors: Vec<i64>, q_values: Vec<Rational>, bilinear: RatMat) -> QeModule {
        let m = invariant_factors.len();
        QeModule {
            invariant_factors,
            generator_lift: RatMat::zeros(m, 0),
            q_values: q_values.iter().map(frac_part).collect(),
            bilinear: bilinear.map(frac_part),
            to_residue: RatMat::zeros(0, m),
        }
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().map(|&d| d as u64).product()
    }

    pub fn ngens(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.ngens()]
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter()
            .zip(&self.invariant_factors)
            .map(|(v, d)| v.rem_euclid(*d))
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, m: i64, x: &[i64]) -> Element {
        let s: Vec<i64> = x.iter().map(|a| a * m).collect();
        self.reduce(&s)
    }

    /// `q(x)` in `[0, 1)`.
    pub fn q(&self, x: &[i64]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.ngens() {
            if x[i] == 0 {
                continue;
            }
            let xi = Rational::from_integer(x[i].into());
            s += &xi * &xi * &self.q_values[i];
            for j in i + 1..self.ngens() {
                if x[j] != 0 {
                    s += &xi * Rational::from_integer(x[j].into()) * &self.bilinear[(i, j)];
                }
            }
        }
        frac_part(&s)
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &[i64], y: &[i64]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.ngens() {
            for j in 0..self.ngens() {
                if x[i] != 0 && y[j] != 0 {
                    s += Rational::from_integer((x[i] * y[j]).into()) * &self.bilinear[(i, j)];
                }
            }
        }
        frac_part(&s)
    }

    /// Residue class of `x ∈ L♯` given in L-coordinates.
    pub fn class_of(&self, x: &[Rational]) -> Result<Element> {
        let v = self.to_residue.left_mul_vec(x);
        let mut out = Vec::with_capacity(v.len());
        for c in &v {
            if !c.is_integer() {
                return Err(Error::InvalidArgument("vector is not in the dual lattice".into()));
            }
            out.push(c.to_integer().to_i64().ok_or_else(|| Error::Check("residue coordinate overflow".into()))?);
        }
        Ok(self.reduce(&out))
    }

    /// A lift of `x` to `L♯`, in L-coordinates.
    pub fn lift(&self, x: &[i64]) -> Vec<Rational> {
        let c: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.generator_lift.left_mul_vec(&c)
    }

    /// All elements, in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<Element> {
        box_elements(&self.invariant_factors.iter().map(|&d| (d, 1)).collect::<Vec<_>>(), &self.invariant_factors)
    }

    /// Elements of the p-primary part `V_p`.
    pub fn primary_elements(&self, p: u64) -> Vec<Element> {
        let spec: Vec<(i64, i64)> = self
            .invariant_factors
            .iter()
            .map(|&d| {
                let pp = p_part(d, p);
                (pp, d / pp)
            })
            .collect();
        box_elements(&spec, &self.invariant_factors)
    }

    /// Elements killed by `p`.
    pub fn torsion_elements(&self, p: i64) -> Vec<Element> {
        let spec: Vec<(i64, i64)> = self
            .invariant_factors
            .iter()
            .map(|&d| {
                let g = gcd(d, p);
                (g, d / g)
            })
            .collect();
        box_elements(&spec, &self.invariant_factors)
    }

    /// Invariant factors of `V_p` (nontrivial ones only).
    pub fn primary_invariants(&self, p: u64) -> Vec<i64> {
        self.invariant_factors
            .iter()
            .map(|&d| p_part(d, p))
            .filter(|&d| d > 1)
            .collect()
    }

    pub fn primes(&self) -> Vec<u64> {
        factorize(self.order()).into_iter().map(|(p, _)| p).collect()
    }

    /// `b` is nondegenerate: no nonzero x is orthogonal to every generator.
    pub fn is_nondegenerate(&self) -> bool {
        let gens: Vec<Element> = (0..self.ngens())
            .map(|i| {
                let mut e = self.zero();
                e[i] = 1;
                e
            })
            .collect();
        self.elements()
            .iter()
            .filter(|x| x.iter().any(|&v| v != 0))
            .all(|x| gens.iter().any(|g| !self.b(x, g).is_zero()))
    }

    /// Span of a list of elements.
    pub fn span(&self, gens: &[Element]) -> Vec<Element> {
        let mut seen: BTreeSet<Element> = BTreeSet::new();
        seen.insert(self.zero());
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_isotropic_subgroup(&self, gens: &[Element]) -> bool {
        self.span(gens).iter().all(|x| self.q(x).is_zero())
    }

    /// Orthogonal direct sum; residue coordinates concatenate.
    pub fn direct_sum(&self, other: &QeModule) -> QeModule {
        let mut inv = self.invariant_factors.clone();
        inv.extend(&other.invariant_factors);
        let mut q = self.q_values.clone();
        q.extend(other.q_values.iter().cloned());
        QeModule {
            invariant_factors: inv,
            generator_lift: RatMat::block_diag(&self.generator_lift, &other.generator_lift),
            q_values: q,
            bilinear: RatMat::block_diag(&self.bilinear, &other.bilinear),
            to_residue: RatMat::block_diag(&self.to_residue, &other.to_residue),
        }
    }
}

fn p_part(mut d: i64, p: u64) -> i64 {
    let p = p as i64;
    let mut pp = 1;
    while d % p == 0 {
        d /= p;
        pp *= p;
    }
    pp
}

// coordinates c_i = k·step_i with 0 ≤ k < count_i
fn box_elements(spec: &[(i64, i64)], moduli: &[i64]) -> Vec<Element> {
    let mut out = vec![Vec::with_capacity(spec.len())];
    for (i, &(count, step)) in spec.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * count as usize);
        for x in &out {
            for k in 0..count {
                let mut y = x.clone();
                y.push((k * step).rem_euclid(moduli[i]));
                next.push(y);
            }
        }
        out = next;
    }
    out.sort();
    out
}

pub fn is_anisotropic(v: &QeModule) -> bool {
    v.primes().into_iter().all(|p| {
        v.primary_elements(p)
            .iter()
            .all(|x| x.iter().all(|&c| c == 0) || !v.q(x).is_zero())
    })
}

fn e(q: &Rational) -> Complex64 {
    // q ∈ [0,1): exact up to one rounding of the angle
    let t = q.to_f64().unwrap_or(0.0);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

/// `γ(V) = |V|^{-1/2} Σ e^{2iπ q(x)}`.
pub fn gauss_sum(v: &QeModule) -> Complex64 {
    let s: Complex64 = v.elements().iter().map(|x| e(&v.q(x))).sum();
    s / (v.order() as f64).sqrt()
}

/// Gauss sum of the p-primary part.
pub fn primary_gauss_sum(v: &QeModule, p: u64) -> Complex64 {
    let els = v.primary_elements(p);
    let s: Complex64 = els.iter().map(|x| e(&v.q(x))).sum();
    s / (els.len() as f64).sqrt()
}

/// `e^{2iπ s/8}`.
pub fn milgram_value(rank: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rank as f64 / 8.0)
}
