use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, legendre, prime_divisors};
use crate::error::{ensure, Error, Result};
use crate::lattice::{is_anisotropic, residue, QeModule, ZLattice};
use crate::linalg::{inverse, kernel_mod, lattice_basis, lattice_intersection, rat, IntMat, RatMat, Rational};
use crate::quat::{Order, QuatElement};

/// Where a ternary lattice came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `L(𝒪)`; the basis as trace-zero quaternions
    FromOrder { embedding: [QuatElement; 3] },
    Enumerated,
    /// `M(L; d)` of another lattice
    Transformed { d: u64 },
}

/// Even positive definite rank-3 lattice.
///
/// The lattice is the set `√s·span(B)` inside a fixed rational quadratic space
/// with Gram `A` (`ambient`), so its Gram is `s·B·A·Bᵀ`. The scale `s` is
/// kept squarefree by moving square factors into `B`; two lattices with the
/// same ambient and scale are equal iff their bases have the same HNF.
#[derive(Clone, Debug)]
pub struct TernaryLattice {
    pub lattice: ZLattice,
    /// rows = basis in ambient coordinates
    pub basis: RatMat,
    pub ambient: RatMat,
    pub scale: u64,
    pub provenance: Provenance,
}

impl TernaryLattice {
    /// Lattice with Gram `g` and no ambient space besides itself.
    pub fn from_gram(g: RatMat) -> Result<TernaryLattice> {
        ensure_rank3(&g)?;
        let lattice = ZLattice::new(g.clone())?;
        if !lattice.is_even() {
            return Err(Error::NotEven);
        }
        Ok(TernaryLattice {
            lattice,
            basis: RatMat::identity(3),
            ambient: g,
            scale: 1,
            provenance: Provenance::Enumerated,
        })
    }

    pub fn from_i64(entries: &[i64; 9]) -> Result<TernaryLattice> {
        TernaryLattice::from_gram(RatMat::from_i64(3, 3, entries))
    }

    pub fn gram(&self) -> &RatMat {
        self.lattice.gram()
    }

    pub fn det(&self) -> Rational {
        self.lattice.det()
    }

    pub fn det_u64(&self) -> u64 {
        self.det().to_integer().to_u64().expect("determinant of a definite integral lattice")
    }

    /// Same subset of the same ambient space.
    pub fn same_lattice(&self, other: &TernaryLattice) -> bool {
        self.ambient == other.ambient
            && self.scale == other.scale
            && lattice_basis(&self.basis) == lattice_basis(&other.basis)
    }

    pub fn minimum(&self) -> Result<Rational> {
        self.lattice.minimum()
    }

    /// `Q(x) = x·x/2` takes the value 1.
    pub fn represents_one(&self) -> Result<bool> {
        Ok(self.minimum()? == rat(2))
    }

    pub fn residue(&self) -> Result<QeModule> {
        residue(&self.lattice)
    }
}

fn ensure_rank3(g: &RatMat) -> Result<()> {
    if g.rows() != 3 || g.cols() != 3 {
        return Err(Error::RankUnsupported(g.rows()));
    }
    Ok(())
}

/// `L(𝒪)`: trace-zero elements with `(x, y) ↦ tr(x̄y)`, in the ambient `A₀`
/// with coordinates `(1, i, j, k)`.
pub fn trace_zero_lattice(o: &Order) -> Result<TernaryLattice> {
    o.require_maximal()?;
    let traces = IntMat::from_rows(&[o.basis.iter().map(|b| b.trace().to_integer()).collect()]);
    let k = kernel_mod(&traces, &BigInt::zero());
    ensure!(k.rows() == 3, "trace-zero sublattice has rank {}", k.rows());
    let basis = lattice_basis(&(&k.to_rat() * o.basis_matrix()));
    let embedding: [QuatElement; 3] =
        std::array::from_fn(|r| QuatElement(std::array::from_fn(|t| basis[(r, t)].clone())));
    let ambient = quaternion_trace_gram(o);
    let g = &(&basis * &ambient) * &basis.transpose();
    let lattice = ZLattice::new(g)?;
    ensure!(lattice.is_even(), "L(O) is not even");
    let d = o.discriminant();
    ensure!(
        lattice.det() == rat(2 * (d * d) as i64),
        "det L(O) = {} instead of 2d²",
        lattice.det()
    );
    Ok(TernaryLattice {
        lattice,
        basis,
        ambient,
        scale: 1,
        provenance: Provenance::FromOrder { embedding },
    })
}

// tr(x̄y) on the coordinates (1, i, j, k): diag(2, -2a, -2b, 2ab)
fn quaternion_trace_gram(o: &Order) -> RatMat {
    let mut g = RatMat::zeros(4, 4);
    for t in 0..4 {
        let e = QuatElement::basis(t);
        g[(t, t)] = o.algebra.inner(&e, &e);
    }
    g
}

/// `M(L; d) = √d·Λ` with `Λ = {x ∈ d⁻¹L ∩ L♯ : d·x·x ∈ 2ℤ}`.
pub fn m_transform(l: &TernaryLattice, d: u64) -> Result<TernaryLattice> {
    ensure!(d >= 1, "d must be positive");
    if !l.lattice.is_even() {
        return Err(Error::NotEven);
    }
    let dr = rat(d as i64);
    let g = l.gram();
    // in L-coordinates: d⁻¹L has basis I/d and L♯ has basis G⁻¹
    let lam0 = lattice_intersection(&RatMat::identity(3).scale(&(Rational::one() / &dr)), &inverse(g)?);
    let m0 = (&(&lam0 * g) * &lam0.transpose()).scale(&dr);
    let m0 = m0
        .to_int()
        .ok_or_else(|| Error::NotIntegral("√d·(d⁻¹L ∩ L♯)".into()))?;
    // x ↦ x·x mod 2 is additive on an integral lattice
    let parity = IntMat::from_rows(&[(0..3).map(|i| m0[(i, i)].clone()).collect()]);
    let even = kernel_mod(&parity, &BigInt::from(2));
    let lam = &even.to_rat() * &lam0;
    let gram = (&(&lam * g) * &lam.transpose()).scale(&dr);

    // ambient: √(s·d)·(lam·B) with s·d = (s/k)(d/k)k², k = gcd(s, d)
    let k = crate::arith::gcd(l.scale as i64, d as i64) as u64;
    let scale = (l.scale / k) * (d / k);
    let basis = (&lam * &l.basis).scale(&rat(k as i64));
    let lattice = ZLattice::new(gram)?;
    ensure!(
        lattice.gram() == &(&(&basis * &l.ambient) * &basis.transpose()).scale(&rat(scale as i64)),
        "transformed Gram disagrees with its ambient presentation"
    );
    Ok(TernaryLattice {
        lattice,
        basis,
        ambient: l.ambient.clone(),
        scale,
        provenance: Provenance::Transformed { d },
    })
}

/// Even, det 2d², and `res L_p` anisotropic for every odd `p | d`.
pub fn is_in_r(l: &TernaryLattice, d: u64) -> Result<bool> {
    if !l.lattice.is_even() || l.det() != rat(2 * (d * d) as i64) {
        return Ok(false);
    }
    let res = l.residue()?;
    for p in odd_primes(d) {
        let part = primary_part(&res, p);
        if part.order() != p * p || !is_anisotropic(&part) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in 𝒮(d) from the residue forms: even, det 2d, and for odd
/// `p | d`, `res M_p ≅ ℤ/p` with `q(x) = a x²/p`, `(a/p) = -((-d/p)/p)`.
pub fn is_in_s_by_residue(m: &TernaryLattice, d: u64) -> Result<bool> {
    if !m.lattice.is_even() || m.det() != rat(2 * d as i64) {
        return Ok(false);
    }
    let res = m.residue()?;
    for p in odd_primes(d) {
        let els: Vec<_> = res
            .primary_elements(p)
            .into_iter()
            .filter(|x| x.iter().any(|&c| c != 0))
            .collect();
        if els.len() as u64 != p - 1 {
            return Ok(false);
        }
        let a = (res.q(&els[0]) * rat(p as i64)).to_integer().to_i64().expect("q ∈ (1/p)ℤ/ℤ");
        let co = -(d as i64 / p as i64);
        if legendre(a, p) != -legendre(co, p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in 𝒮(d) from the genus symbols: `e_p = -(-1/p)` for odd `p | d`.
pub fn is_in_s_by_symbols(m: &TernaryLattice, d: u64) -> Result<bool> {
    if !m.lattice.is_even() || m.det() != rat(2 * d as i64) {
        return Ok(false);
    }
    for p in odd_primes(d) {
        if genus_symbol(m, p)?.e_p != -legendre(-1, p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both membership tests; disagreement is an error.
pub fn is_in_s(m: &TernaryLattice, d: u64) -> Result<bool> {
    let a = is_in_s_by_residue(m, d)?;
    let b = is_in_s_by_symbols(m, d)?;
    ensure!(a == b, "S({d}) membership: residue test says {a}, genus symbols say {b}");
    Ok(a)
}

/// ℤ_p-type `1^{2e_p} p^{e_p'}` at an odd prime exactly dividing the determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GenusSymbol {
    pub p: u64,
    pub e_p: i32,
    pub e_p_prime: i32,
}

/// Diagonalizes the Gram over `ℤ_(p)`; the two unit entries give `e_p`, the
/// entry of valuation one gives `e_p'`. Checks `e_p e_p' = (2d/p)` with
/// `det = 2d`.
pub fn genus_symbol(m: &TernaryLattice, p: u64) -> Result<GenusSymbol> {
    ensure!(p % 2 == 1 && factorize(p).len() == 1 && factorize(p)[0].1 == 1, "{p} is not an odd prime");
    let det = m.det().to_integer();
    let pb = BigInt::from(p);
    ensure!(
        (&det % &pb).is_zero() && !(&det % (&pb * &pb)).is_zero(),
        "{p} does not divide det = {det} exactly once"
    );
    let diag = p_adic_diagonal(m.gram(), p);
    let (units, rest): (Vec<&Rational>, Vec<&Rational>) = diag.iter().partition(|x| valuation(x, p) == 0);
    ensure!(units.len() == 2 && rest.len() == 1 && valuation(rest[0], p) == 1, "unexpected p-adic Jordan type at {p}");
    let e_p = legendre_rat(&(units[0] * units[1]), p);
    let e_p_prime = legendre_rat(&(rest[0] / rat(p as i64)), p);
    let half = (&det / BigInt::from(p)).to_i64().expect("small determinant");
    ensure!(
        e_p * e_p_prime == legendre(half, p),
        "e_p·e_p' = {} but (2d/p) = {}",
        e_p * e_p_prime,
        legendre(half, p)
    );
    Ok(GenusSymbol { p, e_p, e_p_prime })
}

/// Symbols at every odd prime dividing `d`.
pub fn genus_symbols(m: &TernaryLattice, d: u64) -> Result<Vec<GenusSymbol>> {
    odd_primes(d).into_iter().map(|p| genus_symbol(m, p)).collect()
}

/// Diagonal entries of a ℤ_(p)-orthogonal basis, by increasing valuation (p odd).
fn p_adic_diagonal(g: &RatMat, p: u64) -> Vec<Rational> {
    let n = g.rows();
    let mut vecs: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect();
    let ip = |x: &[Rational], y: &[Rational]| crate::linalg::bilinear(g, x, y);
    let mut out = Vec::new();
    while !vecs.is_empty() {
        // an entry of least valuation, diagonal ones first; an off-diagonal
        // minimum is reached through eᵢ + eⱼ since p is odd
        let k = vecs.len();
        let mut diag = (u32::MAX, 0);
        let mut off = (u32::MAX, 0, 0);
        for a in 0..k {
            diag = diag.min((valuation(&ip(&vecs[a], &vecs[a]), p), a));
            for b in a + 1..k {
                off = off.min((valuation(&ip(&vecs[a], &vecs[b]), p), a, b));
            }
        }
        let v: Vec<Rational> = if diag.0 <= off.0 {
            vecs[diag.1].clone()
        } else {
            vecs[off.1].iter().zip(&vecs[off.2]).map(|(x, y)| x + y).collect()
        };
        let vv = ip(&v, &v);
        out.push(vv.clone());
        // project the remaining vectors onto v⊥ and drop one dependent vector
        let mut rest: Vec<Vec<Rational>> = vecs
            .iter()
            .map(|w| {
                let c = ip(w, &v) / &vv;
                w.iter().zip(&v).map(|(a, b)| a - &c * b).collect()
            })
            .collect();
        let drop = rest
            .iter()
            .position(|w| w.iter().all(|c| c.is_zero()))
            .unwrap_or_else(|| pivot_index(&vecs, &v, p));
        rest.remove(drop);
        vecs = rest;
    }
    out.sort_by_key(|x| valuation(x, p));
    out
}

// A vector whose coefficient on v is a p-unit, so the others still span v⊥ over ℤ_(p).
fn pivot_index(vecs: &[Vec<Rational>], v: &[Rational], p: u64) -> usize {
    let n = vecs.len();
    let m = RatMat::from_rows(vecs);
    let c = crate::linalg::solve_row(&m, v).expect("v lies in the span");
    (0..n).find(|&i| !c[i].is_zero() && valuation(&c[i], p) == 0).unwrap_or(0)
}

fn valuation(x: &Rational, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let pb = BigInt::from(p);
    let mut n = x.numer().abs();
    let mut v = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    v
}

fn legendre_rat(x: &Rational, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let r = |n: &BigInt| {
        let m = n % &pb;
        (if m < BigInt::zero() { m + &pb } else { m }).to_i64().expect("small")
    };
    legendre(r(x.numer()) * r(x.denom()), p)
}

pub(crate) fn odd_primes(d: u64) -> Vec<u64> {
    prime_divisors(d).into_iter().filter(|&p| p != 2).collect()
}

/// The p-primary part as a module of its own.
pub(crate) fn primary_part(res: &QeModule, p: u64) -> QeModule {
    let els = res.primary_elements(p);
    // generators: the primary parts of the cyclic factors
    let mut inv = Vec::new();
    let mut gens = Vec::new();
    for (i, &d) in res.invariant_factors.iter().enumerate() {
        let mut pp = 1;
        while d % (pp * p as i64) == 0 {
            pp *= p as i64;
        }
        if pp > 1 {
            let mut g = res.zero();
            g[i] = d / pp;
            inv.push(pp);
            gens.push(g);
        }
    }
    debug_assert_eq!(els.len() as i64, inv.iter().product::<i64>());
    let q: Vec<Rational> = gens.iter().map(|g| res.q(g)).collect();
    let mut b = RatMat::zeros(gens.len(), gens.len());
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            b[(i, j)] = res.b(&gens[i], &gens[j]);
        }
    }
    QeModule::from_values(inv, q, b)
}
