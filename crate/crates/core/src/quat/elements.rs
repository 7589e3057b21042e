use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::algebra::QuatElement;
use super::order::{different, Order, Sublattice};
use crate::error::{Error, Result};
use crate::lattice::short_vectors;
use crate::linalg::{rat, Rational};

/// All `x ∈ 𝒪` with `n(x) = n` (and `tr(x) = 0` if asked), sorted.
pub fn enumerate_by_norm(o: &Order, n: u64, trace_zero: bool) -> Result<Vec<QuatElement>> {
    if n == 0 {
        return Ok(vec![QuatElement::zero()]);
    }
    // tr(x̄x) = 2n(x)
    let target = rat(2 * n as i64);
    let sv = short_vectors(&o.gram, &target)?;
    let mut out: Vec<QuatElement> = sv
        .vectors
        .iter()
        .filter(|(q, _)| *q == target)
        .map(|(_, c)| o.element(c))
        .filter(|x| !trace_zero || x.trace().is_zero())
        .collect();
    out.sort();
    Ok(out)
}

/// Elements of norm at most `n`, grouped by nothing, sorted.
pub fn elements_up_to_norm(o: &Order, n: u64) -> Result<Vec<QuatElement>> {
    let sv = short_vectors(&o.gram, &rat(2 * n as i64))?;
    let mut out: Vec<QuatElement> = sv.vectors.iter().map(|(_, c)| o.element(c)).collect();
    out.sort();
    Ok(out)
}

pub fn unit_group(o: &Order) -> Result<Vec<QuatElement>> {
    enumerate_by_norm(o, 1, false)
}

/// Some `x ∈ 𝒪` with `x² = -D_A`, verified to generate the different on both sides.
pub fn principal_different_witness(o: &Order) -> Result<Option<QuatElement>> {
    let m = different(o)?;
    let cands = enumerate_by_norm(o, o.discriminant(), true)?;
    let Some(x) = pick(&cands) else {
        return Ok(None);
    };
    crate::error::ensure!(
        o.mul(&x, &x) == QuatElement::scalar(-rat(o.discriminant() as i64)),
        "witness does not square to -D_A"
    );
    crate::error::ensure!(
        Sublattice::right_ideal(o, &x)? == m && Sublattice::left_ideal(o, &x)? == m,
        "witness does not generate the different"
    );
    Ok(Some(x))
}

/// Generator of the different, if it is principal.
pub fn different_generator(o: &Order) -> Result<Option<QuatElement>> {
    let m = different(o)?;
    // any element of norm D_A inside ℳ generates it (same index)
    let cands: Vec<QuatElement> = enumerate_by_norm(o, o.discriminant(), false)?
        .into_iter()
        .filter(|x| m.contains(x))
        .collect();
    let Some(pi) = pick(&cands) else {
        return Ok(None);
    };
    crate::error::ensure!(
        Sublattice::right_ideal(o, &pi)? == m && Sublattice::left_ideal(o, &pi)? == m,
        "πO = Oπ = ℳ fails for π = {pi}"
    );
    Ok(Some(pi))
}

/// `(π, λ)` with `ℳ = π𝒪 = 𝒪π` and `n(λ) ≡ -1 (mod D_A)`.
pub fn find_pi_lambda(o: &Order) -> Result<(QuatElement, QuatElement)> {
    let pi = different_generator(o)?.ok_or(Error::NotPrincipal)?;
    let d = o.discriminant();
    let mut n = d - 1;
    loop {
        let cands = enumerate_by_norm(o, n, false)?;
        if let Some(lambda) = pick(&cands) {
            return Ok((pi, lambda));
        }
        n += d;
    }
}

/// Deterministic choice among candidates of equal norm: integral
/// coordinates first, then small ℓ¹ size, few nonzero coordinates, large
/// real part, and finally positive leading coordinates.
pub fn pick(cands: &[QuatElement]) -> Option<QuatElement> {
    cands.iter().min_by_key(|x| preference_key(x)).cloned()
}

type Key = (BigInt, Rational, usize, Rational, Vec<(bool, bool, Rational)>);

fn preference_key(x: &QuatElement) -> Key {
    let den = x.0.iter().map(|c| c.denom().clone()).max().unwrap_or_default();
    let l1: Rational = x.0.iter().map(|c| c.abs()).sum();
    let support = x.0.iter().filter(|c| !c.is_zero()).count();
    let coords = x.0.iter().map(|c| (c.is_zero(), c.is_negative(), c.abs())).collect();
    (den, l1, support, -x.0[0].clone(), coords)
}
