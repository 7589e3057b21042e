use num_traits::{One, Zero};

use super::olattice::{abs_det, find_obasis, E8Invariants, OLattice};
use crate::error::{ensure, Error, Result};
use crate::lattice::{glue, residue, QeModule, SubgroupSpec, ZLattice};
use crate::linalg::{inverse, rat, RatMat, Rational};
use crate::quat::{different, Order, QuatElement, Sublattice};

/// `Λ_λ = e₁𝒪 + e₂𝒪` with `e₁ = (π⁻¹, π⁻¹λ)`, `e₂ = (0, 1)`.
///
/// Equivalently `{(π⁻¹u, π⁻¹λu + v) : u, v ∈ 𝒪}`, which contains `𝒪 × 𝒪`
/// with index `D_A²`.
pub fn build_lambda_lattice(o: &Order, pi: &QuatElement, lambda: &QuatElement) -> Result<OLattice> {
    o.require_maximal()?;
    let d = o.discriminant();
    let m = different(o)?;
    if !o.contains(pi) || o.norm(pi) != rat(d as i64) {
        return Err(Error::BadPi(format!("{pi} does not have norm {d} in the order")));
    }
    if Sublattice::right_ideal(o, pi)? != m || Sublattice::left_ideal(o, pi)? != m {
        return Err(Error::BadPi(format!("{pi} does not generate the different on both sides")));
    }
    if !o.contains(lambda) || !((o.norm(lambda) + rat(1)) / rat(d as i64)).is_integer() {
        return Err(Error::BadLambda(format!("{lambda} is not an element of norm -1 mod {d}")));
    }
    let pi_inv = o.algebra.inverse(pi).expect("nonzero");
    let e1_x = pi_inv.clone();
    let e1_y = o.mul(&pi_inv, lambda);
    let zero = QuatElement::zero();
    let one = QuatElement::one();
    let mut rows = Vec::with_capacity(8);
    for b in &o.basis {
        let mut w = o.coords(&o.mul(&e1_x, b));
        w.extend(o.coords(&o.mul(&e1_y, b)));
        rows.push(w);
    }
    for b in &o.basis {
        let mut w = o.coords(&zero);
        w.extend(o.coords(b));
        rows.push(w);
    }
    let mut l = OLattice::new(o.clone(), RatMat::from_rows(&rows), rat(1))?;
    // 𝒪 × 𝒪 ⊆ Λ with index D²
    let inv = inverse(&l.basis)?;
    ensure!(inv.is_integral(), "O × O is not contained in Λ_λ");
    ensure!(
        abs_det(&inv)? == rat((d * d) as i64),
        "[Λ_λ : O × O] = {} instead of D_A²",
        abs_det(&inv)?
    );
    let e1 = l.from_pair(&e1_x, &e1_y);
    let e2 = l.from_pair(&zero, &one);
    l.set_obasis(e1, e2)?;
    Ok(l)
}

/// Result of the glue construction.
#[derive(Clone, Debug)]
pub struct GlueLattice {
    pub lattice: OLattice,
    /// `[Λ : 𝒪 × 𝒩]`
    pub index: u64,
    /// per prime, the residue generators of the glue subgroup
    pub subgroups: Vec<(u64, SubgroupSpec)>,
}

/// E₈-isometric 𝒪-lattice containing `𝒪 × 𝒩`, `𝒩 = ℳ/√D_A`, found by gluing
/// along an 𝒪-stable isotropic subgroup of order p² at each p | D_A.
pub fn build_glue_lattice(o: &Order) -> Result<GlueLattice> {
    o.require_maximal()?;
    let d = o.discriminant();
    let dr = rat(d as i64);
    let scale = Rational::one() / &dr;
    let m = different(o)?;
    let mb = m.basis.to_rat();
    // L = 𝒪 × ℳ in ambient coordinates, with the second factor scaled by 1/D
    let l_basis = RatMat::block_diag(&RatMat::identity(4), &mb);
    let o_lat = ZLattice::new(o.gram.clone())?;
    let n_lat = ZLattice::new((&(&mb * &o.gram) * &mb.transpose()).scale(&scale))?;
    ensure!(n_lat.is_even(), "N is not even");
    let l = o_lat.direct_sum(&n_lat);
    let res: QeModule = residue(&o_lat)?.direct_sum(&residue(&n_lat)?);
    ensure!(
        Rational::from_integer(res.order().into()) == l.det(),
        "residue of O × N has the wrong order"
    );
    let l_inv = inverse(&l_basis)?;

    // residue class of z·bᵢ
    let act = |z: &[i64], i: usize| -> Result<Vec<i64>> {
        let amb = l_basis.left_mul_vec(&res.lift(z));
        let (x, y) = (o.element_rat(&amb[..4]), o.element_rat(&amb[4..]));
        let b = &o.basis[i];
        let mut w = o.coords(&o.mul(&x, b));
        w.extend(o.coords(&o.mul(&y, b)));
        res.class_of(&l_inv.left_mul_vec(&w))
    };

    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut subgroups = Vec::new();
    let n_o = residue(&o_lat)?.ngens();
    for p in crate::arith::prime_divisors(d) {
        let pi = p as i64;
        let mut found = None;
        for z in res.torsion_elements(pi) {
            let (zx, zy) = z.split_at(n_o);
            if zx.iter().all(|&c| c == 0) || zy.iter().all(|&c| c == 0) || !res.q(&z).is_zero() {
                continue;
            }
            let images: Vec<Vec<i64>> = (0..4).map(|i| act(&z, i)).collect::<Result<_>>()?;
            let span = res.span(&images);
            if span.len() as u64 == p * p && span.iter().all(|x| res.q(x).is_zero()) {
                found = Some(images);
                break;
            }
        }
        let images = found.ok_or(Error::GlueNotFound(p))?;
        subgroups.push((p, SubgroupSpec { generators: images.clone() }));
        gens.extend(images);
    }
    let spec = SubgroupSpec { generators: gens };
    let glued = glue(&l, &res, &spec)?;
    ensure!(glued.subgroup_order == d * d, "glue subgroup has order {}", glued.subgroup_order);
    let basis = &glued.basis * &l_basis;
    let mut lat = OLattice::new(o.clone(), basis, scale)?;
    let index = abs_det(&(&l_basis * &inverse(&lat.basis)?))?;
    ensure!(index == rat((d * d) as i64), "[Λ : O × N] = {index}");
    let (e1, e2) = find_obasis(&lat)?;
    lat.set_obasis(e1, e2)?;
    Ok(GlueLattice {
        lattice: lat,
        index: d * d,
        subgroups,
    })
}

/// `f(u, v) = a·n(u) + tr(ū b v) + c·n(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianBinaryForm {
    pub a: Rational,
    pub b: QuatElement,
    pub c: Rational,
}

impl HamiltonianBinaryForm {
    pub fn new(o: &Order, a: Rational, b: QuatElement, c: Rational) -> Result<Self> {
        let f = HamiltonianBinaryForm { a, b, c };
        if !(f.a > Rational::zero() && f.c > Rational::zero() && f.discriminant(o) < Rational::zero()) {
            return Err(Error::InvalidArgument("form is not positive definite".into()));
        }
        Ok(f)
    }

    /// `Δ(f) = n(b) - ac`.
    pub fn discriminant(&self, o: &Order) -> Rational {
        o.norm(&self.b) - &self.a * &self.c
    }

    pub fn f0() -> Self {
        HamiltonianBinaryForm {
            a: rat(1),
            b: QuatElement::zero(),
            c: rat(1),
        }
    }

    pub fn eval(&self, o: &Order, u: &QuatElement, v: &QuatElement) -> Rational {
        let mid = o.mul(&o.mul(&u.conj(), &self.b), v).trace();
        &self.a * o.norm(u) + mid + &self.c * o.norm(v)
    }

    /// Gram matrix of `2f` on the ℤ-basis `{(bᵢ, 0), (0, bᵢ)}` of `𝒪²`.
    pub fn gram(&self, o: &Order) -> RatMat {
        let mut g = RatMat::zeros(8, 8);
        for i in 0..4 {
            for j in 0..4 {
                g[(i, j)] = &self.a * &o.gram[(i, j)];
                g[(i + 4, j + 4)] = &self.c * &o.gram[(i, j)];
                let t = o.mul(&o.mul(&o.basis[i].conj(), &self.b), &o.basis[j]).trace();
                g[(i, j + 4)] = t.clone();
                g[(j + 4, i)] = t;
            }
        }
        g
    }
}

/// `a = f₀(e₁)`, `c = f₀(e₂)`, `b = h(e₁, e₂)`.
pub fn form_from_obasis(l: &OLattice) -> Result<HamiltonianBinaryForm> {
    let (e1, e2) = l.obasis.as_ref().ok_or(Error::NoObasis)?;
    HamiltonianBinaryForm::new(&l.order, l.f0(e1), l.h(e1, e2), l.f0(e2))
}

/// `f_{π,λ}(u, v) = (n(λ)+1)/D_A · n(u) + tr(ū π⁻¹λ v) + n(v)`.
pub fn pi_lambda_form(o: &Order, pi: &QuatElement, lambda: &QuatElement) -> Result<HamiltonianBinaryForm> {
    let d = rat(o.discriminant() as i64);
    let b = o.mul(&o.algebra.inverse(pi).ok_or_else(|| Error::BadPi("zero".into()))?, lambda);
    HamiltonianBinaryForm::new(o, (o.norm(lambda) + rat(1)) / d, b, rat(1))
}

/// `min f` over `𝒪² − {0}`, by exact enumeration of the rank-8 Gram of `2f`.
pub fn form_minimum(f: &HamiltonianBinaryForm, o: &Order) -> Result<Rational> {
    let z = ZLattice::new(f.gram(o))?;
    Ok(z.minimum()? / rat(2))
}

/// Ordered pairs of roots `(α, β)` with `h(α, β) = target`.
pub fn count_root_pairs(l: &OLattice, target: &QuatElement) -> Result<usize> {
    let roots = l.roots()?;
    ensure!(!roots.is_empty(), "lattice has no roots");
    // |h(α,β)|² ≤ f₀(α)f₀(β) = 1
    if l.order.norm(target) > rat(1) {
        return Ok(0);
    }
    let pairs: Vec<(QuatElement, QuatElement)> = roots.iter().map(|w| l.pair(w)).collect();
    let conj: Vec<(QuatElement, QuatElement)> = pairs.iter().map(|(x, y)| (x.conj(), y.conj().scale(&l.scale))).collect();
    let mut count = 0;
    for (x1, y1) in &pairs {
        for (x2c, y2c) in &conj {
            let h = &l.order.mul(x2c, x1) + &l.order.mul(y2c, y1);
            if h == *target {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `24 = (p-1)pⁿm` and the orbit counts `r_Λ`, which must sum to `(p+1)/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub p: u64,
    pub n: u32,
    pub m: u64,
    /// `|U(Λ)|` for each orbit representative
    pub unitary_orders: Vec<u64>,
    /// `r_Λ = 240pⁿ/|U(Λ)|`
    pub r: Vec<u64>,
    /// `Σ r_Λ = (p+1)/m`
    pub sum_ok: bool,
}

pub fn factor_24(p: u64) -> Result<(u32, u64)> {
    ensure!(p >= 2 && 24 % (p - 1) == 0, "p - 1 = {} does not divide 24", p - 1);
    let mut rest = 24 / (p - 1);
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    Ok((n, rest))
}

/// Orbit data for `p = D_A` with `h_A = 1`, over a complete list of orbit
/// representatives (each carrying an 𝒪-basis of roots).
pub fn orbit_report(p: u64, lattices: &[&OLattice]) -> Result<OrbitReport> {
    let (n, m) = factor_24(p)?;
    let mut unitary_orders = Vec::new();
    let mut r = Vec::new();
    for l in lattices {
        ensure!(l.order.discriminant() == p, "lattice over the wrong order");
        let (e1, e2) = l.obasis.as_ref().ok_or(Error::NoObasis)?;
        ensure!(l.f0(e1) == rat(1) && l.f0(e2) == rat(1), "O-basis does not consist of roots");
        let u = count_root_pairs(l, &l.h(e1, e2))? as u64;
        let num = 240 * p.pow(n);
        ensure!(u > 0 && num % u == 0, "240·p^n / |U(Λ)| = {num}/{u} is not an integer");
        unitary_orders.push(u);
        r.push(num / u);
    }
    let total: u64 = r.iter().sum();
    let sum_ok = (p + 1) % m == 0 && total == (p + 1) / m;
    ensure!(sum_ok, "Σ r_Λ = {total} differs from (p+1)/m = {}/{m}", p + 1);
    Ok(OrbitReport {
        p,
        n,
        m,
        unitary_orders,
        r,
        sum_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Lambda,
    Glue,
}

/// Invariants of one E₈ construction and the γ₂ witness it yields.
#[derive(Clone, Debug)]
pub struct E8Report {
    pub discriminant: u64,
    pub construction: Construction,
    pub invariants: E8Invariants,
    pub index: u64,
    pub obasis: bool,
    pub form: HamiltonianBinaryForm,
    pub form_minimum: Rational,
    pub form_discriminant: Rational,
    /// γ₂(𝒪)² = D_A; the lower bound is witnessed by `form`, the upper bound cites γ₈ = 2
    pub gamma2_squared: u64,
}

impl E8Report {
    pub fn passed(&self) -> bool {
        let d = rat(self.discriminant as i64);
        self.invariants.is_e8()
            && self.obasis
            && self.index == self.discriminant * self.discriminant
            && self.form_minimum == rat(1)
            && self.form_discriminant == -(Rational::one() / &d)
    }
}

fn report(o: &Order, l: &OLattice, construction: Construction, index: u64) -> Result<E8Report> {
    l.check_action()?;
    let invariants = E8Invariants::of(&l.lattice)?;
    let form = form_from_obasis(l)?;
    let form_minimum = form_minimum(&form, o)?;
    let form_discriminant = form.discriminant(o);
    Ok(E8Report {
        discriminant: o.discriminant(),
        construction,
        invariants,
        index,
        obasis: l.obasis.is_some(),
        form,
        form_minimum,
        form_discriminant,
        gamma2_squared: o.discriminant(),
    })
}

pub fn lambda_report(o: &Order, pi: &QuatElement, lambda: &QuatElement) -> Result<(OLattice, E8Report)> {
    let l = build_lambda_lattice(o, pi, lambda)?;
    let d = o.discriminant();
    let r = report(o, &l, Construction::Lambda, d * d)?;
    Ok((l, r))
}

pub fn glue_report(o: &Order) -> Result<(OLattice, E8Report)> {
    let g = build_glue_lattice(o)?;
    let r = report(o, &g.lattice, Construction::Glue, g.index)?;
    Ok((g.lattice, r))
}

/// Glue route always; Λ_λ route as well when the different is principal.
pub fn verify_gamma2(o: &Order) -> Result<Vec<E8Report>> {
    o.require_maximal()?;
    let mut out = Vec::new();
    if let Ok((pi, lambda)) = crate::quat::find_pi_lambda(o) {
        out.push(lambda_report(o, &pi, &lambda)?.1);
    }
    out.push(glue_report(o)?.1);
    for r in &out {
        ensure!(r.passed(), "{:?} construction fails the E8 / witness checks", r.construction);
    }
    Ok(out)
}
