use std::fs;

use quatlat::hamiltonian::{
    count_root_pairs, glue_report, lambda_report, orbit_report, E8Report, HamiltonianBinaryForm, OLattice,
    OrbitReport,
};
use quatlat::linalg::{format_rational, RatMat, Rational};
use quatlat::quat::{
    different, find_pi_lambda, parse_preset, preset, principal_different_witness, unit_group, Order, Preset,
    QuatElement,
};
use quatlat::ternary::{
    deuring_check, enumerate_s, genus_symbols, m_transform, order_from_ternary, table_row, theorem25_report,
    TableRow, TernaryLattice,
};
use quatlat::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::Outcome;
use crate::{OrderSource, Route};

const GAMMA8: &str = "gamma8 = 2 (upper bound on the Hermite constant in dimension 8)";

fn q(x: &QuatElement) -> String {
    x.to_string()
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn mat(m: &RatMat) -> Value {
    Value::from(m.row_vecs().iter().map(|row| row.iter().map(r).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn load(source: &OrderSource) -> Result<(Preset, Value)> {
    match (&source.preset, &source.order_file) {
        (Some(name), None) => Ok((preset(name)?, json!({ "preset": name }))),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            let p = parse_preset(&text).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
                e => e,
            })?;
            Ok((p, json!({ "order_file": path.display().to_string() })))
        }
        _ => Err(Error::InvalidArgument("give exactly one of --preset or --order-file".into())),
    }
}

fn order_json(o: &Order) -> Value {
    json!({
        "algebra": { "a": r(&o.algebra.a), "b": r(&o.algebra.b) },
        "basis": o.basis.iter().map(q).collect::<Vec<_>>(),
    })
}

pub fn order_info(source: &OrderSource) -> Result<Outcome> {
    let (p, inputs) = load(source)?;
    let o = &p.order;
    let mut out = order_json(o);
    let maximal = o.is_maximal();
    out["discriminant"] = json!(o.discriminant());
    out["maximal"] = json!(maximal);
    let mut failures = Vec::new();
    if maximal {
        let m = different(o)?;
        let witness = principal_different_witness(o)?;
        out["different_basis"] = json!(m.elements().iter().map(q).collect::<Vec<_>>());
        out["principal_different"] = json!(witness.is_some());
        out["principal_witness"] = json!(witness.as_ref().map(q));
        out["unit_count"] = json!(unit_group(o)?.len());
    } else {
        failures.push(format!(
            "maximality: reduced discriminant {} differs from the algebra discriminant",
            o.reduced_discriminant
        ));
    }
    Ok(Outcome {
        inputs,
        outputs: out,
        failures,
        ..Default::default()
    })
}

fn form_json(f: &HamiltonianBinaryForm) -> Value {
    json!({ "a": r(&f.a), "b": q(&f.b), "c": r(&f.c) })
}

fn e8_json(rep: &E8Report) -> Value {
    let inv = &rep.invariants;
    json!({
        "construction": rep.construction,
        "even": inv.is_even,
        "det": r(&inv.det),
        "minimum": r(&inv.minimum),
        "roots": inv.root_count,
        "is_e8": inv.is_e8(),
        "index": rep.index,
        "obasis": rep.obasis,
        "form": form_json(&rep.form),
        "form_minimum": r(&rep.form_minimum),
        "form_discriminant": r(&rep.form_discriminant),
        "gamma2_squared": rep.gamma2_squared,
        "gamma2": format!("sqrt({})", rep.gamma2_squared),
        "passed": rep.passed(),
    })
}

fn orbit_json(o: &OrbitReport) -> Value {
    json!({
        "p": o.p,
        "n": o.n,
        "m": o.m,
        "unitary_orders": o.unitary_orders,
        "r": o.r,
        "sum": o.r.iter().sum::<u64>(),
        "sum_ok": o.sum_ok,
    })
}

fn unitary_order(l: &OLattice) -> Result<usize> {
    let (e1, e2) = l.obasis.as_ref().ok_or(Error::NoObasis)?;
    count_root_pairs(l, &l.h(e1, e2))
}

fn check_e8(rep: &E8Report, label: &str, failures: &mut Vec<String>) {
    let d = rep.discriminant;
    let inv = &rep.invariants;
    let mut fail = |what: String| failures.push(format!("{label}: {what}"));
    if !inv.is_e8() {
        fail(format!(
            "E8 invariants (even {}, det {}, min {}, roots {})",
            inv.is_even,
            r(&inv.det),
            r(&inv.minimum),
            inv.root_count
        ));
    }
    if !rep.obasis {
        fail("missing O-basis".into());
    }
    if rep.index != d * d {
        fail(format!("index {} instead of D_A^2 = {}", rep.index, d * d));
    }
    if rep.form_minimum != quatlat::linalg::rat(1) {
        fail(format!("witness form minimum {} instead of 1", r(&rep.form_minimum)));
    }
    if rep.form_discriminant != quatlat::linalg::frac(-1, d as i64) {
        fail(format!("witness form discriminant {} instead of -1/{d}", r(&rep.form_discriminant)));
    }
}

pub fn gamma2(source: &OrderSource, route: Route, lambda: Option<&str>) -> Result<Outcome> {
    let (p, mut inputs) = load(source)?;
    inputs["route"] = json!(format!("{route:?}").to_lowercase());
    if let Some(name) = lambda {
        inputs["lambda"] = json!(name);
    }
    let o = &p.order;
    o.require_maximal()?;
    let d = o.discriminant();
    let mut failures = Vec::new();
    let mut reports = Vec::new();

    if route != Route::Glue {
        let (pi, found) = match find_pi_lambda(o) {
            Ok(x) => x,
            Err(Error::NotPrincipal) if route == Route::Both => (QuatElement::zero(), QuatElement::zero()),
            Err(Error::NotPrincipal) => {
                return Err(Error::InvalidArgument(
                    "the lambda route needs a principal different; use --route glue".into(),
                ))
            }
            Err(e) => return Err(e),
        };
        if !pi.is_zero() {
            let lambdas: Vec<(String, QuatElement)> = match lambda {
                Some(name) => {
                    let l = p.lambdas.get(name).ok_or_else(|| {
                        let known: Vec<&str> = p.lambdas.keys().map(|k| k.as_str()).collect();
                        Error::InvalidArgument(format!("no lambda named '{name}' (known: {})", known.join(", ")))
                    })?;
                    vec![(name.to_string(), l.clone())]
                }
                None if !p.lambdas.is_empty() => p.lambdas.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
                None => vec![("searched".to_string(), found)],
            };
            let mut lattices = Vec::new();
            for (name, l) in &lambdas {
                let (lat, rep) = lambda_report(o, &pi, l)?;
                let u = unitary_order(&lat)?;
                let mut v = e8_json(&rep);
                v["pi"] = json!(q(&pi));
                v["lambda_name"] = json!(name);
                v["lambda"] = json!(q(l));
                v["unitary_order"] = json!(u);
                check_e8(&rep, &format!("lambda route ({name})"), &mut failures);
                reports.push(v);
                lattices.push(lat);
            }
            // orbit data needs every orbit representative, so only without --lambda
            if lambda.is_none() && quatlat::hamiltonian::factor_24(d).is_ok() && d > 1 {
                let refs: Vec<&OLattice> = lattices.iter().collect();
                match orbit_report(d, &refs) {
                    Ok(orb) => {
                        let v = orbit_json(&orb);
                        reports.push(json!({ "orbits": v }));
                    }
                    Err(e) => failures.push(format!("orbit identity: {e}")),
                }
            }
        }
    }
    if route != Route::Lambda {
        let (_, rep) = glue_report(o)?;
        check_e8(&rep, "glue route", &mut failures);
        reports.push(e8_json(&rep));
    }
    Ok(Outcome {
        inputs,
        outputs: json!({ "discriminant": d, "reports": reports }),
        failures,
        premises: vec![GAMMA8.to_string()],
        csv: None,
    })
}

pub fn table(dmax: u64, deuring: bool, jobs: Option<usize>) -> Result<Outcome> {
    if dmax < 2 {
        return Err(Error::InvalidArgument(format!("--dmax must be at least 2, got {dmax}")));
    }
    let ds = quatlat::ternary::admissible_up_to(dmax);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    // par_iter + collect keeps the order of ds
    let rows: Vec<TableRow> = pool.install(|| ds.par_iter().map(|&d| table_row(d)).collect::<Result<_>>())?;

    let mut csv = String::from(if deuring { "d,t,t_dnp,deuring_ok\n" } else { "d,t,t_dnp\n" });
    let mut failures = Vec::new();
    let mut out = Vec::new();
    for row in &rows {
        let mut v = json!({ "d": row.d, "t": row.t, "t_dnp": row.t_dnp });
        csv.push_str(&format!("{},{},{}", row.d, row.t, row.t_dnp));
        if deuring {
            let check = deuring_check(row);
            if check == Some(false) {
                failures.push(format!("class number identity fails at p = {}", row.d));
            }
            v["deuring_ok"] = json!(check);
            csv.push_str(match check {
                Some(true) => ",true",
                Some(false) => ",false",
                None => ",-",
            });
        }
        csv.push('\n');
        out.push(v);
    }
    Ok(Outcome {
        inputs: json!({ "dmax": dmax, "deuring": deuring }),
        outputs: json!({ "rows": out }),
        failures,
        premises: Vec::new(),
        csv: Some(csv),
    })
}

pub fn theorem25(source: &OrderSource, from_ternary: Option<&[u64]>) -> Result<Outcome> {
    let (o, inputs, extra) = match from_ternary {
        Some(&[d, idx]) => {
            let s = enumerate_s(d)?;
            let m = s.get(idx as usize).ok_or_else(|| {
                Error::InvalidArgument(format!("d = {d} has {} classes, index {idx} is out of range", s.len()))
            })?;
            let l = m_transform(m, d)?;
            let (o, _) = order_from_ternary(&l, d)?;
            let extra = json!({
                "ternary_gram": mat(m.gram()),
                "ternary_minimum": r(&m.minimum()?),
            });
            (o, json!({ "from_ternary": { "d": d, "index": idx } }), Some(extra))
        }
        Some(_) => unreachable!("clap enforces two values"),
        None => {
            let (p, inputs) = load(source)?;
            (p.order, inputs, None)
        }
    };
    let rep = theorem25_report(&o)?;
    let mut out = order_json(&o);
    out["discriminant"] = json!(o.discriminant());
    out["conditions"] = json!(rep);
    out["agree"] = json!(rep.agree());
    if let Some(Value::Object(extra)) = extra {
        for (k, v) in extra {
            out[k] = v;
        }
    }
    let failures = if rep.agree() {
        Vec::new()
    } else {
        vec![format!("the five principality conditions disagree: {:?}", rep.values())]
    };
    Ok(Outcome {
        inputs,
        outputs: out,
        failures,
        ..Default::default()
    })
}

fn class_json(i: usize, m: &TernaryLattice, d: u64) -> Result<Value> {
    Ok(json!({
        "index": i,
        "gram": mat(m.gram()),
        "genus_symbols": genus_symbols(m, d)?,
        "minimum": r(&m.minimum()?),
        "represents_one": m.represents_one()?,
    }))
}

pub fn ternary_classes(d: u64) -> Result<Outcome> {
    let s = enumerate_s(d)?;
    let classes = s.iter().enumerate().map(|(i, m)| class_json(i, m, d)).collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        inputs: json!({ "d": d }),
        outputs: json!({ "count": s.len(), "classes": classes }),
        ..Default::default()
    })
}
