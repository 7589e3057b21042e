//! Order presets: a small TOML document per order.
//!
//! ```toml
//! name = "hurwitz"
//! a = "-1"
//! b = "-1"
//! basis = [["1/2", "1/2", "1/2", "1/2"], ["0", "1", "0", "0"], ...]
//!
//! [lambdas]          # optional named elements, coordinates in (1, i, j, k)
//! l1 = ["3/2", "0", "1/2", "-1/2"]
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;

use super::algebra::{QuatElement, QuaternionAlgebra};
use super::order::Order;
use crate::error::{Error, Result};
use crate::linalg::{parse_rational, RatMat, Rational};

const PRESETS: &[(&str, &str)] = &[
    ("hurwitz", include_str!("../../presets/hurwitz.toml")),
    ("d3", include_str!("../../presets/d3.toml")),
    ("d5", include_str!("../../presets/d5.toml")),
    ("d7", include_str!("../../presets/d7.toml")),
    ("d11-a", include_str!("../../presets/d11-a.toml")),
    ("d11-b", include_str!("../../presets/d11-b.toml")),
    ("d13", include_str!("../../presets/d13.toml")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    name: String,
    a: String,
    b: String,
    basis: Vec<Vec<String>>,
    #[serde(default)]
    lambdas: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub order: Order,
    pub lambdas: BTreeMap<String, QuatElement>,
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset(name: &str) -> Result<Preset> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown preset '{name}' (known: {})", preset_names().join(", "))))?;
    parse_preset(text)
}

pub fn all_presets() -> Result<Vec<Preset>> {
    PRESETS.iter().map(|(_, t)| parse_preset(t)).collect()
}

pub fn parse_preset(text: &str) -> Result<Preset> {
    let file: PresetFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = |name: &str, s: &str| -> Result<Rational> {
        parse_rational(s).map_err(|e| Error::Parse(format!("field {name}: {e}")))
    };
    let a = field("a", &file.a)?;
    let b = field("b", &file.b)?;
    if file.basis.len() != 4 {
        return Err(Error::Parse(format!("field basis: expected 4 rows, got {}", file.basis.len())));
    }
    let mut rows = Vec::with_capacity(4);
    for (r, row) in file.basis.iter().enumerate() {
        rows.push(element(&format!("basis[{r}]"), row)?.0.to_vec());
    }
    let algebra = QuaternionAlgebra::new(a, b)?;
    let order = Order::from_matrix(algebra, &RatMat::from_rows(&rows))?;
    let mut lambdas = BTreeMap::new();
    for (k, v) in &file.lambdas {
        lambdas.insert(k.clone(), element(&format!("lambdas.{k}"), v)?);
    }
    Ok(Preset {
        name: file.name,
        order,
        lambdas,
    })
}

fn element(name: &str, row: &[String]) -> Result<QuatElement> {
    if row.len() != 4 {
        return Err(Error::Parse(format!("field {name}: expected 4 coordinates, got {}", row.len())));
    }
    let mut c = Vec::with_capacity(4);
    for (t, s) in row.iter().enumerate() {
        c.push(parse_rational(s).map_err(|e| Error::Parse(format!("field {name}[{t}]: {e}")))?);
    }
    Ok(QuatElement(std::array::from_fn(|t| c[t].clone())))
}
