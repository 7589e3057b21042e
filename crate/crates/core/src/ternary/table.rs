use super::enumerate::{enumerate_s, first_coefficient_is_two};
use crate::arith::{is_admissible, is_prime};
use crate::error::{ensure, Result};

/// `t(d)` and `t_dnp(d)` for one admissible `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TableRow {
    pub d: u64,
    pub t: usize,
    pub t_dnp: usize,
}

/// `t = |𝒮(d)|`; `t_dnp` counts the classes whose minimum exceeds 2.
pub fn table_row(d: u64) -> Result<TableRow> {
    let classes = enumerate_s(d)?;
    let mut t_dnp = 0;
    for m in &classes {
        let rep = m.represents_one()?;
        ensure!(
            rep == first_coefficient_is_two(m),
            "d = {d}: minimum and first coefficient disagree on representing 1"
        );
        if !rep {
            t_dnp += 1;
        }
    }
    let row = TableRow {
        d,
        t: classes.len(),
        t_dnp,
    };
    ensure!(row.t_dnp < row.t, "d = {d}: every class has a non-principal different");
    Ok(row)
}

/// Admissible `d` from 2 to `d_max`.
pub fn admissible_up_to(d_max: u64) -> Vec<u64> {
    (2..=d_max).filter(|&d| is_admissible(d)).collect()
}

pub fn table(d_max: u64) -> Result<Vec<TableRow>> {
    admissible_up_to(d_max).into_iter().map(table_row).collect()
}

/// Proper classes of primitive positive definite binary forms of
/// discriminant `disc < 0`, counted as reduced forms.
pub fn class_number(disc: i64) -> u64 {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return 0;
    }
    let n = -disc;
    let mut h = 0;
    let mut a = 1;
    // reduced forms have 3a² ≤ |disc|
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if crate::arith::gcd(crate::arith::gcd(a, b), c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// `t(p) - t_dnp(p) = (h(-p) + h(-4p))/2` for an odd prime row.
pub fn deuring_check(row: &TableRow) -> Option<bool> {
    let p = row.d;
    if p == 2 || !is_prime(p) {
        return None;
    }
    let sum = class_number(-(p as i64)) + class_number(-4 * p as i64);
    Some(sum % 2 == 0 && (row.t - row.t_dnp) as u64 == sum / 2)
}
