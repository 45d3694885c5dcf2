//! Lettered constraints (a)-(x) that the two- and four-body coefficients
//! `K2[ij]`, `K4[ijkl]` must meet while each primed gate is applied.
//!
//! Coefficient to gate-constant maps, from matching `K2 S.S` and
//! `K4 (S.S)(S.S)` against each generator's normalization:
//! `J_B = K4 / (2 K2)`, `J5 = K2[FH] / K2[FG]`, `J2,3 = -K4 / (3 K2)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::closed_form::lambda5;
use super::{eta, GateId};
use crate::error::{domain, invalid, Error, Result};
use crate::numeric::integer_distance;

/// Relative tolerance for equalities; also the integer-distance tolerance.
pub const EQ_TOL: f64 = 1e-9;
/// Tolerance on `|eta|` for the transcendental alternatives (i) and (m).
pub const ETA_TOL: f64 = 1e-8;

/// Outcome of one lettered constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintResult {
    pub id: char,
    pub satisfied: bool,
    pub residual: f64,
    pub detail: String,
}

/// Canonical key: letters sorted within each pair, then pairs sorted.
/// `"BA"` becomes `"AB"`, `"EHFG"` stays, `"CDAB"` becomes `"ABCD"`.
pub fn normalize_key(key: &str) -> Result<String> {
    let k = key.trim().to_ascii_uppercase();
    if !k.chars().all(|c| ('A'..='H').contains(&c)) {
        return Err(invalid(format!("key {key:?} must use dot letters A..H")));
    }
    let sort_pair = |p: &str| {
        let mut v: Vec<char> = p.chars().collect();
        v.sort_unstable();
        if v[0] == v[1] {
            None
        } else {
            Some(v.into_iter().collect::<String>())
        }
    };
    let bad = || invalid(format!("key {key:?} must be a pair (AB) or two disjoint pairs (ABCD)"));
    match k.len() {
        2 => sort_pair(&k).ok_or_else(bad),
        4 => {
            let mut pairs = [sort_pair(&k[..2]).ok_or_else(bad)?, sort_pair(&k[2..]).ok_or_else(bad)?];
            if pairs[0].chars().any(|c| pairs[1].contains(c)) {
                return Err(bad());
            }
            pairs.sort();
            Ok(pairs.concat())
        }
        _ => Err(bad()),
    }
}

struct Lookup(BTreeMap<String, f64>);

impl Lookup {
    fn new(assignment: &BTreeMap<String, f64>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (k, v) in assignment {
            let n = normalize_key(k)?;
            if !v.is_finite() {
                return Err(domain(format!("value for {k} must be finite")));
            }
            if let Some(old) = out.insert(n.clone(), *v) {
                if old != *v {
                    return Err(invalid(format!("conflicting values for {n}")));
                }
            }
        }
        Ok(Self(out))
    }

    fn require(&self, keys: &[&str]) -> Result<()> {
        let missing: Vec<String> = keys.iter().filter(|k| !self.0.contains_key(**k)).map(|k| k.to_string()).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingKeys(missing))
        }
    }

    fn get(&self, k: &str) -> f64 {
        self.0[k]
    }
}

fn spread(values: &[f64]) -> f64 {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max) / scale
}

fn result(id: char, residual: f64, tol: f64, detail: impl Into<String>) -> ConstraintResult {
    ConstraintResult { id, satisfied: residual.is_finite() && residual < tol, residual, detail: detail.into() }
}

fn equal(id: char, l: &Lookup, keys: &[&str]) -> ConstraintResult {
    let vals: Vec<f64> = keys.iter().map(|k| l.get(k)).collect();
    result(id, spread(&vals), EQ_TOL, format!("equal: {}", keys.join(", ")))
}

fn ratio(id: char, l: &Lookup, lhs: &str, factor: f64, rhs: &str) -> ConstraintResult {
    result(id, spread(&[l.get(lhs), factor * l.get(rhs)]), EQ_TOL, format!("{lhs} = {factor} * {rhs}"))
}

/// `(K4[a] == K4[b]) or eta(J', J'') = 0` with `J = -K4 / (3 K2[scale])`.
fn eta_alternative(id: char, l: &Lookup, a: &str, b: &str, scale: &str) -> ConstraintResult {
    let k2 = l.get(scale);
    let eq = spread(&[l.get(a), l.get(b)]);
    let e = if k2 == 0.0 {
        f64::INFINITY
    } else {
        eta(-l.get(a) / (3.0 * k2), -l.get(b) / (3.0 * k2)).norm()
    };
    let satisfied = eq < EQ_TOL || e < ETA_TOL;
    ConstraintResult { id, satisfied, residual: f64::min(eq, e), detail: format!("{a} = {b} or eta = 0 (|eta| = {e:.3e})") }
}

/// Evaluate the lettered constraints that belong to `gate`.
///
/// Every key the gate refers to must be present; missing ones are reported
/// together. Keys are normalized with [`normalize_key`].
pub fn check_gate_constraints(assignment: &BTreeMap<String, f64>, gate: GateId) -> Result<Vec<ConstraintResult>> {
    let l = Lookup::new(assignment)?;
    const ABCD2: [&str; 6] = ["AB", "AC", "AD", "BC", "BD", "CD"];
    const ABCD4: [&str; 3] = ["ABCD", "ACBD", "ADBC"];
    let out = match gate {
        GateId::U5 => {
            l.require(&["FG", "GH", "FH"])?;
            let fg = l.get("FG");
            let fh = l.get("FH");
            let b = if fh.abs() <= EQ_TOL * fg.abs().max(1.0) {
                0.0
            } else if fg == 0.0 {
                f64::INFINITY
            } else {
                let lam = lambda5(fh / fg);
                (lam - 2.0 * f64::max(1.0, libm::round(lam / 2.0))).abs()
            };
            alloc::vec![
                ratio('a', &l, "GH", 0.5, "FG"),
                result('b', b, EQ_TOL, "FH = 0 or Lambda(FH / FG) even"),
            ]
        }
        GateId::UB => {
            l.require(&ABCD2)?;
            l.require(&ABCD4)?;
            let ab = l.get("AB");
            let m = if ab == 0.0 { f64::INFINITY } else { integer_distance(l.get("ABCD") / (2.0 * ab)) };
            alloc::vec![
                equal('c', &l, &ABCD2),
                equal('d', &l, &ABCD4),
                result('e', m, EQ_TOL, "ABCD = 2 m AB with integer m"),
            ]
        }
        GateId::U2 => {
            l.require(&["EF", "FG", "FH", "GH", "EFGH", "EGFH", "EHFG"])?;
            alloc::vec![
                equal('f', &l, &["FG", "FH", "GH"]),
                ratio('g', &l, "EF", 4.5, "GH"),
                equal('h', &l, &["EGFH", "EHFG"]),
                eta_alternative('i', &l, "EFGH", "EGFH", "GH"),
            ]
        }
        GateId::U3 => {
            l.require(&["AB", "AC", "BC", "CD", "ABCD", "ACBD", "ADBC"])?;
            alloc::vec![
                equal('j', &l, &["AB", "AC", "BC"]),
                ratio('k', &l, "CD", 4.5, "AB"),
                equal('l', &l, &["ACBD", "ADBC"]),
                eta_alternative('m', &l, "ABCD", "ACBD", "AB"),
            ]
        }
        GateId::U1 => {
            let k4 = [
                "ABCD", "ACBD", "ADBC", "ABCE", "ACBE", "AEBC", "ADBE", "AEBD", "ADCE", "AECD", "BDCE", "BECD", "ABDE",
                "ACDE", "BCDE",
            ];
            let mut keys: Vec<&str> = ABCD2.to_vec();
            keys.push("DE");
            keys.extend_from_slice(&k4);
            l.require(&keys)?;
            let vwx = equal('v', &l, &["ABDE", "ACDE", "BCDE"]);
            let joint = |id: char| ConstraintResult { id, ..vwx.clone() };
            alloc::vec![
                equal('n', &l, &ABCD2),
                ratio('o', &l, "DE", 2.0, "AB"),
                equal('p', &l, &ABCD4),
                equal('q', &l, &["ABCE", "ACBE", "AEBC"]),
                equal('r', &l, &["ADBE", "AEBD"]),
                equal('s', &l, &["ADCE", "AECD"]),
                equal('t', &l, &["BDCE", "BECD"]),
                equal('u', &l, &["ADBE", "ADCE", "BDCE"]),
                joint('v'),
                joint('w'),
                joint('x'),
            ]
        }
        GateId::UA | GateId::U6 => return Err(domain(format!("no coefficient constraints are attached to {gate}"))),
    };
    Ok(out)
}
