//! Solvers for the tuning conditions of the primed gates.

use alloc::format;
use core::f64::consts::PI;

use super::closed_form::lambda5;
use super::{chi_plus, eta, GateId};
use crate::error::{domain, invalid, Error, Result};
use crate::numeric::scan_roots;

const WINDOW: (f64, f64) = (-10.0, 10.0);
const SCAN_POINTS: usize = 200;
const ROOT_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaBranch {
    Plus,
    Minus,
}

/// `J5p` with `Lambda(J5p) = 2n`: `(3/4)(1 +- sqrt((16 n^2 - 1) / 3))`.
pub fn tune_lambda_even(n: u32, branch: LambdaBranch) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let n = n as f64;
    let root = libm::sqrt((16.0 * n * n - 1.0) / 3.0);
    let j = match branch {
        LambdaBranch::Plus => 0.75 * (1.0 + root),
        LambdaBranch::Minus => 0.75 * (1.0 - root),
    };
    debug_assert!((lambda5(j) - 2.0 * n).abs() < 1e-9);
    Ok(j)
}

/// Which of the two `U2'`/`U3'` constants is held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaFixed {
    Prime(f64),
    DoublePrime(f64),
}

/// Solve `eta(J', J'') = 0` for the free constant.
///
/// The imaginary part of the bracket, `(J' - J'') sin(phi) / (sqrt3 nu)`, is
/// scanned for sign changes; each root is kept only if the full `|eta|` is
/// below 1e-10. Only the family `J' = J''` survives, so the result equals the
/// fixed value whenever that lies in the scan window.
pub fn tune_eta_zero(gate: GateId, fixed: EtaFixed) -> Result<f64> {
    if !matches!(gate, GateId::U2 | GateId::U3) {
        return Err(domain(format!("eta tuning applies to U2 and U3, not {gate}")));
    }
    let pair = |free: f64| match fixed {
        EtaFixed::Prime(v) => (v, free),
        EtaFixed::DoublePrime(v) => (free, v),
    };
    let v = match fixed {
        EtaFixed::Prime(v) | EtaFixed::DoublePrime(v) => v,
    };
    if !v.is_finite() {
        return Err(domain("fixed value must be finite"));
    }
    let bracket = |free: f64| {
        let (jp, jpp) = pair(free);
        let d = jp - jpp;
        let nu = libm::sqrt(3.0 * d * d - 16.0 * d + 24.0);
        d / (libm::sqrt(3.0) * nu) * libm::sin(PI * nu / (4.0 * libm::sqrt(6.0)))
    };
    scan_roots(bracket, WINDOW.0, WINDOW.1, SCAN_POINTS, ROOT_TOL)
        .into_iter()
        .find(|&r| {
            let (jp, jpp) = pair(r);
            eta(jp, jpp).norm() < RESIDUAL_TOL
        })
        .ok_or_else(|| Error::NoRoot(format!("eta has no zero in [-10, 10] with the fixed constant {v}")))
}

fn solve_ja(jb: f64, jd: f64) -> Option<f64> {
    let bracket = |ja: f64| {
        let x2 = 9.0 * (1.0 + 4.0 * jb - 4.0 * jd) + 48.0 * (ja * ja + jb * jb - jb * jd + jd * jd - ja * (jb + jd));
        let x = libm::sqrt(f64::max(x2, 0.0));
        let s = if x < 1e-12 { PI / 6.0 } else { libm::sin(PI * x / 6.0) / x };
        (2.0 * ja - jb - jd) * s
    };
    scan_roots(bracket, WINDOW.0, WINDOW.1, SCAN_POINTS, ROOT_TOL)
        .into_iter()
        .find(|&ja| chi_plus(ja, jb, jd).norm() < RESIDUAL_TOL)
}

/// A triple `(J1a, J1b, J1d)` with `J1b / J1d = ratio` and `chi_+ = 0`.
///
/// The scale is fixed by `J1d = 1`. When no `J1a` works at that scale (the
/// condition needs `J1b - J1d` to be a nonzero integer), the scale
/// `J1d = 1 / (ratio - 1)` is used instead, which always admits a root.
pub fn tune_chi_plus_zero(ratio: f64) -> Result<(f64, f64, f64)> {
    if !ratio.is_finite() {
        return Err(domain("ratio must be finite"));
    }
    if (ratio - 1.0).abs() < 1e-12 {
        return Err(domain("ratio 1 admits no solution"));
    }
    for jd in [1.0, 1.0 / (ratio - 1.0)] {
        let jb = ratio * jd;
        if let Some(ja) = solve_ja(jb, jd) {
            return Ok((ja, jb, jd));
        }
    }
    Err(Error::NoRoot(format!("chi_+ has no zero in [-10, 10] for ratio {ratio}")))
}
