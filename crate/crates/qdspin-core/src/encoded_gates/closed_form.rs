//! Analytic entries of the primed gates in the path basis.
//!
//! Two variants exist. [`Form::Corrected`] is what [`closed_form_gate`]
//! assembles and agrees with the numerical exponential. [`Form::Printed`]
//! keeps the expressions exactly as they are commonly quoted, including
//! several that do not match the exponential; [`printed_form_report`] shows
//! which entries differ and by how much.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use super::{FourBodyCouplings, GateId, DIM};
use crate::error::{domain, Result};
use crate::spin_algebra::{phase_insensitive_distance, ComplexMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Corrected,
    Printed,
}

/// One named matrix symbol and the positions where it appears.
#[derive(Debug, Clone)]
struct Entry {
    symbol: &'static str,
    value: C64,
    positions: Vec<(usize, usize)>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cis(phi: f64) -> C64 {
    C64::from_polar(1.0, phi)
}

fn diag(symbol: &'static str, value: C64, idx: &[usize]) -> Entry {
    Entry { symbol, value, positions: idx.iter().map(|&k| (k, k)).collect() }
}

fn sym_pairs(symbol: &'static str, value: C64, pairs: &[(usize, usize)]) -> Entry {
    let mut positions = Vec::with_capacity(2 * pairs.len());
    for &(a, b) in pairs {
        positions.push((a, b));
        positions.push((b, a));
    }
    Entry { symbol, value, positions }
}

fn s3() -> f64 {
    libm::sqrt(3.0)
}

/// `sin(k z) / z`, continuous at `z = 0`.
fn sinc_scaled(z: C64, k: f64) -> C64 {
    if z.norm() < 1e-12 {
        c(k, 0.0)
    } else {
        (z * k).sin() / z
    }
}

fn ua_entries(form: Form) -> Vec<Entry> {
    let alpha = c(SQRT_2, -1.0) / libm::sqrt(6.0);
    let beta = match form {
        Form::Corrected => cis(-0.5 * libm::acos(-1.0 / 3.0)),
        // acos(-3) is undefined; the printed expression has no value.
        Form::Printed => c(f64::NAN, f64::NAN),
    };
    let off = c(0.0, -1.0 / SQRT_2);
    let k = 1.0 / (2.0 * libm::sqrt(6.0));
    vec![
        diag("alpha", alpha, &[0, 1, 2, 3]),
        diag("alpha*", alpha.conj(), &[4, 5, 6, 7]),
        sym_pairs("1/(i sqrt2)", off, &[(0, 4), (1, 6), (2, 5), (3, 7)]),
        diag("beta", beta, &[8, 9, 12, 13]),
        diag("1/sqrt3 + 1/(2i sqrt6)", c(1.0 / s3(), -k), &[10]),
        diag("1/sqrt3 - 1/(2i sqrt6)", c(1.0 / s3(), k), &[11]),
        sym_pairs("sqrt(5/2)/(2i)", c(0.0, -0.5 * libm::sqrt(2.5)), &[(10, 11)]),
    ]
}

fn ub_entries(jb: f64) -> Vec<Entry> {
    let g = cis(PI / 2.0 * jb);
    let g3 = g.powi(-3);
    vec![
        diag("gamma^-3", g3, &[0, 1, 2, 3]),
        diag("-gamma", -g, &[4, 5, 6, 7, 8, 9, 10, 12, 13]),
        diag("-gamma^-3", -g3, &[11]),
    ]
}

/// `Lambda(J5p) = sqrt(4/3 J^2 - 2 J + 1)`, never below 1/2.
pub(crate) fn lambda5(j: f64) -> f64 {
    libm::sqrt(4.0 / 3.0 * j * j - 2.0 * j + 1.0)
}

fn u5_entries(j: f64, form: Form) -> Vec<Entry> {
    let lam = lambda5(j);
    let s = libm::sin(PI / 2.0 * lam);
    let p = c(libm::cos(PI / 2.0 * lam), j / (s3() * lam) * s);
    let phi = match form {
        Form::Corrected => c(0.0, (1.0 - j) * s / lam),
        Form::Printed => c(0.0, (1.0 - j) * s / j),
    };
    let d = cis(PI * (2.0 * j + 3.0) / (2.0 * s3()));
    vec![
        diag("p", p, &[0, 2, 4, 5, 9]),
        diag("p*", p.conj(), &[1, 3, 6, 7, 13]),
        sym_pairs("Phi", phi, &[(0, 1), (2, 3), (4, 6), (5, 7), (9, 13)]),
        diag("exp(i pi (2J+3) / (2 sqrt3))", d, &[8, 10, 11, 12]),
    ]
}

fn nu(jp: f64, jpp: f64) -> f64 {
    let d = jp - jpp;
    libm::sqrt(3.0 * d * d - 16.0 * d + 24.0)
}

/// The `eta` entry of the primed `U2`/`U3` gates. Vanishes exactly when
/// `J' = J''`.
pub fn eta(jp: f64, jpp: f64) -> C64 {
    eta_form(jp, jpp, Form::Corrected)
}

fn eta_form(jp: f64, jpp: f64, form: Form) -> C64 {
    let th = PI / (4.0 * SQRT_2);
    let n = nu(jp, jpp);
    let d = jp - jpp;
    let phi = PI * n / (4.0 * libm::sqrt(6.0));
    match form {
        Form::Corrected => cis(-th * (1.0 + jpp)) * c(libm::cos(phi), d / (s3() * n) * libm::sin(phi)),
        Form::Printed => cis(-th) * (libm::cos(phi) - d / (s3() * n) * libm::sin(phi)),
    }
}

fn u23_entries(k: GateId, jp: f64, jpp: f64, form: Form) -> Vec<Entry> {
    let th = PI / (4.0 * SQRT_2);
    let n = nu(jp, jpp);
    let d = jp - jpp;
    let delta = cis(th * (jp + 2.0 * jpp + 3.0));
    let epsilon = match form {
        Form::Corrected => cis(th * (jp + 2.0 * jpp - 3.0)),
        Form::Printed => delta,
    };
    let zeta = cis(-th * (jp + 3.0));
    let eta = eta_form(jp, jpp, form);
    // The conjugate-labelled entries keep the prefactor of eta and conjugate
    // only the bracket.
    let eta_star = match form {
        Form::Corrected => eta.conj() * cis(-2.0 * th * (1.0 + jpp)),
        Form::Printed => eta.conj(),
    };
    let sign = match form {
        Form::Corrected => 1.0,
        Form::Printed => -1.0,
    };
    let rho = cis(-th * (1.0 + jpp + sign * n / s3())) * (c(1.0, 0.0) - cis(PI * n / (2.0 * libm::sqrt(6.0))))
        * (SQRT_2 * (3.0 - d) / (s3() * n));
    let e11 = cis(PI * (-5.0 + jp + 2.0 * jpp) / (4.0 * SQRT_2));
    type Idx = &'static [usize];
    let (dl, ep, ze, et, etc, rh): (Idx, Idx, Idx, Idx, Idx, &[(usize, usize)]) = match k {
        GateId::U2 => (&[0, 2], &[1, 3], &[4, 5, 9], &[6, 7, 13], &[8, 10, 12], &[(6, 8), (7, 12), (10, 13)]),
        _ => (&[0, 1], &[2, 3], &[4, 6, 8], &[5, 7, 12], &[9, 10, 13], &[(5, 9), (7, 13), (10, 12)]),
    };
    vec![
        diag("delta", delta, dl),
        diag("epsilon", epsilon, ep),
        diag("zeta", zeta, ze),
        diag("eta", eta, et),
        diag("eta*", eta_star, etc),
        sym_pairs("rho", rho, rh),
        diag("exp(i pi (-5+J'+2J'') / (4 sqrt2))", e11, &[11]),
    ]
}

fn u1_common(ja: f64, jb: f64, jd: f64) -> (C64, C64) {
    let x2 = 9.0 * (1.0 + 4.0 * jb - 4.0 * jd) + 48.0 * (ja * ja + jb * jb - jb * jd + jd * jd - ja * (jb + jd));
    let x = c(x2, 0.0).sqrt();
    let ph = cis(PI * s3() / 6.0 * (1.0 + 2.0 * ja + 2.0 * jb + 2.0 * jd));
    (x, ph)
}

/// The `chi_+` entry of the primed `U1`; it must vanish for the gate to act
/// without creating superpositions of code and non-code states.
pub fn chi_plus(ja: f64, jb: f64, jd: f64) -> C64 {
    let (x, ph) = u1_common(ja, jb, jd);
    let s = sinc_scaled(x, PI / 6.0);
    ((x * (PI / 6.0)).cos() + s * c(0.0, 2.0 * s3() * (2.0 * ja - jb - jd))) * ph
}

fn u1_entries(ja: f64, jb: f64, jc: f64, jd: f64) -> Vec<Entry> {
    let (x, ph1) = u1_common(ja, jb, jd);
    let sx = sinc_scaled(x, PI / 6.0);
    let cx = (x * (PI / 6.0)).cos();
    let k1 = c(0.0, 2.0 * s3() * (2.0 * ja - jb - jd));
    let chi_p = (cx + sx * k1) * ph1;
    let chi_m = (cx - sx * k1) * ph1;
    let lambda = sx * c(0.0, 3.0 * (1.0 + 2.0 * jb - 2.0 * jd)) * ph1;
    let xi = cis(PI / s3() * (2.0 - ja - jb + 2.0 * jd));
    let theta = xi * cis(PI * s3() * jc);
    let y2 = 3.0 + 8.0 * ja * ja + 8.0 * jb * jb + 9.0 * jc - jb * (9.0 + 6.0 * jc - 4.0 * jd)
        + 2.0 * (3.0 * jc - 2.0 * jd) * (3.0 * jc - 2.0 * jd)
        - 2.0 * ja * (-3.0 + 7.0 * jb + 3.0 * jc - 2.0 * jd)
        - 6.0 * jd;
    let y = c(y2, 0.0).sqrt();
    let ph2 = cis(PI / s3() * (2.0 + ja + jb - 2.0 * jd));
    let k6 = PI / libm::sqrt(6.0);
    let sy = sinc_scaled(y, k6);
    let cy = (y * k6).cos();
    let kt = c(0.0, (3.0 + 8.0 * ja - 7.0 * jb - 3.0 * jc + 2.0 * jd) / (2.0 * SQRT_2));
    let tau_p = (cy + sy * kt) * ph2;
    let tau_m = (cy - sy * kt) * ph2;
    let mu = sy * c(0.0, -libm::sqrt(15.0) * (jb - 3.0 * jc + 2.0 * jd - 1.0) / (2.0 * SQRT_2)) * ph2;
    vec![
        diag("chi+", chi_p, &[0, 1, 2, 3]),
        diag("chi-", chi_m, &[4, 5, 6, 7]),
        sym_pairs("lambda", lambda, &[(0, 4), (1, 6), (2, 5), (3, 7)]),
        diag("xi", xi, &[8, 12]),
        diag("theta", theta, &[9, 13]),
        diag("tau-", tau_m, &[10]),
        diag("tau+", tau_p, &[11]),
        sym_pairs("mu", mu, &[(10, 11)]),
    ]
}

fn entries(id: GateId, j: &FourBodyCouplings, form: Form) -> Result<Vec<Entry>> {
    j.validate()?;
    Ok(match id {
        GateId::UA => ua_entries(form),
        GateId::UB => ub_entries(j.jb),
        GateId::U5 => u5_entries(j.j5p, form),
        GateId::U2 => u23_entries(id, j.j2p, j.j2pp, form),
        GateId::U3 => u23_entries(id, j.j3p, j.j3pp, form),
        GateId::U1 => u1_entries(j.j1a, j.j1b, j.j1c, j.j1d),
        GateId::U6 => return Err(domain("U6 has no closed form")),
    })
}

fn assemble(list: &[Entry]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(DIM, DIM);
    for e in list {
        for &p in &e.positions {
            m[p] = e.value;
        }
    }
    m
}

/// Gate matrix assembled from the corrected analytic entries. Equal to
/// [`super::gate`] up to a global phase.
pub fn closed_form_gate(id: GateId, j: &FourBodyCouplings) -> Result<ComplexMatrix> {
    Ok(assemble(&entries(id, j, Form::Corrected)?))
}

/// Per-symbol comparison of an analytic entry with the numerical gate.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryReport {
    pub symbol: &'static str,
    pub form: Form,
    pub value: C64,
    /// Numerical value at the first position, after removing the global phase.
    pub numeric: C64,
    /// Largest deviation over all positions of the symbol; NaN when the
    /// expression cannot be evaluated.
    pub deviation: f64,
}

/// Compare every symbol of `form` against `numeric` (the exponential). The
/// global phase is fixed once from the corrected form.
pub fn printed_form_report(id: GateId, j: &FourBodyCouplings, form: Form, numeric: &ComplexMatrix) -> Result<Vec<EntryReport>> {
    let corrected = closed_form_gate(id, j)?;
    let (_, phase) = phase_insensitive_distance(numeric, &corrected);
    let unphased = numeric.scale(phase.conj());
    Ok(entries(id, j, form)?
        .into_iter()
        .map(|e| {
            let deviation = e.positions.iter().map(|&p| (unphased[p] - e.value).norm()).fold(0.0, |a: f64, b| {
                if a.is_nan() || b.is_nan() {
                    f64::NAN
                } else {
                    a.max(b)
                }
            });
            EntryReport { symbol: e.symbol, form, value: e.value, numeric: unphased[e.positions[0]], deviation }
        })
        .collect())
}

/// The unmodified `U1` in its conventional closed form.
pub fn bacon_u1() -> ComplexMatrix {
    let omega = c(0.0, 1.0) * cis(PI / (2.0 * s3()));
    let xi = cis(2.0 * PI / s3());
    let (s, co) = (libm::sin(PI / SQRT_2), libm::cos(PI / SQRT_2));
    let k = libm::sqrt(3.0 / 8.0);
    let list = vec![
        sym_pairs("Omega", omega, &[(0, 4), (1, 6), (2, 5), (3, 7)]),
        diag("Xi", xi, &[8, 9, 12, 13]),
        diag("Gamma", xi * c(co, -k * s), &[10]),
        diag("Theta", xi * c(co, k * s), &[11]),
        sym_pairs("Delta", xi * c(0.0, 0.5 * libm::sqrt(2.5) * s), &[(10, 11)]),
    ];
    assemble(&list)
}

/// The unmodified `U5` in its conventional closed form.
pub fn bacon_u5() -> ComplexMatrix {
    let list = vec![
        sym_pairs("i", c(0.0, 1.0), &[(0, 1), (2, 3), (4, 6), (5, 7), (9, 13)]),
        diag("exp(i sqrt3 pi / 2)", cis(s3() * PI / 2.0), &[8, 10, 11, 12]),
    ];
    assemble(&list)
}

/// The unmodified `U_B = diag(1, 1, 1, 1, -1, ..., -1)`.
pub fn bacon_ub() -> ComplexMatrix {
    let mut d = vec![c(-1.0, 0.0); DIM];
    d[..4].fill(c(1.0, 0.0));
    ComplexMatrix::diagonal(&d)
}
