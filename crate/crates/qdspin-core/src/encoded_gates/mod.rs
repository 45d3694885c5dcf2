//! Encoded two-qubit gates on the eight-spin singlet space, with four-body
//! corrections to their generators.
//!
//! Every operator lives in the 14-dimensional path basis of
//! [`SpinPathBasis::eight_spin_singlets`]; dots `A..H` are sites `0..7`. The
//! numerical exponential is authoritative; [`closed_form_gate`] provides the
//! analytic entries as a cross-check.

mod closed_form;
mod constraints;
mod tuning;

pub use closed_form::{bacon_u1, bacon_u5, bacon_ub, chi_plus, closed_form_gate, eta, printed_form_report, EntryReport, Form};
use closed_form::lambda5;
pub use constraints::{check_gate_constraints, ConstraintResult};
pub use tuning::{tune_chi_plus_zero, tune_eta_zero, tune_lambda_even, EtaFixed, LambdaBranch};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::cg_basis::SpinPathBasis;
use crate::error::{domain, Result};
use crate::numeric::integer_distance;
use crate::spin_algebra::{exp_i_hermitian, phase_insensitive_distance, ComplexMatrix};
use crate::C64;

/// Dimension of the eight-spin singlet space.
pub const DIM: usize = 14;

/// Four-body coupling constants of the primed gates, relative to each gate's
/// two-body scale. All zero reproduces the unmodified gate set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourBodyCouplings {
    pub j1a: f64,
    pub j1b: f64,
    pub j1c: f64,
    pub j1d: f64,
    pub j2p: f64,
    pub j2pp: f64,
    pub j3p: f64,
    pub j3pp: f64,
    pub j5p: f64,
    pub jb: f64,
}

impl FourBodyCouplings {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn as_array(&self) -> [f64; 10] {
        [
            self.j1a, self.j1b, self.j1c, self.j1d, self.j2p, self.j2pp, self.j3p, self.j3pp, self.j5p, self.jb,
        ]
    }

    /// Names matching [`Self::as_array`].
    pub const NAMES: [&'static str; 10] = ["J1a", "J1b", "J1c", "J1d", "J2p", "J2pp", "J3p", "J3pp", "J5p", "JB"];

    pub fn from_array(a: [f64; 10]) -> Self {
        Self {
            j1a: a[0],
            j1b: a[1],
            j1c: a[2],
            j1d: a[3],
            j2p: a[4],
            j2pp: a[5],
            j3p: a[6],
            j3pp: a[7],
            j5p: a[8],
            jb: a[9],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in Self::NAMES.iter().zip(self.as_array()) {
            if !v.is_finite() {
                return Err(domain(format!("coupling {name} must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Gates of the controlled-phase sequence. `U6` is the composite
/// `(U_A U_B U_A^dagger U_B^dagger)^2` and has no single generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateId {
    UA,
    UB,
    U1,
    U2,
    U3,
    U5,
    U6,
}

impl GateId {
    /// Gates built directly from a generator.
    pub const PRIMITIVE: [GateId; 6] = [GateId::UA, GateId::UB, GateId::U1, GateId::U2, GateId::U3, GateId::U5];

    /// Rotation angle `t` in `U = exp(i t H)`.
    pub fn angle(self) -> Option<f64> {
        let s3 = libm::sqrt(3.0);
        match self {
            GateId::UA => Some(-0.5 * libm::acos(-1.0 / 3.0)),
            GateId::UB => Some(-PI / 2.0),
            GateId::U1 | GateId::U5 => Some(PI / s3),
            GateId::U2 | GateId::U3 => Some(PI / (4.0 * core::f64::consts::SQRT_2)),
            GateId::U6 => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateId::UA => "UA",
            GateId::UB => "UB",
            GateId::U1 => "U1",
            GateId::U2 => "U2",
            GateId::U3 => "U3",
            GateId::U5 => "U5",
            GateId::U6 => "U6",
        }
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateId {
    type Err = crate::Error;

    /// Accepts `UA`, `UB`, `U1`.. with an optional trailing `'`, any case.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.trim().trim_end_matches(['\'', 'p', 'P']).to_ascii_uppercase();
        match t.as_str() {
            "UA" => Ok(GateId::UA),
            "UB" => Ok(GateId::UB),
            "U1" => Ok(GateId::U1),
            "U2" => Ok(GateId::U2),
            "U3" => Ok(GateId::U3),
            "U5" => Ok(GateId::U5),
            "U6" => Ok(GateId::U6),
            _ => Err(domain(format!("unknown gate id {s:?}"))),
        }
    }
}

/// Index of dot letter `A..H`.
pub(crate) fn dot(c: char) -> usize {
    (c as u8 - b'A') as usize
}

/// All 28 exchange operators `E_ij` on the singlet space.
#[derive(Debug, Clone)]
pub struct ExchangeTable {
    table: Vec<ComplexMatrix>,
}

impl ExchangeTable {
    pub fn new() -> Self {
        let basis = SpinPathBasis::eight_spin_singlets();
        let mut table: Vec<ComplexMatrix> = Vec::with_capacity(64);
        for i in 0..8 {
            for j in 0..8 {
                table.push(if i == j {
                    ComplexMatrix::identity(DIM)
                } else if j < i {
                    table[j * 8 + i].clone()
                } else {
                    basis.exchange(i, j).expect("sites are in range")
                });
            }
        }
        Self { table }
    }

    /// `E_ij` for a two-letter pair such as `"DE"`.
    pub fn e(&self, pair: &str) -> &ComplexMatrix {
        let mut it = pair.chars();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        &self.table[dot(a) * 8 + dot(b)]
    }

    fn ee(&self, p: &str, q: &str) -> ComplexMatrix {
        self.e(p) * self.e(q)
    }

    fn sum(&self, terms: &[(f64, &str)]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(DIM, DIM);
        for (c, p) in terms {
            acc = &acc + &self.e(p).scale_real(*c);
        }
        acc
    }

    fn sum_products(&self, c: f64, products: &[(&str, &str)]) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(DIM, DIM);
        if c == 0.0 {
            return acc;
        }
        for (p, q) in products {
            acc = &acc + &self.ee(p, q);
        }
        acc.scale_real(c)
    }

    /// Generator `H` of a primitive gate, `U = exp(i t H)`.
    pub fn generator(&self, id: GateId, j: &FourBodyCouplings) -> Result<ComplexMatrix> {
        j.validate()?;
        const ABCD: [&str; 6] = ["AB", "AC", "AD", "BC", "BD", "CD"];
        const PAIRINGS: [(&str, &str); 3] = [("AB", "CD"), ("AC", "BD"), ("AD", "BC")];
        let h = match id {
            GateId::UA => self.e("DE").clone(),
            GateId::UB => {
                let two = self.sum(&ABCD.map(|p| (1.0, p)));
                &two + &self.sum_products(j.jb, &PAIRINGS)
            }
            GateId::U5 => self.sum(&[(1.0, "FG"), (0.5, "GH"), (j.j5p, "FH")]),
            GateId::U2 => {
                let two = self.sum(&[(-3.0, "EF"), (-2.0 / 3.0, "FG"), (-2.0 / 3.0, "FH"), (-2.0 / 3.0, "GH")]);
                &(&two + &self.sum_products(j.j2p, &[("EF", "GH")]))
                    + &self.sum_products(j.j2pp, &[("EG", "FH"), ("EH", "FG")])
            }
            GateId::U3 => {
                let two = self.sum(&[(-3.0, "CD"), (-2.0 / 3.0, "AB"), (-2.0 / 3.0, "AC"), (-2.0 / 3.0, "BC")]);
                &(&two + &self.sum_products(j.j3p, &[("AB", "CD")]))
                    + &self.sum_products(j.j3pp, &[("AC", "BD"), ("AD", "BC")])
            }
            GateId::U1 => {
                let mut h = &self.e("DE").clone() + &self.sum(&ABCD.map(|p| (0.5, p)));
                h = &h + &self.sum_products(j.j1a, &PAIRINGS);
                h = &h + &self.sum_products(j.j1b, &[("AB", "CE"), ("AC", "BE"), ("AE", "BC")]);
                h = &h + &self.sum_products(j.j1c, &[("AB", "DE"), ("AC", "DE"), ("BC", "DE")]);
                h = &h
                    + &self.sum_products(
                        j.j1d,
                        &[("AD", "BE"), ("AD", "CE"), ("AE", "BD"), ("AE", "CD"), ("BD", "CE"), ("BE", "CD")],
                    );
                h
            }
            GateId::U6 => return Err(domain("U6 is a composite gate without a single generator")),
        };
        Ok(h)
    }

    pub fn gate(&self, id: GateId, j: &FourBodyCouplings) -> Result<ComplexMatrix> {
        match id.angle() {
            Some(t) => exp_i_hermitian(&self.generator(id, j)?, t),
            None => {
                let ua = self.gate(GateId::UA, j)?;
                let ub = self.gate(GateId::UB, j)?;
                let comm = &(&(&ua * &ub) * &ua.adjoint()) * &ub.adjoint();
                Ok(&comm * &comm)
            }
        }
    }
}

impl Default for ExchangeTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Generator of `id` (see [`ExchangeTable::generator`]).
pub fn build_generator(id: GateId, couplings: &FourBodyCouplings) -> Result<ComplexMatrix> {
    ExchangeTable::new().generator(id, couplings)
}

/// `exp(i t H)` for the gate's angle `t`, or the composite for `U6`.
pub fn gate(id: GateId, couplings: &FourBodyCouplings) -> Result<ComplexMatrix> {
    ExchangeTable::new().gate(id, couplings)
}

/// Ordered gate product; the first element acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    pub steps: Vec<(GateId, FourBodyCouplings, bool)>,
}

impl GateSequence {
    /// `U1^dagger U2^dagger U3^dagger U5^dagger U6 U5 U3 U2 U1` (rightmost first).
    pub fn controlled_phase(j: &FourBodyCouplings) -> Self {
        use GateId::*;
        let order = [(U1, false), (U2, false), (U3, false), (U5, false), (U6, false), (U5, true), (U3, true), (U2, true), (U1, true)];
        Self { steps: order.iter().map(|&(g, d)| (g, *j, d)).collect() }
    }

    pub fn product(&self) -> Result<ComplexMatrix> {
        self.product_with(&ExchangeTable::new())
    }

    pub fn product_with(&self, table: &ExchangeTable) -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::identity(DIM);
        for (id, j, dagger) in &self.steps {
            let u = table.gate(*id, j)?;
            let u = if *dagger { u.adjoint() } else { u };
            acc = &u * &acc;
        }
        Ok(acc)
    }
}

/// Result of [`classicality_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classicality {
    pub classical: bool,
    /// Largest second-largest column magnitude over the subspace columns.
    pub off_pattern: f64,
}

/// Threshold for a "nonzero" entry in [`classicality_check`].
pub const CLASSICALITY_EPS: f64 = 1e-8;

/// Whether `u` maps every basis state of `subspace` to a single basis state
/// (times a phase): each such column has exactly one entry above 1e-8.
pub fn classicality_check(u: &ComplexMatrix, subspace: &[usize]) -> Classicality {
    let mut classical = true;
    let mut off: f64 = 0.0;
    for &c in subspace {
        let mut mags: Vec<f64> = (0..u.rows()).map(|r| u[(r, c)].norm()).collect();
        let count = mags.iter().filter(|&&m| m > CLASSICALITY_EPS).count();
        classical &= count == 1;
        mags.sort_by(|a, b| b.total_cmp(a));
        off = off.max(mags.get(1).copied().unwrap_or(0.0));
    }
    Classicality { classical, off_pattern: off }
}

/// One of the six sufficient tuning conditions and how far it is from holding.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub id: u8,
    pub description: &'static str,
    pub satisfied: bool,
    pub residual: f64,
}

/// Tolerance for a tuning condition to count as satisfied.
pub const CONDITION_TOL: f64 = 1e-8;

/// Residuals of the six conditions under which the primed sequence is a
/// controlled phase.
pub fn cp_conditions(j: &FourBodyCouplings) -> Vec<Condition> {
    let lam = lambda5(j.j5p);
    let even = libm::fabs(lam - 2.0 * f64::max(1.0, libm::round(lam / 2.0)));
    let items = [
        (1, "J1c arbitrary", 0.0),
        (2, "eta(J2p, J2pp) = 0", eta(j.j2p, j.j2pp).norm()),
        (3, "eta(J3p, J3pp) = 0", eta(j.j3p, j.j3pp).norm()),
        (4, "J5p = 0 or Lambda(J5p) even", f64::min(libm::fabs(j.j5p), even)),
        (5, "JB integer", integer_distance(j.jb)),
        (6, "chi_plus(J1a, J1b, J1d) = 0", chi_plus(j.j1a, j.j1b, j.j1d).norm()),
    ];
    items
        .iter()
        .map(|&(id, description, residual)| Condition { id, description, satisfied: residual < CONDITION_TOL, residual })
        .collect()
}

/// Outcome of [`assemble_cp`].
#[derive(Debug, Clone)]
pub struct CpReport {
    pub unitary: ComplexMatrix,
    /// Restriction to the four code states `|0L0L>, |0L1L>, |1L0L>, |1L1L>`.
    pub code_block: ComplexMatrix,
    /// Distance of the code block to `diag(-1, 1, 1, 1)` modulo global phase.
    pub deviation: f64,
    /// Frobenius norm of the amplitude leaving the code space.
    pub leakage: f64,
    pub phase: C64,
    pub conditions: Vec<Condition>,
    pub pass: bool,
}

/// Pass threshold on both deviation and leakage.
pub const CP_TOL: f64 = 1e-8;

/// The target controlled phase on the code block.
pub fn cp_target() -> ComplexMatrix {
    ComplexMatrix::from_real(4, 4, &[-1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.])
}

/// Build the primed controlled-phase sequence and grade it.
pub fn assemble_cp(j: &FourBodyCouplings) -> Result<CpReport> {
    assemble_cp_with(&ExchangeTable::new(), j)
}

pub fn assemble_cp_with(table: &ExchangeTable, j: &FourBodyCouplings) -> Result<CpReport> {
    j.validate()?;
    let u = GateSequence::controlled_phase(j).product_with(table)?;
    let code: Vec<usize> = (0..4).collect();
    let rest: Vec<usize> = (4..DIM).collect();
    let code_block = u.select(&code, &code);
    let leakage = u.select(&rest, &code).frobenius_norm();
    let (deviation, phase) = phase_insensitive_distance(&code_block, &cp_target());
    Ok(CpReport {
        unitary: u,
        code_block,
        deviation,
        leakage,
        phase,
        conditions: cp_conditions(j),
        pass: deviation < CP_TOL && leakage < CP_TOL,
    })
}
