//! Heitler-London exchange coefficients for three dots on a line and four
//! dots on a square.
//!
//! Pipeline: natural units, orbital-center relaxation, closed-form integrals,
//! antisymmetrized matrix elements, sector energies as Rayleigh quotients,
//! a least-squares fit of the spin-Hamiltonian parameters `L`, and the linear
//! map to the pair/quartet coefficients `K`.

mod mc;
mod model;

pub use mc::{mc_integral, mc_sector_energy, McEstimate, McIntegrand};
pub use model::{
    coulomb_element, kinetic, one_body_element, orbital, overlap, potential_element, reduce_to_natural_units, DimensionlessParams,
    DotGeometry, GeometryKind, NaturalModel, Point, PotentialKind, PotentialModel,
};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cg_basis::{clebsch_gordan, path_multiplet, BratteliPath, HalfInt};
use crate::error::{domain, invalid, Error, Result};
use crate::numeric::{golden_section, lstsq};
use model::{add, scale};

/// Optimized orbital centers.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalSet {
    pub centers: Vec<Point>,
    /// Displacement of the movable orbitals toward the middle.
    pub delta: f64,
    /// Set when the minimizer ran into the far end of `[0, l]`; `delta` is then 0.
    pub boundary_flag: bool,
}

/// Relax the orbitals by minimizing `<A|h|A>` over one displacement along the
/// symmetry direction (outer dots along the line; all corners along the
/// diagonals). The quadratic model keeps the nominal centers.
pub fn optimize_orbital_centers(model: &NaturalModel) -> Result<OrbitalSet> {
    let geo = &model.geometry;
    let dirs = geo.relax_directions();
    let place = |delta: f64| -> Vec<Point> { geo.centers.iter().zip(&dirs).map(|(c, d)| add(*c, scale(*d, delta))).collect() };
    if model.potential.kind == PotentialKind::Quadratic {
        return Ok(OrbitalSet { centers: place(0.0), delta: 0.0, boundary_flag: false });
    }
    let l = geo.l;
    let (c0, d0) = (geo.centers[0], dirs[0]);
    let energy = |delta: f64| {
        let a = add(c0, scale(d0, delta));
        one_body_element(&model.potential, a, a).unwrap_or(f64::INFINITY)
    };
    let m = golden_section(energy, 0.0, l, 1e-10 * l);
    let (delta, flag) = if m.at_boundary {
        (0.0, m.x > 0.5 * l)
    } else {
        (m.x, false)
    };
    Ok(OrbitalSet { centers: place(delta), delta, boundary_flag: flag })
}

/// Overlap, one-body and two-body tables over a fixed orbital list.
#[derive(Debug, Clone)]
pub struct Integrals {
    n: usize,
    s: Vec<f64>,
    h: Vec<f64>,
    w: Vec<f64>,
}

impl Integrals {
    pub fn new(model: &NaturalModel, centers: &[Point]) -> Result<Self> {
        let n = centers.len();
        let mut s = vec![0.0; n * n];
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                s[i * n + j] = overlap(centers[i], centers[j]);
                h[i * n + j] = one_body_element(&model.potential, centers[i], centers[j])?;
            }
        }
        let mut w = vec![0.0; n * n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        w[((a * n + b) * n + c) * n + d] = coulomb_element(model.coulomb, centers[a], centers[b], centers[c], centers[d]);
                    }
                }
            }
        }
        Ok(Self { n, s, h, w })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn s(&self, i: usize, j: usize) -> f64 {
        self.s[i * self.n + j]
    }

    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.n + j]
    }

    /// `<phi_a(1) phi_c(2) | V12 | phi_b(1) phi_d(2)>`.
    pub fn w(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.w[((a * self.n + b) * self.n + c) * self.n + d]
    }
}

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            (p, if inversions % 2 == 0 { 1.0 } else { -1.0 })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Identity,
    Hamiltonian,
}

/// `<Psi(s)|O|Psi(s')>` for antisymmetrized products `A[phi_1 s_1 ... phi_N s_N]`.
///
/// Spins are `0` (up) or `1` (down). Uses the single-sum form
/// `N! sum_P sgn(P) <ref|O|P ref'>`.
pub fn antisym_matrix_element(ints: &Integrals, s: &[u8], sp: &[u8], op: Operator) -> Result<f64> {
    let n = ints.len();
    if s.len() != n || sp.len() != n {
        return Err(invalid(format!("spin configurations must have {n} entries")));
    }
    if s.iter().chain(sp).any(|&x| x > 1) {
        return Err(invalid("spins are 0 (up) or 1 (down)"));
    }
    let sz = |v: &[u8]| v.iter().filter(|&&x| x == 0).count();
    if sz(s) != sz(sp) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let perms = permutations(n);
    let factorial = perms.len() as f64;
    for (p, sign) in &perms {
        if (0..n).any(|k| s[k] != sp[p[k]]) {
            continue;
        }
        total += sign * spatial_term(ints, p, op);
    }
    Ok(factorial * total)
}

/// `<phi_0 ... phi_{N-1} | O | phi_p(0) ... phi_p(N-1)>` in electron order.
pub(crate) fn spatial_term(ints: &Integrals, p: &[usize], op: Operator) -> f64 {
    let n = p.len();
    let ov: Vec<f64> = (0..n).map(|k| ints.s(k, p[k])).collect();
    let prod_except = |skip: &[usize]| (0..n).filter(|j| !skip.contains(j)).map(|j| ov[j]).product::<f64>();
    match op {
        Operator::Identity => ov.iter().product(),
        Operator::Hamiltonian => {
            let mut v = 0.0;
            for (k, &pk) in p.iter().enumerate() {
                v += ints.h(k, pk) * prod_except(&[k]);
            }
            for k in 0..n {
                for m in k + 1..n {
                    v += ints.w(k, p[k], m, p[m]) * prod_except(&[k, m]);
                }
            }
            v
        }
    }
}

/// Simultaneous eigenstate labels. Linear: `(2 S_T, 2 S_AC)`. Square: pair
/// spins `s_AC`, `s_BD` and total `S_T` (all integers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Linear3 { two_st: u32, two_sac: u32 },
    Square4 { s_ac: u32, s_bd: u32, s_t: u32 },
}

pub const LINEAR3_SECTORS: [Sector; 3] = [
    Sector::Linear3 { two_st: 3, two_sac: 2 },
    Sector::Linear3 { two_st: 1, two_sac: 2 },
    Sector::Linear3 { two_st: 1, two_sac: 0 },
];

pub const SQUARE4_SECTORS: [Sector; 6] = [
    Sector::Square4 { s_ac: 0, s_bd: 0, s_t: 0 },
    Sector::Square4 { s_ac: 1, s_bd: 0, s_t: 1 },
    Sector::Square4 { s_ac: 0, s_bd: 1, s_t: 1 },
    Sector::Square4 { s_ac: 1, s_bd: 1, s_t: 0 },
    Sector::Square4 { s_ac: 1, s_bd: 1, s_t: 1 },
    Sector::Square4 { s_ac: 1, s_bd: 1, s_t: 2 },
];

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Sector::Linear3 { two_st, two_sac } => {
                write!(f, "(S_T={}, S_AC={})", HalfInt::from_twice(two_st as i32), HalfInt::from_twice(two_sac as i32))
            }
            Sector::Square4 { s_ac, s_bd, s_t } => write!(f, "(s_AC={s_ac}, s_BD={s_bd}, S_T={s_t})"),
        }
    }
}

impl Sector {
    pub fn geometry(&self) -> GeometryKind {
        match self {
            Sector::Linear3 { .. } => GeometryKind::Linear3,
            Sector::Square4 { .. } => GeometryKind::Square4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Sector::Linear3 { two_st, two_sac } => {
                (two_sac == 0 || two_sac == 2) && two_st % 2 == 1 && two_st + 1 >= two_sac && two_st <= two_sac + 1
            }
            Sector::Square4 { s_ac, s_bd, s_t } => s_ac <= 1 && s_bd <= 1 && s_t >= s_ac.abs_diff(s_bd) && s_t <= s_ac + s_bd,
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("{self} is not a valid sector")))
        }
    }

    /// Row of the design matrix: `[1, S_T(S_T+1), sum s(s+1)]`, plus
    /// `[S_T(S_T+1))^2, s_AC(s_AC+1) s_BD(s_BD+1)]` for the square.
    pub fn design_row(&self) -> Vec<f64> {
        match *self {
            Sector::Linear3 { two_st, two_sac } => {
                let st = HalfInt::from_twice(two_st as i32).casimir();
                let sac = HalfInt::from_twice(two_sac as i32).casimir();
                vec![1.0, st, sac]
            }
            Sector::Square4 { s_ac, s_bd, s_t } => {
                let c = |s: u32| (s * (s + 1)) as f64;
                let a = c(s_t);
                vec![1.0, a, c(s_ac) + c(s_bd), a * a, c(s_ac) * c(s_bd)]
            }
        }
    }

    /// Spin state with `M = S_T`, over the computational basis (site 0 most
    /// significant, bit 0 = up), normalized.
    pub fn state(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let v = match *self {
            Sector::Linear3 { two_st, two_sac } => coupled_state(3, &[0, 2], two_sac, &[1], 1, two_st),
            Sector::Square4 { s_ac, s_bd, s_t } => coupled_state(4, &[0, 2], 2 * s_ac, &[1, 3], 2 * s_bd, 2 * s_t),
        };
        Ok(v)
    }
}

fn subsystem_multiplet(n_sites: usize, two_j: u32) -> Vec<Vec<f64>> {
    let path = match n_sites {
        1 => vec![1],
        _ => vec![1, two_j],
    };
    path_multiplet(&BratteliPath::new(path).expect("valid subsystem path"))
}

/// `|J, M=J>` from `|j1>` on `sites1` and `|j2>` on `sites2` (twice-units).
fn coupled_state(n: usize, sites1: &[usize], two_j1: u32, sites2: &[usize], two_j2: u32, two_j: u32) -> Vec<f64> {
    let m1s = subsystem_multiplet(sites1.len(), two_j1);
    let m2s = subsystem_multiplet(sites2.len(), two_j2);
    let (j1, j2, jj) = (two_j1 as i32, two_j2 as i32, two_j as i32);
    let mut out = vec![0.0; 1 << n];
    let place = |sites: &[usize], idx: usize| -> usize {
        let k = sites.len();
        sites.iter().enumerate().map(|(pos, &site)| ((idx >> (k - 1 - pos)) & 1) << (n - 1 - site)).sum()
    };
    for m1 in (-j1..=j1).step_by(2) {
        let m2 = jj - m1;
        if m2.abs() > j2 {
            continue;
        }
        let cg = clebsch_gordan(
            HalfInt::from_twice(j1),
            HalfInt::from_twice(m1),
            HalfInt::from_twice(j2),
            HalfInt::from_twice(m2),
            HalfInt::from_twice(jj),
            HalfInt::from_twice(jj),
        );
        if cg == 0.0 {
            continue;
        }
        let v1 = &m1s[((m1 + j1) / 2) as usize];
        let v2 = &m2s[((m2 + j2) / 2) as usize];
        for (i1, a) in v1.iter().enumerate().filter(|(_, a)| **a != 0.0) {
            for (i2, b) in v2.iter().enumerate().filter(|(_, b)| **b != 0.0) {
                out[place(sites1, i1) | place(sites2, i2)] += cg * a * b;
            }
        }
    }
    out
}

/// Spin configuration of a computational basis index.
pub fn spins_of(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((index >> (n - 1 - k)) & 1) as u8).collect()
}

/// `<Psi|H|Psi> / <Psi|Psi>` for a spin vector over the computational basis.
pub fn rayleigh_quotient(ints: &Integrals, vector: &[f64]) -> Result<f64> {
    let n = ints.len();
    if vector.len() != 1 << n {
        return Err(invalid(format!("spin vector must have {} entries", 1 << n)));
    }
    let nz: Vec<(usize, f64)> = vector.iter().copied().enumerate().filter(|(_, a)| *a != 0.0).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for &(i, a) in &nz {
        for &(j, b) in &nz {
            let (si, sj) = (spins_of(i, n), spins_of(j, n));
            num += a * b * antisym_matrix_element(ints, &si, &sj, Operator::Hamiltonian)?;
            den += a * b * antisym_matrix_element(ints, &si, &sj, Operator::Identity)?;
        }
    }
    if den <= 0.0 {
        return Err(domain("state has zero norm"));
    }
    Ok(num / den)
}

/// Energy of a spin sector.
pub fn sector_energy(ints: &Integrals, sector: Sector) -> Result<f64> {
    if sector.geometry().n_dots() != ints.len() {
        return Err(domain(format!("sector {sector} does not match {} orbitals", ints.len())));
    }
    rayleigh_quotient(ints, &sector.state()?)
}

/// Spin-Hamiltonian parameters `H = L0 + L1 S_T^2 + L1' (S_AC^2 [+ S_BD^2])
/// + L2 (S_T^2)^2 + L2' S_AC^2 S_BD^2`; `L2 = L2' = 0` on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LCoefficients {
    pub kind: GeometryKind,
    pub l0: f64,
    pub l1: f64,
    pub l1p: f64,
    pub l2: f64,
    pub l2p: f64,
}

/// Fit of `L` to sector energies.
#[derive(Debug, Clone, PartialEq)]
pub struct LFit {
    pub l: LCoefficients,
    /// `|A L - E| / |E|`; zero up to rounding when the system is square.
    pub relative_residual: f64,
}

/// Least-squares `L` from sector energies.
pub fn solve_l(sectors: &[Sector], energies: &[f64]) -> Result<LFit> {
    if sectors.is_empty() || sectors.len() != energies.len() {
        return Err(invalid("need one energy per sector"));
    }
    let kind = sectors[0].geometry();
    if sectors.iter().any(|s| s.geometry() != kind) {
        return Err(invalid("sectors mix geometries"));
    }
    for s in sectors {
        s.validate()?;
    }
    let rows: Vec<Vec<f64>> = sectors.iter().map(|s| s.design_row()).collect();
    let cols = rows[0].len();
    let a: Vec<f64> = rows.iter().flatten().copied().collect();
    let dependent_sectors = || -> Vec<String> {
        // Rows lying in the span of the earlier ones.
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut dep = Vec::new();
        for (s, r) in sectors.iter().zip(&rows) {
            let mut v = r.clone();
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
            let nrm = libm::sqrt(v.iter().map(|x| x * x).sum());
            if nrm < 1e-9 * libm::sqrt(r.iter().map(|x| x * x).sum::<f64>()) {
                dep.push(format!("{s}"));
            } else {
                basis.push(v.iter().map(|x| x / nrm).collect());
            }
        }
        if dep.is_empty() {
            dep.push(format!("too few sectors: {} independent, {cols} needed", basis.len()));
        }
        dep
    };
    let sol = lstsq(&a, rows.len(), cols, energies, 1e-10).map_err(|_| Error::RankDeficient { dependent: dependent_sectors() })?;
    let e_norm = libm::sqrt(energies.iter().map(|e| e * e).sum::<f64>());
    let x = &sol.x;
    let l = LCoefficients {
        kind,
        l0: x[0],
        l1: x[1],
        l1p: x[2],
        l2: x.get(3).copied().unwrap_or(0.0),
        l2p: x.get(4).copied().unwrap_or(0.0),
    };
    Ok(LFit { l, relative_residual: if e_norm > 0.0 { sol.residual / e_norm } else { sol.residual } })
}

/// Pair and quartet coefficients of `H = K0 + sum K2[ij] S_i.S_j + sum K4 (S.S)(S.S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingCoefficients {
    pub kind: GeometryKind,
    pub k0: f64,
    pub k2_ab: f64,
    pub k2_ac: f64,
    pub k4_abcd: Option<f64>,
    pub k4_acbd: Option<f64>,
}

impl CouplingCoefficients {
    /// `K2[AC] / K2[AB]`.
    pub fn ratio_ac_ab(&self) -> f64 {
        self.k2_ac / self.k2_ab
    }

    /// `K4[ABCD] / K2[AB]` (square only).
    pub fn ratio_k4abcd_k2ab(&self) -> Option<f64> {
        self.k4_abcd.map(|k| k / self.k2_ab)
    }

    /// `K4[ACBD] / K2[AC]` (square only).
    pub fn ratio_k4acbd_k2ac(&self) -> Option<f64> {
        self.k4_acbd.map(|k| k / self.k2_ac)
    }
}

/// Exact linear map from `L` to `K`, obtained by expanding the total-spin
/// operators into pair products. On the square this uses
/// `(S_T^2)^2 = 27/2 + 14 sum_adjacent S.S + 14 sum_diagonal S.S + 8 (...)`
/// and `S_AC^2 S_BD^2 = 9/4 + 3/2 (S_A.S_C + S_B.S_D) + 4 (S_A.S_C)(S_B.S_D)`.
pub fn l_to_k(l: &LCoefficients) -> CouplingCoefficients {
    match l.kind {
        GeometryKind::Linear3 => CouplingCoefficients {
            kind: l.kind,
            k0: l.l0 + 2.25 * l.l1 + 1.5 * l.l1p,
            k2_ab: 2.0 * l.l1,
            k2_ac: 2.0 * l.l1 + 2.0 * l.l1p,
            k4_abcd: None,
            k4_acbd: None,
        },
        GeometryKind::Square4 => CouplingCoefficients {
            kind: l.kind,
            k0: l.l0 + 3.0 * l.l1 + 3.0 * l.l1p + 13.5 * l.l2 + 2.25 * l.l2p,
            k2_ab: 2.0 * l.l1 + 14.0 * l.l2,
            k2_ac: 2.0 * l.l1 + 2.0 * l.l1p + 14.0 * l.l2 + 3.0 * l.l2p,
            k4_abcd: Some(8.0 * l.l2),
            k4_acbd: Some(8.0 * l.l2 + 4.0 * l.l2p),
        },
    }
}

/// Full diagnostic output of [`analyze`].
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingAnalysis {
    pub orbitals: OrbitalSet,
    pub sectors: Vec<Sector>,
    pub energies: Vec<f64>,
    pub fit: LFit,
    pub coefficients: CouplingCoefficients,
}

pub fn sectors_for(kind: GeometryKind) -> &'static [Sector] {
    match kind {
        GeometryKind::Linear3 => &LINEAR3_SECTORS,
        GeometryKind::Square4 => &SQUARE4_SECTORS,
    }
}

/// Sector energies, `L` and `K` for a given orbital list (in dot order).
pub fn couplings_from_centers(model: &NaturalModel, centers: &[Point]) -> Result<(Vec<f64>, LFit, CouplingCoefficients)> {
    let kind = model.geometry.kind;
    if centers.len() != kind.n_dots() {
        return Err(invalid(format!("{} needs {} centers", kind.name(), kind.n_dots())));
    }
    let ints = Integrals::new(model, centers)?;
    let sectors = sectors_for(kind);
    let energies = sectors.iter().map(|s| sector_energy(&ints, *s)).collect::<Result<Vec<_>>>()?;
    let fit = solve_l(sectors, &energies)?;
    let k = l_to_k(&fit.l);
    Ok((energies, fit, k))
}

/// End-to-end computation with diagnostics.
pub fn analyze(params: DimensionlessParams, kind: GeometryKind, potential: PotentialKind) -> Result<CouplingAnalysis> {
    let model = reduce_to_natural_units(params, kind, potential)?;
    let orbitals = optimize_orbital_centers(&model)?;
    let (energies, fit, coefficients) = couplings_from_centers(&model, &orbitals.centers)?;
    Ok(CouplingAnalysis { orbitals, sectors: sectors_for(kind).to_vec(), energies, fit, coefficients })
}

/// `K` coefficients in units of `hbar omega0`.
pub fn compute_couplings(params: DimensionlessParams, kind: GeometryKind, potential: PotentialKind) -> Result<CouplingCoefficients> {
    Ok(analyze(params, kind, potential)?.coefficients)
}

/// Inclusive grid `min, ..., max` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(invalid("grid needs at least one step"));
        }
        if !(min.is_finite() && max.is_finite()) || max < min {
            return Err(invalid(format!("grid bounds {min}:{max} are not an increasing finite range")));
        }
        Ok(Self { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps).map(|k| self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64).collect()
    }
}

/// One sweep point; failures are kept in the row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x_b: f64,
    pub x_v: f64,
    pub x_c: f64,
    pub result: Result<CouplingCoefficients>,
}

/// Grid points in row-major order (`x_b` outer, `x_v` inner).
pub fn sweep_points(x_b: &GridAxis, x_v: &GridAxis) -> Vec<(f64, f64)> {
    let vs = x_v.values();
    x_b.values().into_iter().flat_map(|b| vs.iter().map(move |v| (b, *v))).collect()
}

/// Evaluate one sweep point.
pub fn sweep_row(x_b: f64, x_v: f64, x_c: f64, kind: GeometryKind, potential: PotentialKind) -> SweepRow {
    let result = DimensionlessParams::new(x_b, x_v, x_c).and_then(|p| compute_couplings(p, kind, potential));
    SweepRow { x_b, x_v, x_c, result }
}

/// Sequential sweep in row-major grid order.
pub fn sweep(x_b: &GridAxis, x_v: &GridAxis, x_c: f64, kind: GeometryKind, potential: PotentialKind) -> Vec<SweepRow> {
    sweep_points(x_b, x_v).into_iter().map(|(b, v)| sweep_row(b, v, x_c, kind, potential)).collect()
}
