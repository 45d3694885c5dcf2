//! Parameters, geometries, confining potentials and closed-form integrals
//! over the Gaussian orbitals `phi_c(r) = pi^(-3/4) exp(-|r - c|^2 / 2)`.
//!
//! Natural units `hbar = m = omega0 = 1` throughout; energies come out in
//! units of `hbar omega0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
use core::str::FromStr;

use crate::error::{domain, Result};
use crate::numeric::{boys_f0, check_positive, norm_cdf, norm_pdf};

pub type Point = [f64; 3];

/// Dimensionless inputs: barrier ratio `x_b`, depth ratio `x_v` and Coulomb
/// ratio `x_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub x_b: f64,
    pub x_v: f64,
    pub x_c: f64,
}

impl DimensionlessParams {
    pub const DEFAULT_X_C: f64 = 1.5;

    pub fn new(x_b: f64, x_v: f64, x_c: f64) -> Result<Self> {
        let p = Self { x_b, x_v, x_c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("x_b", self.x_b)?;
        check_positive("x_v", self.x_v)?;
        check_positive("x_c", self.x_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    /// Three dots `A, B, C` on a line, `B` in the middle.
    Linear3,
    /// Four dots `A, B, C, D` on the corners of a square, in cyclic order.
    Square4,
}

impl GeometryKind {
    pub fn n_dots(self) -> usize {
        match self {
            GeometryKind::Linear3 => 3,
            GeometryKind::Square4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Linear3 => "linear3",
            GeometryKind::Square4 => "square4",
        }
    }
}

impl FromStr for GeometryKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear3" => Ok(GeometryKind::Linear3),
            "square4" => Ok(GeometryKind::Square4),
            _ => Err(domain(format!("unknown geometry {s:?} (expected linear3 or square4)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    /// `V = -V0 sum_W exp(-alpha |r - W|^2)`.
    Gaussian,
    /// `V = min_W |r - W|^2 / 2`, one parabola per dot with the orbital's curvature.
    Quadratic,
}

impl PotentialKind {
    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Gaussian => "gaussian",
            PotentialKind::Quadratic => "quadratic",
        }
    }
}

impl FromStr for PotentialKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(PotentialKind::Gaussian),
            "quadratic" => Ok(PotentialKind::Quadratic),
            _ => Err(domain(format!("unknown potential {s:?} (expected gaussian or quadratic)"))),
        }
    }
}

/// Nominal dot positions; the adjacent-dot separation is `2 l`.
#[derive(Debug, Clone, PartialEq)]
pub struct DotGeometry {
    pub kind: GeometryKind,
    pub l: f64,
    pub centers: Vec<Point>,
}

impl DotGeometry {
    pub fn new(kind: GeometryKind, l: f64) -> Result<Self> {
        check_positive("l", l)?;
        let centers = match kind {
            GeometryKind::Linear3 => vec![[-2.0 * l, 0.0, 0.0], [0.0, 0.0, 0.0], [2.0 * l, 0.0, 0.0]],
            GeometryKind::Square4 => {
                vec![[0.0, 2.0 * l, 0.0], [2.0 * l, 2.0 * l, 0.0], [2.0 * l, 0.0, 0.0], [0.0, 0.0, 0.0]]
            }
        };
        Ok(Self { kind, l, centers })
    }

    /// Unit directions along which each orbital may move toward the middle.
    pub fn relax_directions(&self) -> Vec<Point> {
        match self.kind {
            GeometryKind::Linear3 => vec![[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
            GeometryKind::Square4 => {
                let mid = [self.l, self.l, 0.0];
                self.centers
                    .iter()
                    .map(|c| {
                        let d = sub(mid, *c);
                        scale(d, 1.0 / norm(d))
                    })
                    .collect()
            }
        }
    }
}

/// Confining potential in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialModel {
    pub kind: PotentialKind,
    /// Well depth (gaussian only).
    pub v0: f64,
    /// Inverse squared width (gaussian only).
    pub alpha: f64,
    pub wells: Vec<Point>,
}

impl PotentialModel {
    pub fn value(&self, r: Point) -> f64 {
        match self.kind {
            PotentialKind::Gaussian => -self.v0 * self.wells.iter().map(|w| libm::exp(-self.alpha * dist2(r, *w))).sum::<f64>(),
            PotentialKind::Quadratic => 0.5 * self.wells.iter().map(|w| dist2(r, *w)).fold(f64::INFINITY, f64::min),
        }
    }
}

/// Everything the integrals need, in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalModel {
    pub params: DimensionlessParams,
    pub geometry: DotGeometry,
    pub potential: PotentialModel,
    /// Coulomb prefactor `e^2 / kappa`.
    pub coulomb: f64,
}

/// `l = sqrt(x_b)`, `e^2/kappa = x_c sqrt(x_b)`, `V0 = x_v / 2`, `alpha = 1 / x_v`.
///
/// The Gaussian well's curvature `2 V0 alpha` is then 1, matching the orbital
/// width; the quadratic model uses that curvature directly and ignores `x_v`.
pub fn reduce_to_natural_units(p: DimensionlessParams, kind: GeometryKind, potential: PotentialKind) -> Result<NaturalModel> {
    p.validate()?;
    let l = libm::sqrt(p.x_b);
    let geometry = DotGeometry::new(kind, l)?;
    let potential = PotentialModel { kind: potential, v0: p.x_v / 2.0, alpha: 1.0 / p.x_v, wells: geometry.centers.clone() };
    Ok(NaturalModel { params: p, geometry, potential, coulomb: p.x_c * l })
}

// Small vector helpers.

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dist2(a: Point, b: Point) -> f64 {
    let d = sub(a, b);
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

pub(crate) fn norm(a: Point) -> f64 {
    libm::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
}

pub(crate) fn midpoint(a: Point, b: Point) -> Point {
    scale(add(a, b), 0.5)
}

/// Orbital value `phi_c(r)`.
pub fn orbital(c: Point, r: Point) -> f64 {
    libm::pow(PI, -0.75) * libm::exp(-0.5 * dist2(r, c))
}

/// `<phi_a | phi_b> = exp(-|a - b|^2 / 4)`.
pub fn overlap(a: Point, b: Point) -> f64 {
    libm::exp(-0.25 * dist2(a, b))
}

/// `<phi_a | -nabla^2 / 2 | phi_b> = S (3/4 - |a - b|^2 / 8)`.
pub fn kinetic(a: Point, b: Point) -> f64 {
    let d2 = dist2(a, b);
    overlap(a, b) * (0.75 - d2 / 8.0)
}

/// `E[min_w (t - w)^2]` for `t ~ N(m, 1/2)` and sorted well coordinates `ws`.
fn axis_min_square(m: f64, ws: &[f64]) -> f64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut total = 0.0;
    for (k, &w) in ws.iter().enumerate() {
        let lo = if k == 0 { f64::NEG_INFINITY } else { 0.5 * (ws[k - 1] + w) };
        let hi = if k + 1 == ws.len() { f64::INFINITY } else { 0.5 * (w + ws[k + 1]) };
        let a = (lo - m) / s;
        let b = (hi - m) / s;
        let (pa, pb) = (norm_pdf(a), norm_pdf(b));
        let mass = norm_cdf(b) - norm_cdf(a);
        let apa = if a.is_finite() { a * pa } else { 0.0 };
        let bpb = if b.is_finite() { b * pb } else { 0.0 };
        let off = m - w;
        total += off * off * mass + 2.0 * off * s * (pa - pb) + s * s * (mass + apa - bpb);
    }
    total
}

fn distinct_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup_by(|a, b| libm::fabs(*a - *b) < 1e-12);
    v
}

/// Potential matrix element `<phi_a | V | phi_b>`.
///
/// For the quadratic model the wells must form a rectangular product grid, so
/// that `min_W |r - W|^2` splits into one minimum per axis.
pub fn potential_element(pot: &PotentialModel, a: Point, b: Point) -> Result<f64> {
    let s = overlap(a, b);
    let p = midpoint(a, b);
    match pot.kind {
        PotentialKind::Gaussian => {
            let g = 1.0 / (1.0 + pot.alpha);
            let k = pot.alpha / (1.0 + pot.alpha);
            Ok(-pot.v0 * s * libm::pow(g, 1.5) * pot.wells.iter().map(|w| libm::exp(-k * dist2(p, *w))).sum::<f64>())
        }
        PotentialKind::Quadratic => {
            let axes: Vec<Vec<f64>> = (0..3).map(|d| distinct_sorted(pot.wells.iter().map(|w| w[d]).collect())).collect();
            let grid = axes.iter().map(|a| a.len()).product::<usize>();
            if grid != pot.wells.len() {
                return Err(domain("quadratic wells must form a rectangular grid"));
            }
            Ok(0.5 * s * (0..3).map(|d| axis_min_square(p[d], &axes[d])).sum::<f64>())
        }
    }
}

/// One-body element `<phi_a | -nabla^2/2 + V | phi_b>`.
pub fn one_body_element(pot: &PotentialModel, a: Point, b: Point) -> Result<f64> {
    Ok(kinetic(a, b) + potential_element(pot, a, b)?)
}

/// Two-electron element `<phi_a(1) phi_c(2) | coulomb / r12 | phi_b(1) phi_d(2)>`
/// `= coulomb S_ab S_cd sqrt(2/pi) F0(R^2 / 2)` with `R` the distance between
/// the product centers.
pub fn coulomb_element(coulomb: f64, a: Point, b: Point, c: Point, d: Point) -> f64 {
    let r2 = dist2(midpoint(a, b), midpoint(c, d));
    coulomb * overlap(a, b) * overlap(c, d) * SQRT_2 / libm::sqrt(PI) * boys_f0(0.5 * r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units() {
        let m = reduce_to_natural_units(DimensionlessParams::new(1.0, 2.0, 1.5).unwrap(), GeometryKind::Linear3, PotentialKind::Gaussian).unwrap();
        assert_eq!(m.geometry.l, 1.0);
        assert_eq!(m.coulomb, 1.5);
        let m = reduce_to_natural_units(DimensionlessParams::new(3.0, 3.0, 1.5).unwrap(), GeometryKind::Square4, PotentialKind::Gaussian).unwrap();
        assert!((m.potential.alpha * m.geometry.l * m.geometry.l - 1.0).abs() < 1e-15);
        assert!(DimensionlessParams::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn overlap_values() {
        assert_eq!(overlap([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]), 1.0);
        assert!((overlap([0.0; 3], [2.0, 0.0, 0.0]) - libm::exp(-1.0)).abs() < 1e-15);
        assert!(overlap([0.0; 3], [100.0, 0.0, 0.0]) == 0.0);
    }

    #[test]
    fn isolated_parabola_gives_oscillator_energy() {
        let pot = PotentialModel { kind: PotentialKind::Quadratic, v0: 0.0, alpha: 0.0, wells: vec![[0.0; 3]] };
        let h = one_body_element(&pot, [0.0; 3], [0.0; 3]).unwrap();
        assert!((h - 1.5).abs() < 1e-14);
        assert!((kinetic([0.0; 3], [0.0; 3]) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn coulomb_limits() {
        let o = [0.0; 3];
        assert!((coulomb_element(1.0, o, o, o, o) - libm::sqrt(2.0 / PI)).abs() < 1e-15);
        let far = [40.0, 0.0, 0.0];
        let v = coulomb_element(1.0, o, o, far, far);
        assert!((v * 40.0 - 1.0).abs() < 1e-3);
        let (a, b, c, d) = ([0.1, 0.0, 0.0], [0.5, 0.2, 0.0], [1.0, 1.0, 0.0], [0.0, 1.5, 0.3]);
        let base = coulomb_element(1.3, a, b, c, d);
        for alt in [coulomb_element(1.3, b, a, c, d), coulomb_element(1.3, a, b, d, c), coulomb_element(1.3, c, d, a, b)] {
            assert!((alt - base).abs() < 1e-15);
        }
    }

    #[test]
    fn non_grid_quadratic_wells_are_rejected() {
        let pot = PotentialModel { kind: PotentialKind::Quadratic, v0: 0.0, alpha: 0.0, wells: vec![[0.0; 3], [1.0, 1.0, 0.0]] };
        assert!(potential_element(&pot, [0.0; 3], [0.0; 3]).is_err());
    }
}
