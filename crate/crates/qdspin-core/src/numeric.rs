//! Small scalar numerics: special functions, 1-D minimization and root
//! bracketing, and a dense least-squares solver.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Error function, delegated to `libm`.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Boys function of order zero, `F0(t) = 1/2 sqrt(pi/t) erf(sqrt t)`.
///
/// Uses the Taylor series below `t = 1e-6` where the closed form is 0/0.
pub fn boys_f0(t: f64) -> f64 {
    if t < 1e-6 {
        1.0 - t / 3.0 + t * t / 10.0
    } else {
        let s = libm::sqrt(t);
        0.5 * libm::sqrt(PI / t) * erf(s)
    }
}

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    libm::exp(-0.5 * x * x) / libm::sqrt(2.0 * PI)
}

/// Standard normal distribution function.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Result of a bracketed 1-D minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    /// True when the minimizer sits on an end of the bracket.
    pub at_boundary: bool,
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum {
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let value = f(x);
    let edge = 10.0 * tol;
    Minimum {
        x,
        value,
        at_boundary: (x - a) <= edge || (b - x) <= edge,
    }
}

/// Bisection on `[a, b]`; `f(a)` and `f(b)` must differ in sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot("bracket has no sign change".into()));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a) * 0.5 < tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Every root of `f` found by scanning `[lo, hi]` with `points` samples and
/// bisecting each sign change to `tol`.
pub fn scan_roots<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Vec<f64> {
    let n = points.max(2);
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for k in 0..n - 1 {
        if vals[k] == 0.0 {
            roots.push(xs[k]);
        } else if vals[k].signum() != vals[k + 1].signum() && vals[k + 1] != 0.0 {
            if let Ok(r) = bisect(&mut f, xs[k], xs[k + 1], tol) {
                roots.push(r);
            }
        }
    }
    if vals[n - 1] == 0.0 {
        roots.push(xs[n - 1]);
    }
    roots
}

/// Least-squares solution of `A x = b` for a dense `rows x cols` matrix given
/// row-major, via Householder QR.
#[derive(Debug, Clone, PartialEq)]
pub struct LstsqSolution {
    pub x: Vec<f64>,
    /// Euclidean norm of `A x - b`.
    pub residual: f64,
}

/// Solve least squares. Columns whose pivot falls below `rank_tol` times the
/// largest pivot are reported by index as dependent.
pub fn lstsq(a: &[f64], rows: usize, cols: usize, b: &[f64], rank_tol: f64) -> core::result::Result<LstsqSolution, Vec<usize>> {
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows);
    let mut r = a.to_vec();
    let mut qtb = b.to_vec();
    let steps = cols.min(rows);
    for k in 0..steps {
        let mut norm = 0.0;
        for i in k..rows {
            norm += r[i * cols + k] * r[i * cols + k];
        }
        let norm = libm::sqrt(norm);
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v = vec![0.0; rows];
        for i in k..rows {
            v[i] = r[i * cols + k];
        }
        v[k] -= alpha;
        let vnorm2: f64 = v[k..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i] * r[i * cols + j]).sum();
            let s = 2.0 * dot / vnorm2;
            for i in k..rows {
                r[i * cols + j] -= s * v[i];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i] * qtb[i]).sum();
        let s = 2.0 * dot / vnorm2;
        for i in k..rows {
            qtb[i] -= s * v[i];
        }
    }
    let max_pivot = (0..steps).map(|k| libm::fabs(r[k * cols + k])).fold(0.0, f64::max);
    let dependent: Vec<usize> = (0..cols)
        .filter(|&k| k >= steps || libm::fabs(r[k * cols + k]) <= rank_tol * max_pivot)
        .collect();
    if !dependent.is_empty() {
        return Err(dependent);
    }
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = qtb[k];
        for j in k + 1..cols {
            s -= r[k * cols + j] * x[j];
        }
        x[k] = s / r[k * cols + k];
    }
    let mut residual = 0.0;
    for i in 0..rows {
        let mut s = -b[i];
        for j in 0..cols {
            s += a[i * cols + j] * x[j];
        }
        residual += s * s;
    }
    Ok(LstsqSolution { x, residual: libm::sqrt(residual) })
}

/// Distance from `x` to the nearest integer.
#[inline]
pub fn integer_distance(x: f64) -> f64 {
    libm::fabs(x - libm::round(x))
}

/// Relative equality used by the constraint checkers.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    libm::fabs(a - b) <= tol * f64::max(1.0, f64::max(libm::fabs(a), libm::fabs(b)))
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(domain(alloc::format!("{name} must be positive and finite, got {x}")))
    }
}
