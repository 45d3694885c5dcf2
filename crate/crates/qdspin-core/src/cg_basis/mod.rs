//! Total-spin eigenbases from sequential Clebsch-Gordan coupling.
//!
//! A basis state of `N` spins is labelled by its Bratteli path: the partial
//! total spins `S_1, ..., S_N` of sites `{0}, {0,1}, ..., {0..N-1}`. Vectors
//! use Condon-Shortley phases, then the global sign is fixed so that the
//! largest-magnitude component is positive.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{domain, invalid, Error, Result};
use crate::spin_algebra::{swap_bits, ComplexMatrix};
use crate::C64;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `j (j + 1)`.
    #[inline]
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }

    /// Nearest half-integer to `x`, or `None` when `x` is not one.
    pub fn from_f64(x: f64) -> Option<Self> {
        let t = libm::round(2.0 * x);
        if libm::fabs(2.0 * x - t) < 1e-9 && t.abs() < i32::MAX as f64 {
            Some(HalfInt(t as i32))
        } else {
            None
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Projection of an added spin-1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    fn twice(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }
}

/// `<j m; 1/2 s | J M>` for both `J = j + 1/2` and (when `j > 0`) `J = j - 1/2`,
/// where `M = m + s`.
pub fn couple_half(j: HalfInt, m: HalfInt, spin: Spin) -> Result<Vec<(HalfInt, f64)>> {
    if j.0 < 0 || m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(domain(format!("invalid (j, m) = ({j}, {m})")));
    }
    let jv = j.value();
    let big_m = (m.0 + spin.twice()) as f64 / 2.0;
    let denom = 2.0 * jv + 1.0;
    let mut out = Vec::with_capacity(2);
    let up = match spin {
        Spin::Up => libm::sqrt((jv + big_m + 0.5) / denom),
        Spin::Down => libm::sqrt((jv - big_m + 0.5) / denom),
    };
    out.push((HalfInt(j.0 + 1), up));
    if j.0 > 0 {
        let down = match spin {
            Spin::Up => -libm::sqrt(f64::max(0.0, jv - big_m + 0.5) / denom),
            Spin::Down => libm::sqrt(f64::max(0.0, jv + big_m + 0.5) / denom),
        };
        out.push((HalfInt(j.0 - 1), down));
    }
    Ok(out)
}

fn factorial(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// General Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` (Racah formula).
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);
    if tm1 + tm2 != tm || tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return 0.0;
    }
    // Integers: a = j1 + j2 - J etc.
    let a = (tj1 + tj2 - tj) / 2;
    let b = (tj1 - tj2 + tj) / 2;
    let c = (-tj1 + tj2 + tj) / 2;
    let d = (tj1 + tj2 + tj) / 2 + 1;
    let pre = libm::sqrt((tj + 1) as f64 * factorial(a) * factorial(b) * factorial(c) / factorial(d));
    let e = libm::sqrt(
        factorial((tj + tm) / 2)
            * factorial((tj - tm) / 2)
            * factorial((tj1 - tm1) / 2)
            * factorial((tj1 + tm1) / 2)
            * factorial((tj2 - tm2) / 2)
            * factorial((tj2 + tm2) / 2),
    );
    let mut sum = 0.0;
    for k in 0..=d {
        let t = [
            k,
            a - k,
            (tj1 - tm1) / 2 - k,
            (tj2 + tm2) / 2 - k,
            (tj - tj2 + tm1) / 2 + k,
            (tj - tj1 - tm2) / 2 + k,
        ];
        if t.iter().any(|&x| x < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / t.iter().map(|&x| factorial(x)).product::<f64>();
    }
    pre * e * sum
}

/// Sequence of partial total spins `S_1, ..., S_N`, stored as `2 S_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BratteliPath(Vec<u32>);

impl BratteliPath {
    /// Validates `S_1 = 1/2` and `|S_k - S_{k-1}| = 1/2`.
    pub fn new(twice: Vec<u32>) -> Result<Self> {
        if twice.first() != Some(&1) {
            return Err(invalid("a path starts at S_1 = 1/2"));
        }
        for w in twice.windows(2) {
            if (w[0] as i64 - w[1] as i64).abs() != 1 {
                return Err(invalid(format!("path step {} -> {} is not +-1/2", w[0], w[1])));
            }
        }
        Ok(Self(twice))
    }

    pub fn twice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total spin at the end of the path.
    pub fn total(&self) -> HalfInt {
        HalfInt(*self.0.last().unwrap_or(&0) as i32)
    }
}

impl fmt::Display for BratteliPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", HalfInt(*t as i32))?;
        }
        write!(f, ">")
    }
}

/// The fourteen eight-spin singlet paths in the conventional order: the four
/// code states `|0L0L>, |0L1L>, |1L0L>, |1L1L>` first, then the ten others.
pub const EIGHT_SPIN_SINGLET_ORDER: [[u32; 8]; 14] = [
    [1, 0, 1, 0, 1, 0, 1, 0],
    [1, 0, 1, 0, 1, 2, 1, 0],
    [1, 2, 1, 0, 1, 0, 1, 0],
    [1, 2, 1, 0, 1, 2, 1, 0],
    [1, 0, 1, 2, 1, 0, 1, 0],
    [1, 2, 1, 2, 1, 0, 1, 0],
    [1, 0, 1, 2, 1, 2, 1, 0],
    [1, 2, 1, 2, 1, 2, 1, 0],
    [1, 0, 1, 2, 3, 2, 1, 0],
    [1, 2, 3, 2, 1, 0, 1, 0],
    [1, 2, 3, 2, 3, 2, 1, 0],
    [1, 2, 3, 4, 3, 2, 1, 0],
    [1, 2, 1, 2, 3, 2, 1, 0],
    [1, 2, 3, 2, 1, 2, 1, 0],
];

/// All paths of `n_sites` spins ending at total spin `total`, in lexicographic
/// order, except that `(8, 0)` uses [`EIGHT_SPIN_SINGLET_ORDER`]. `(4, 0)` is
/// already in code-state order lexicographically.
pub fn enumerate_paths(n_sites: usize, total: HalfInt) -> Vec<BratteliPath> {
    if n_sites == 0 || total.0 < 0 {
        return Vec::new();
    }
    let target = total.0 as u32;
    let mut out = Vec::new();
    let mut current = vec![1u32];
    fn rec(n: usize, target: u32, current: &mut Vec<u32>, out: &mut Vec<BratteliPath>) {
        let last = *current.last().unwrap();
        let remaining = (n - current.len()) as u32;
        if remaining == 0 {
            if last == target {
                out.push(BratteliPath(current.clone()));
            }
            return;
        }
        // Lower branch first gives lexicographic order.
        for next in [last.wrapping_sub(1), last + 1] {
            if next == u32::MAX {
                continue;
            }
            if next.abs_diff(target) < remaining {
                current.push(next);
                rec(n, target, current, out);
                current.pop();
            }
        }
    }
    rec(n_sites, target, &mut current, &mut out);
    if n_sites == 8 && target == 0 {
        out.sort_by_key(|p| {
            EIGHT_SPIN_SINGLET_ORDER.iter().position(|q| q[..] == p.0[..]).unwrap_or(usize::MAX)
        });
    }
    out
}

/// Fix the global sign so that the largest-magnitude component is positive
/// (first index within 1e-12 of the maximum).
pub fn fix_sign(v: &mut [f64]) {
    let max = v.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max);
    if let Some(k) = v.iter().position(|x| libm::fabs(*x) >= max - 1e-12) {
        if v[k] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Multiplet of vectors `|S M>` for `M = -S..S`, indexed by `(M + S)`; each a
/// `2^k` real vector with site 0 as the most significant bit.
fn multiplet_along(path: &[u32]) -> Vec<Vec<f64>> {
    let mut mult: Vec<Vec<f64>> = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let mut j2 = 1i32;
    for &big_j2 in &path[1..] {
        let big_j2 = big_j2 as i32;
        let dim = mult[0].len() * 2;
        let mut next = Vec::with_capacity(big_j2 as usize + 1);
        for big_m2 in (-big_j2..=big_j2).step_by(2) {
            let mut v = vec![0.0; dim];
            for spin in [Spin::Up, Spin::Down] {
                let m2 = big_m2 - spin.twice();
                if m2.abs() > j2 {
                    continue;
                }
                let coeffs = couple_half(HalfInt(j2), HalfInt(m2), spin).expect("valid by construction");
                let c = coeffs.iter().find(|(jj, _)| jj.0 == big_j2).map_or(0.0, |x| x.1);
                if c == 0.0 {
                    continue;
                }
                let bit = if spin == Spin::Up { 0 } else { 1 };
                let src = &mult[((m2 + j2) / 2) as usize];
                for (idx, a) in src.iter().enumerate() {
                    if *a != 0.0 {
                        v[2 * idx + bit] += c * a;
                    }
                }
            }
            next.push(v);
        }
        mult = next;
        j2 = big_j2;
    }
    mult
}

/// Vector of a path with total projection `s_z`, normalized, sign-fixed.
pub fn path_to_vector(path: &BratteliPath, s_z: HalfInt) -> Result<Vec<f64>> {
    let total = path.total();
    if s_z.0.abs() > total.0 || (total.0 - s_z.0) % 2 != 0 {
        return Err(domain(format!("S_z = {s_z} is not available for total spin {total}")));
    }
    let mult = multiplet_along(&path.0);
    let mut v = mult[((s_z.0 + total.0) / 2) as usize].clone();
    fix_sign(&mut v);
    Ok(v)
}

/// Raw Condon-Shortley multiplet of a path (no sign fixing), `index = M + S`.
pub fn path_multiplet(path: &BratteliPath) -> Vec<Vec<f64>> {
    multiplet_along(&path.0)
}

/// Ordered path basis of one `(S_T, S_z)` sector with its vector realization.
#[derive(Debug, Clone)]
pub struct SpinPathBasis {
    pub n_sites: usize,
    pub total: HalfInt,
    pub s_z: HalfInt,
    pub paths: Vec<BratteliPath>,
    pub vectors: Vec<Vec<f64>>,
}

impl SpinPathBasis {
    pub fn new(n_sites: usize, total: HalfInt, s_z: HalfInt) -> Result<Self> {
        if n_sites == 0 || n_sites > crate::spin_algebra::MAX_SITES {
            return Err(invalid(format!("n_sites must be in 1..=8, got {n_sites}")));
        }
        let paths = enumerate_paths(n_sites, total);
        let vectors = paths.iter().map(|p| path_to_vector(p, s_z)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n_sites, total, s_z, paths, vectors })
    }

    /// The 14-dimensional singlet space of eight spins.
    pub fn eight_spin_singlets() -> Self {
        Self::new(8, HalfInt::ZERO, HalfInt::ZERO).expect("fixed sizes are valid")
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    /// Isometry `P` whose columns are the basis vectors.
    pub fn isometry(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.vectors)
    }

    /// `P^dagger E_ij P`.
    pub fn exchange(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        if i >= self.n_sites || j >= self.n_sites {
            return Err(Error::IndexOutOfRange { index: i.max(j), len: self.n_sites });
        }
        if i == j {
            return Err(invalid("exchange needs two distinct sites"));
        }
        let n = self.n_sites;
        let d = self.dim();
        let swapped: Vec<Vec<f64>> = self
            .vectors
            .iter()
            .map(|v| (0..v.len()).map(|b| v[swap_bits(n, b, i, j)]).collect())
            .collect();
        Ok(ComplexMatrix::from_fn(d, d, |r, c| {
            let s: f64 = self.vectors[r].iter().zip(&swapped[c]).map(|(a, b)| a * b).sum();
            C64::new(s, 0.0)
        }))
    }

    /// `P^dagger M P` for a full-register operator.
    pub fn project(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let p = self.isometry();
        &(&p.adjoint() * op) * &p
    }

    /// Norm of the part of `op P` outside the span of the basis.
    pub fn leakage(&self, op: &ComplexMatrix) -> f64 {
        let p = self.isometry();
        let op_p = op * &p;
        let back = &p * &(&p.adjoint() * &op_p);
        (&op_p - &back).frobenius_norm()
    }
}

/// The two four-spin singlets that encode one qubit.
///
/// `zero_l` is the path `(1/2, 0, 1/2, 0)`: singlets on (A,B) and (C,D).
/// `one_l` is the path `(1/2, 1, 1/2, 0)` with its sign chosen so that the
/// exchange operators read `E_AC = (sqrt3/2) X + Z/2` and
/// `E_AD = -(sqrt3/2) X + Z/2` on the code block.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeStates {
    pub zero_l: Vec<f64>,
    pub one_l: Vec<f64>,
}

impl CodeStates {
    pub fn new() -> Self {
        let zero_l = path_to_vector(&BratteliPath(vec![1, 0, 1, 0]), HalfInt::ZERO).expect("valid path");
        let mut one_l = path_to_vector(&BratteliPath(vec![1, 2, 1, 0]), HalfInt::ZERO).expect("valid path");
        one_l.iter_mut().for_each(|x| *x = -*x);
        Self { zero_l, one_l }
    }

    fn isometry(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&[self.zero_l.clone(), self.one_l.clone()])
    }
}

impl Default for CodeStates {
    fn default() -> Self {
        Self::new()
    }
}

/// Leakage tolerance for [`encoded_operator_check`].
pub const CODE_LEAKAGE_TOL: f64 = 1e-10;

/// Restrict a four-spin operator to the code block `{|0_L>, |1_L>}`.
///
/// Fails when the operator moves the code space outside itself.
pub fn encoded_operator_check(op: &ComplexMatrix) -> Result<ComplexMatrix> {
    if op.rows() != 16 || op.cols() != 16 {
        return Err(invalid("expected a 16x16 operator on four spins"));
    }
    let q = CodeStates::new().isometry();
    let oq = op * &q;
    let block = &q.adjoint() * &oq;
    let leak = (&oq - &(&q * &block)).frobenius_norm();
    if leak > CODE_LEAKAGE_TOL {
        return Err(domain(format!("operator leaks out of the code space (norm {leak:.3e})")));
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::exchange;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn singlet_and_triplet_coefficients() {
        // |1/2 1/2> (x) down into J = 0
        let up_down = couple_half(h(1), h(1), Spin::Down).unwrap();
        let down_up = couple_half(h(1), h(-1), Spin::Up).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((up_down[1].1 - s).abs() < 1e-15);
        assert!((down_up[1].1 + s).abs() < 1e-15);
        assert!((up_down[0].1 - s).abs() < 1e-15 && (down_up[0].1 - s).abs() < 1e-15);
    }

    #[test]
    fn invalid_projection_is_rejected() {
        assert!(couple_half(h(1), h(3), Spin::Up).is_err());
        assert!(couple_half(h(2), h(1), Spin::Up).is_err());
    }

    #[test]
    fn racah_agrees_with_half_coupling() {
        for j2 in 0..6 {
            for m2 in (-j2..=j2).step_by(2) {
                for spin in [Spin::Up, Spin::Down] {
                    for (big_j, c) in couple_half(h(j2), h(m2), spin).unwrap() {
                        let r = clebsch_gordan(h(j2), h(m2), h(1), h(spin.twice()), big_j, h(m2 + spin.twice()));
                        assert!((r - c).abs() < 1e-13, "j2={j2} m2={m2} {spin:?} J={big_j}");
                    }
                }
            }
        }
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = [2, 4, 6, 8].iter().map(|&n| enumerate_paths(n, HalfInt::ZERO).len()).collect();
        assert_eq!(counts, [1, 2, 5, 14]);
        assert_eq!(enumerate_paths(3, h(3)).len(), 1);
        assert!(enumerate_paths(3, HalfInt::ZERO).is_empty());
    }

    #[test]
    fn eight_spin_order_is_the_conventional_one() {
        let p = enumerate_paths(8, HalfInt::ZERO);
        for (a, b) in p.iter().zip(EIGHT_SPIN_SINGLET_ORDER.iter()) {
            assert_eq!(a.twice(), &b[..]);
        }
    }

    #[test]
    fn zero_l_matches_singlet_product() {
        let c = CodeStates::new();
        // 1/2 (|udud> + |dudu> - |uddu> - |duud>), up = bit 0
        let mut expect = vec![0.0; 16];
        expect[0b0101] = 0.5;
        expect[0b1010] = 0.5;
        expect[0b0110] = -0.5;
        expect[0b1001] = -0.5;
        let dot: f64 = c.zero_l.iter().zip(&expect).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exchange_ab_on_code_block_is_minus_z() {
        let e = exchange(4, 0, 1).unwrap();
        let b = encoded_operator_check(&e).unwrap();
        assert!(b.max_abs_diff(&ComplexMatrix::from_real(2, 2, &[-1.0, 0.0, 0.0, 1.0])) < 1e-14);
    }

    #[test]
    fn leaking_operator_is_rejected() {
        let x = crate::spin_algebra::embed_pauli(4, 0, crate::spin_algebra::Pauli::X).unwrap();
        assert!(matches!(encoded_operator_check(&x), Err(Error::Domain(_))));
    }
}
