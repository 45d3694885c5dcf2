//! Dense complex matrices and spin-1/2 operator constructors.
//!
//! Site 0 is the leftmost tensor factor. `S = sigma / 2`, hbar omitted.

mod eigen;
mod matrix;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::ComplexMatrix;

use crate::error::{invalid, Error, Result};
use crate::C64;

/// Largest register the dense kernel is meant for.
pub const MAX_SITES: usize = 8;

/// Pauli axis, with `I` for the identity factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// 2x2 matrix of this Pauli operator.
    pub fn matrix(self) -> ComplexMatrix {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let d = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        ComplexMatrix::from_vec(2, 2, d.to_vec())
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Column reached from basis bit `bit` and the amplitude picked up:
    /// `sigma |bit> = amp |flip>`.
    #[inline]
    fn act(self, bit: usize) -> (usize, C64) {
        match self {
            Pauli::I => (bit, C64::new(1.0, 0.0)),
            Pauli::X => (bit ^ 1, C64::new(1.0, 0.0)),
            Pauli::Y => (bit ^ 1, if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) }),
            Pauli::Z => (bit, if bit == 0 { C64::new(1.0, 0.0) } else { C64::new(-1.0, 0.0) }),
        }
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites > MAX_SITES {
        return Err(invalid(format!("n_sites must be in 1..={MAX_SITES}, got {n_sites}")));
    }
    Ok(())
}

fn check_site(n_sites: usize, site: usize) -> Result<()> {
    if site >= n_sites {
        return Err(Error::IndexOutOfRange { index: site, len: n_sites });
    }
    Ok(())
}

#[inline]
fn bit_of(n_sites: usize, index: usize, site: usize) -> usize {
    (index >> (n_sites - 1 - site)) & 1
}

/// Matrix of a Pauli string; `paulis[k]` acts on site `k`.
pub fn pauli_string(paulis: &[Pauli]) -> Result<ComplexMatrix> {
    let n = paulis.len();
    check_sites(n)?;
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut row = 0usize;
        let mut amp = C64::new(1.0, 0.0);
        for (site, p) in paulis.iter().enumerate() {
            let (b, a) = p.act(bit_of(n, col, site));
            row |= b << (n - 1 - site);
            amp *= a;
        }
        m[(row, col)] = amp;
    }
    Ok(m)
}

/// `I (x) ... (x) sigma_axis (x) ... (x) I` with the Pauli on `site`.
pub fn embed_pauli(n_sites: usize, site: usize, axis: Pauli) -> Result<ComplexMatrix> {
    check_sites(n_sites)?;
    check_site(n_sites, site)?;
    let mut s = vec![Pauli::I; n_sites];
    s[site] = axis;
    pauli_string(&s)
}

fn check_pair(n_sites: usize, i: usize, j: usize) -> Result<()> {
    check_sites(n_sites)?;
    check_site(n_sites, i)?;
    check_site(n_sites, j)?;
    if i == j {
        return Err(invalid(format!("sites must differ, got {i} twice")));
    }
    Ok(())
}

/// `S_i . S_j = 1/4 (sx sx + sy sy + sz sz)`.
pub fn dot_coupling(n_sites: usize, i: usize, j: usize) -> Result<ComplexMatrix> {
    check_pair(n_sites, i, j)?;
    let mut acc = ComplexMatrix::zeros(1 << n_sites, 1 << n_sites);
    for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
        let mut s = vec![Pauli::I; n_sites];
        s[i] = axis;
        s[j] = axis;
        acc = &acc + &pauli_string(&s)?;
    }
    Ok(acc.scale_real(0.25))
}

/// Swap of sites `i` and `j` within basis index `b`.
#[inline]
pub fn swap_bits(n_sites: usize, b: usize, i: usize, j: usize) -> usize {
    let (si, sj) = (n_sites - 1 - i, n_sites - 1 - j);
    let (bi, bj) = ((b >> si) & 1, (b >> sj) & 1);
    if bi == bj {
        b
    } else {
        b ^ ((1 << si) | (1 << sj))
    }
}

/// Exchange (swap) operator `E_ij = 1/2 (4 S_i . S_j + I)`.
pub fn exchange(n_sites: usize, i: usize, j: usize) -> Result<ComplexMatrix> {
    check_pair(n_sites, i, j)?;
    let dim = 1usize << n_sites;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        m[(swap_bits(n_sites, b, i, j), b)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

/// `(sum_{w in subset} S_w)^2`.
pub fn total_spin_squared(n_sites: usize, subset: &[usize]) -> Result<ComplexMatrix> {
    check_sites(n_sites)?;
    if subset.is_empty() {
        return Err(invalid("subset must be nonempty"));
    }
    for (k, &s) in subset.iter().enumerate() {
        check_site(n_sites, s)?;
        if subset[..k].contains(&s) {
            return Err(invalid(format!("site {s} repeated in subset")));
        }
    }
    let dim = 1usize << n_sites;
    let mut acc = ComplexMatrix::identity(dim).scale_real(0.75 * subset.len() as f64);
    for a in 0..subset.len() {
        for b in a + 1..subset.len() {
            acc = &acc + &dot_coupling(n_sites, subset[a], subset[b])?.scale_real(2.0);
        }
    }
    Ok(acc)
}

/// A real linear combination of products of single-site spin operators.
///
/// Each factor `(site, axis)` stands for `S_axis = sigma_axis / 2` on that site;
/// `Pauli::I` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSpec {
    pub n_sites: usize,
    pub terms: Vec<(f64, Vec<(usize, Pauli)>)>,
}

impl SpinOperatorSpec {
    pub fn new(n_sites: usize) -> Self {
        Self { n_sites, terms: Vec::new() }
    }

    pub fn term(mut self, coefficient: f64, factors: &[(usize, Pauli)]) -> Self {
        self.terms.push((coefficient, factors.to_vec()));
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_sites(self.n_sites)?;
        for (_, factors) in &self.terms {
            for (k, &(site, _)) in factors.iter().enumerate() {
                check_site(self.n_sites, site)?;
                if factors[..k].iter().any(|&(s, _)| s == site) {
                    return Err(invalid(format!("site {site} repeated within one product")));
                }
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        let dim = 1usize << self.n_sites;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (coef, factors) in &self.terms {
            let mut s = vec![Pauli::I; self.n_sites];
            let mut weight = *coef;
            for &(site, axis) in factors {
                s[site] = axis;
                if axis != Pauli::I {
                    weight *= 0.5;
                }
            }
            acc = &acc + &pauli_string(&s)?.scale_real(weight);
        }
        Ok(acc)
    }
}

/// Coefficients of a matrix in the Pauli-string basis, `M = sum c_P P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    pub n_sites: usize,
    coefficients: Vec<C64>,
}

impl PauliDecomposition {
    fn flat_index(paulis: &[Pauli]) -> usize {
        paulis.iter().fold(0, |acc, p| acc * 4 + p.index())
    }

    fn string_of(n_sites: usize, mut idx: usize) -> Vec<Pauli> {
        let mut s = vec![Pauli::I; n_sites];
        for k in (0..n_sites).rev() {
            s[k] = Pauli::ALL[idx % 4];
            idx /= 4;
        }
        s
    }

    /// Coefficient of one Pauli string.
    pub fn coefficient(&self, paulis: &[Pauli]) -> C64 {
        assert_eq!(paulis.len(), self.n_sites);
        self.coefficients[Self::flat_index(paulis)]
    }

    /// Strings with `|c| > threshold`, in lexicographic (I < X < Y < Z) order.
    pub fn significant(&self, threshold: f64) -> Vec<(Vec<Pauli>, C64)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > threshold)
            .map(|(i, c)| (Self::string_of(self.n_sites, i), *c))
            .collect()
    }

    /// Largest imaginary part among the coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coefficients.iter().map(|c| libm::fabs(c.im)).fold(0.0, f64::max)
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.n_sites;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let p = pauli_string(&Self::string_of(self.n_sites, i))?;
            acc = &acc + &p.scale(*c);
        }
        Ok(acc)
    }
}

/// `c_P = Tr(M P) / 2^n` for every Pauli string `P`.
pub fn pauli_decompose(m: &ComplexMatrix) -> Result<PauliDecomposition> {
    let dim = m.rows();
    if !m.is_square() || dim < 2 || !dim.is_power_of_two() {
        return Err(invalid(format!("dimension {}x{} is not a power of two", m.rows(), m.cols())));
    }
    let n = dim.trailing_zeros() as usize;
    check_sites(n)?;
    let count = 1usize << (2 * n);
    let mut coefficients = Vec::with_capacity(count);
    for idx in 0..count {
        let s = PauliDecomposition::string_of(n, idx);
        // Tr(M P) = sum_b M[b, P(b)] amp(b) where P|b> = amp(b) |P(b)>.
        let mut tr = C64::new(0.0, 0.0);
        for b in 0..dim {
            let mut target = 0usize;
            let mut amp = C64::new(1.0, 0.0);
            for (site, p) in s.iter().enumerate() {
                let (bit, a) = p.act(bit_of(n, b, site));
                target |= bit << (n - 1 - site);
                amp *= a;
            }
            tr += m[(b, target)] * amp;
        }
        coefficients.push(tr / dim as f64);
    }
    Ok(PauliDecomposition { n_sites: n, coefficients })
}

/// Tolerance on `max |H - H^dagger|` accepted by [`exp_i_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `exp(i theta H)` for Hermitian `H`, via eigendecomposition.
pub fn exp_i_hermitian(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(h, HERMITIAN_TOL)?;
    let phases: Vec<C64> = e.values.iter().map(|&l| C64::from_polar(1.0, theta * l)).collect();
    let n = h.rows();
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| e.vectors[(r, c)] * phases[c]);
    Ok(&scaled * &e.vectors.adjoint())
}

/// Distance between `a` and `b` modulo one global phase, with the phase taken
/// from the largest-magnitude entry of `b`. Returns `(max entry deviation, phase)`.
pub fn phase_insensitive_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> (f64, C64) {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    let mut best = (0usize, 0usize, -1.0f64);
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            let m = b[(r, c)].norm();
            if m > best.2 + 1e-12 {
                best = (r, c, m);
            }
        }
    }
    let (r, c, m) = best;
    if m <= 0.0 {
        return (a.max_abs(), C64::new(1.0, 0.0));
    }
    let ratio = a[(r, c)] / b[(r, c)];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { C64::new(1.0, 0.0) };
    (a.max_abs_diff(&b.scale(phase)), phase)
}
