//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.

use alloc::vec::Vec;

use super::ComplexMatrix;
use crate::error::{domain, Result};
use crate::C64;

/// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 100;

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

/// Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `1e-14 * max(1, ||A||_F)`.
pub fn hermitian_eigen(h: &ComplexMatrix, herm_tol: f64) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(domain("eigendecomposition needs a square matrix"));
    }
    let scale = f64::max(1.0, h.max_abs());
    let defect = h.hermiticity_defect();
    if defect > herm_tol * scale {
        return Err(domain(alloc::format!("matrix is not Hermitian (defect {defect:.3e})")));
    }
    let n = h.rows();
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let threshold = 1e-14 * f64::max(1.0, a.frobenius_norm());

    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // G = D R with D = diag(1, conj(phase)) on (p, q):
                // G_pp = c, G_pq = s, G_qp = -s conj(phase), G_qq = c conj(phase).
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}
