use qdspin_core::cg_basis::*;
use qdspin_core::spin_algebra::{exchange, hermitian_eigen, total_spin_squared};
use qdspin_core::{ComplexMatrix, C64};

fn h(t: i32) -> HalfInt {
    HalfInt::from_twice(t)
}

/// E_DE in the 14-state ordering, written out by hand.
fn golden_e_de() -> Vec<Vec<f64>> {
    let (a, b) = (0.5, 3f64.sqrt() / 2.0);
    let mut m = vec![vec![0.0; 14]; 14];
    for (i, j) in [(0, 4), (1, 6), (2, 5), (3, 7)] {
        m[i][i] = a;
        m[j][j] = -a;
        m[i][j] = b;
        m[j][i] = b;
    }
    for k in [8, 9, 12, 13] {
        m[k][k] = 1.0;
    }
    m[10][10] = 0.25;
    m[11][11] = -0.25;
    m[10][11] = 15f64.sqrt() / 4.0;
    m[11][10] = 15f64.sqrt() / 4.0;
    m
}

#[test]
fn e_de_matches_the_hand_written_matrix() {
    let basis = SpinPathBasis::eight_spin_singlets();
    let e = basis.exchange(3, 4).unwrap();
    let g = golden_e_de();
    for r in 0..14 {
        for c in 0..14 {
            assert!((e[(r, c)] - C64::new(g[r][c], 0.0)).norm() < 1e-12, "({r},{c}) {} vs {}", e[(r, c)], g[r][c]);
        }
    }
}

#[test]
fn singlet_counts_match_eigen_multiplicity() {
    for (n, catalan) in [(2usize, 1usize), (4, 2), (6, 5), (8, 14)] {
        assert_eq!(enumerate_paths(n, HalfInt::ZERO).len(), catalan);
        let s2 = total_spin_squared(n, &(0..n).collect::<Vec<_>>()).unwrap();
        // Restrict to S_z = 0 to keep the diagonalization small.
        let idx: Vec<usize> = (0..1usize << n).filter(|i| i.count_ones() as usize * 2 == n).collect();
        let eig = hermitian_eigen(&s2.select(&idx, &idx), 1e-12).unwrap();
        assert_eq!(eig.values.iter().filter(|v| v.abs() < 1e-9).count(), catalan, "n={n}");
    }
    assert!(enumerate_paths(3, HalfInt::ZERO).is_empty());
    assert_eq!(enumerate_paths(3, h(3)).len(), 1);
}

#[test]
fn path_vectors_are_nested_eigenvectors() {
    for (n, total) in [(8usize, 0), (5, 1), (6, 2)] {
        let basis = SpinPathBasis::new(n, h(total), h(total)).unwrap();
        for (path, v) in basis.paths.iter().zip(&basis.vectors) {
            let cv: Vec<C64> = v.iter().map(|x| C64::new(*x, 0.0)).collect();
            for k in 1..=n {
                let s2 = total_spin_squared(n, &(0..k).collect::<Vec<_>>()).unwrap();
                let expect = h(path.twice()[k - 1] as i32).casimir();
                let w = s2.apply(&cv);
                let defect = w.iter().zip(&cv).map(|(a, b)| (a - b * expect).norm()).fold(0.0, f64::max);
                assert!(defect < 1e-11, "{path} k={k}");
            }
        }
        for (i, a) in basis.vectors.iter().enumerate() {
            for (j, b) in basis.vectors.iter().enumerate() {
                let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn exchange_representations_are_real_symmetric_involutions() {
    let basis = SpinPathBasis::eight_spin_singlets();
    let id = ComplexMatrix::identity(14);
    for i in 0..8 {
        for j in i + 1..8 {
            let e = basis.exchange(i, j).unwrap();
            assert!(e.max_imag() < 1e-12);
            assert!(e.max_abs_diff(&e.transpose()) < 1e-12);
            assert!((&e * &e).max_abs_diff(&id) < 1e-12);
            assert!(basis.leakage(&exchange(8, i, j).unwrap()) < 1e-12);
        }
    }
    let e_ab = basis.exchange(0, 1).unwrap().select(&[0, 1, 2, 3], &[0, 1, 2, 3]);
    let target = ComplexMatrix::from_real(4, 4, &[-1., 0., 0., 0., 0., -1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.]);
    assert!(e_ab.max_abs_diff(&target) < 1e-12);
}

#[test]
fn code_states_match_written_expansions() {
    let code = CodeStates::new();
    let r2 = 1.0 / 2f64.sqrt();
    // |0L> = |s>_AB |s>_CD with |s> = (|01> - |10>)/sqrt2.
    let mut zero = [0.0; 16];
    for (a, sa) in [(0b01, r2), (0b10, -r2)] {
        for (c, sc) in [(0b01, r2), (0b10, -r2)] {
            zero[(a << 2) | c] += sa * sc;
        }
    }
    let d0: f64 = zero.iter().zip(&code.zero_l).map(|(x, y)| x * y).sum();
    assert!((d0.abs() - 1.0).abs() < 1e-12);
    // |1L> = (|t+ t-> + |t- t+> - |t0 t0>) / sqrt3.
    let r3 = 1.0 / 3f64.sqrt();
    let mut one = [0.0; 16];
    one[0b0011] += r3;
    one[0b1100] += r3;
    for a in [0b01, 0b10] {
        for c in [0b01, 0b10] {
            one[(a << 2) | c] -= r3 * 0.5;
        }
    }
    let d1: f64 = one.iter().zip(&code.one_l).map(|(x, y)| x * y).sum();
    assert!((d1.abs() - 1.0).abs() < 1e-12);
}

fn pauli(x: f64, z: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[z, x, x, -z])
}

#[test]
fn encoded_pauli_table_and_four_body_immunity() {
    let e = |i, j| exchange(4, i, j).unwrap();
    let s = 3f64.sqrt() / 2.0;
    let cases = [(e(0, 1), pauli(0.0, -1.0)), (e(0, 2), pauli(s, 0.5)), (e(0, 3), pauli(-s, 0.5))];
    for (op, target) in cases {
        assert!(encoded_operator_check(&op).unwrap().max_abs_diff(&target) < 1e-12);
    }
    let id = ComplexMatrix::identity(2);
    for (a, b) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
        let prod = &e(a.0, a.1) * &e(b.0, b.1);
        assert!(encoded_operator_check(&prod).unwrap().max_abs_diff(&id) < 1e-12);
    }
    let x = (&e(0, 2) - &e(0, 3)).scale_real(1.0 / 3f64.sqrt());
    assert!(encoded_operator_check(&x).unwrap().max_abs_diff(&pauli(1.0, 0.0)) < 1e-12);
    let leaky = qdspin_core::spin_algebra::embed_pauli(4, 0, qdspin_core::spin_algebra::Pauli::X).unwrap();
    assert!(encoded_operator_check(&leaky).is_err());
}

#[test]
fn half_coupling_rules() {
    let c = couple_half(h(1), h(1), Spin::Down).unwrap();
    assert!(c.iter().any(|(j, v)| j.twice() == 0 && (v.abs() - 1.0 / 2f64.sqrt()).abs() < 1e-15));
    assert!(couple_half(h(1), h(3), Spin::Up).is_err());
}
