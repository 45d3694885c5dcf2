use qdspin_core::heitler_london::*;

fn params(x_b: f64, x_v: f64) -> DimensionlessParams {
    DimensionlessParams::new(x_b, x_v, 1.5).unwrap()
}

fn model(kind: GeometryKind, pot: PotentialKind, x_b: f64, x_v: f64) -> NaturalModel {
    reduce_to_natural_units(params(x_b, x_v), kind, pot).unwrap()
}

fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm, independent of the library enumeration.
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut sign = 1.0;
    let mut out = vec![(a.clone(), sign)];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `<Psi(s)|O|Psi(s')>` as the full double sum over permutations of both sides.
fn double_sum(m: &NaturalModel, centers: &[Point], s: &[u8], sp: &[u8], hamiltonian: bool) -> f64 {
    let n = centers.len();
    let ov = |a: usize, b: usize| overlap(centers[a], centers[b]);
    let h = |a: usize, b: usize| one_body_element(&m.potential, centers[a], centers[b]).unwrap();
    let w = |a: usize, b: usize, c: usize, d: usize| coulomb_element(m.coulomb, centers[a], centers[b], centers[c], centers[d]);
    let perms = permutations_with_sign(n);
    let mut total = 0.0;
    for (p, sp_sign) in &perms {
        for (q, sq_sign) in &perms {
            if (0..n).any(|i| s[p[i]] != sp[q[i]]) {
                continue;
            }
            let others = |skip: &[usize]| (0..n).filter(|j| !skip.contains(j)).map(|j| ov(p[j], q[j])).product::<f64>();
            let spatial = if hamiltonian {
                let mut v = 0.0;
                for i in 0..n {
                    v += h(p[i], q[i]) * others(&[i]);
                    for j in i + 1..n {
                        v += w(p[i], q[i], p[j], q[j]) * others(&[i, j]);
                    }
                }
                v
            } else {
                others(&[])
            };
            total += sp_sign * sq_sign * spatial;
        }
    }
    total
}

fn configs(n: usize) -> Vec<Vec<u8>> {
    (0..1usize << n).map(|i| spins_of(i, n)).collect()
}

#[test]
fn single_sum_matches_double_sum_for_three_electrons() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let orb = optimize_orbital_centers(&m).unwrap();
    let ints = Integrals::new(&m, &orb.centers).unwrap();
    for s in configs(3) {
        for sp in configs(3) {
            for (op, ham) in [(Operator::Identity, false), (Operator::Hamiltonian, true)] {
                let fast = antisym_matrix_element(&ints, &s, &sp, op).unwrap();
                let slow = double_sum(&m, &orb.centers, &s, &sp, ham);
                assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0), "{s:?} {sp:?} {op:?}: {fast} vs {slow}");
            }
        }
    }
}

#[test]
fn antisym_mismatched_sz_is_exact_zero_and_bad_input_rejected() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let ints = Integrals::new(&m, &m.geometry.centers).unwrap();
    assert_eq!(antisym_matrix_element(&ints, &[0, 0, 0], &[0, 0, 1], Operator::Hamiltonian).unwrap(), 0.0);
    assert!(antisym_matrix_element(&ints, &[0, 0], &[0, 0], Operator::Identity).is_err());
    assert!(antisym_matrix_element(&ints, &[0, 2, 0], &[0, 0, 2], Operator::Identity).is_err());
}

#[test]
fn explicit_three_spin_expansions() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let orb = optimize_orbital_centers(&m).unwrap();
    let ints = Integrals::new(&m, &orb.centers).unwrap();
    let (uuu, uud, udu, duu) = ([0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]);
    let el = |a: &[u8], b: &[u8], op| antisym_matrix_element(&ints, a, b, op).unwrap();
    let quartet = el(&uuu, &uuu, Operator::Hamiltonian) / el(&uuu, &uuu, Operator::Identity);
    let e = sector_energy(&ints, Sector::Linear3 { two_st: 3, two_sac: 2 }).unwrap();
    assert!((e - quartet).abs() <= 1e-12 * quartet.abs());

    let combo = |op| el(&uud, &uud, op) + 2.0 * el(&udu, &udu, op) - 4.0 * el(&uud, &udu, op) + el(&uud, &duu, op);
    let doublet = combo(Operator::Hamiltonian) / combo(Operator::Identity);
    let e = sector_energy(&ints, Sector::Linear3 { two_st: 1, two_sac: 2 }).unwrap();
    assert!((e - doublet).abs() <= 1e-12 * doublet.abs());
}

#[test]
fn three_spin_states_are_orthogonal_across_sectors() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let orb = optimize_orbital_centers(&m).unwrap();
    let ints = Integrals::new(&m, &orb.centers).unwrap();
    // M = 1/2 members of the three multiplets, over (uud, udu, duu).
    let r3 = 1.0 / 3f64.sqrt();
    let r6 = 1.0 / 6f64.sqrt();
    let r2 = 1.0 / 2f64.sqrt();
    let states = [[r3, r3, r3], [-r6, 2.0 * r6, -r6], [r2, 0.0, -r2]];
    let cfg = [[0u8, 0, 1], [0, 1, 0], [1, 0, 0]];
    let gram = |a: &[f64; 3], b: &[f64; 3]| {
        let mut g = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                g += a[i] * b[j] * antisym_matrix_element(&ints, &cfg[i], &cfg[j], Operator::Identity).unwrap();
            }
        }
        g
    };
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                assert!(gram(&states[i], &states[j]).abs() < 1e-10, "{i} {j}");
            }
        }
    }
}

#[test]
fn design_rows_for_three_spins() {
    let rows: Vec<Vec<f64>> = LINEAR3_SECTORS.iter().map(|s| s.design_row()).collect();
    assert_eq!(rows, vec![vec![1.0, 3.75, 2.0], vec![1.0, 0.75, 2.0], vec![1.0, 0.75, 0.0]]);
}

#[test]
fn invalid_sectors_are_domain_errors() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let ints = Integrals::new(&m, &m.geometry.centers).unwrap();
    assert!(sector_energy(&ints, Sector::Linear3 { two_st: 3, two_sac: 0 }).is_err());
    assert!(sector_energy(&ints, Sector::Square4 { s_ac: 0, s_bd: 0, s_t: 0 }).is_err());
}

#[test]
fn decoupled_dots_have_spin_independent_energies() {
    let m = model(GeometryKind::Square4, PotentialKind::Gaussian, 60.0, 3.0);
    let ints = Integrals::new(&m, &m.geometry.centers).unwrap();
    let e: Vec<f64> = SQUARE4_SECTORS.iter().map(|s| sector_energy(&ints, *s).unwrap()).collect();
    for x in &e {
        assert!((x - e[0]).abs() < 1e-9 * e[0].abs(), "{e:?}");
    }
}

fn assert_same(a: &CouplingCoefficients, b: &CouplingCoefficients) {
    let pairs = [
        (a.k0, b.k0),
        (a.k2_ab, b.k2_ab),
        (a.k2_ac, b.k2_ac),
        (a.k4_abcd.unwrap_or(0.0), b.k4_abcd.unwrap_or(0.0)),
        (a.k4_acbd.unwrap_or(0.0), b.k4_acbd.unwrap_or(0.0)),
    ];
    let scale = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    for (x, y) in pairs {
        assert!((x - y).abs() <= 1e-10 * scale, "{a:?} vs {b:?}");
    }
}

#[test]
fn couplings_are_invariant_under_geometry_symmetries() {
    for (x_b, x_v) in [(3.0, 3.0), (2.0, 4.0)] {
        let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, x_b, x_v);
        let c = optimize_orbital_centers(&m).unwrap().centers;
        let (_, _, base) = couplings_from_centers(&m, &c).unwrap();
        let (_, _, refl) = couplings_from_centers(&m, &[c[2], c[1], c[0]]).unwrap();
        assert_same(&base, &refl);

        let m = model(GeometryKind::Square4, PotentialKind::Gaussian, x_b, x_v);
        let c = optimize_orbital_centers(&m).unwrap().centers;
        let (_, _, base) = couplings_from_centers(&m, &c).unwrap();
        let dihedral: [[usize; 4]; 7] =
            [[1, 2, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2], [0, 3, 2, 1], [1, 0, 3, 2], [2, 1, 0, 3], [3, 2, 1, 0]];
        for g in dihedral {
            let moved: Vec<Point> = g.iter().map(|&i| c[i]).collect();
            let (_, _, k) = couplings_from_centers(&m, &moved).unwrap();
            assert_same(&base, &k);
        }
    }
}

#[test]
fn relaxed_center_beats_nominal_on_a_fine_scan() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let orb = optimize_orbital_centers(&m).unwrap();
    let l = m.geometry.l;
    let energy = |d: f64| {
        let a = [-2.0 * l + d, 0.0, 0.0];
        one_body_element(&m.potential, a, a).unwrap()
    };
    let best = (0..=2000).map(|k| l * k as f64 / 2000.0).fold((0.0, f64::INFINITY), |b, d| if energy(d) < b.1 { (d, energy(d)) } else { b });
    assert!(orb.delta > 0.0 && !orb.boundary_flag);
    assert!((orb.delta - best.0).abs() <= l / 2000.0);
    assert!(energy(orb.delta) < energy(0.0));
}

#[test]
fn isolated_wells_barely_move() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 0.05);
    let orb = optimize_orbital_centers(&m).unwrap();
    assert!(orb.delta < 1e-3 * m.geometry.l, "{}", orb.delta);
}

#[test]
fn square_fit_is_consistent() {
    let a = analyze(params(3.0, 3.0), GeometryKind::Square4, PotentialKind::Gaussian).unwrap();
    assert_eq!(a.energies.len(), 6);
    assert!(a.fit.relative_residual < 1e-8, "{}", a.fit.relative_residual);
}

#[test]
fn quadratic_line_pair_coupling_is_positive_and_falls_with_barrier() {
    let mut last = f64::INFINITY;
    for x_b in [2.0, 2.5, 3.0, 3.5, 4.0] {
        let k = compute_couplings(params(x_b, 3.0), GeometryKind::Linear3, PotentialKind::Quadratic).unwrap();
        assert!(k.k0.is_finite() && k.k2_ab.is_finite() && k.k2_ac.is_finite());
        assert!(k.k2_ab > 0.0 && k.k2_ab < last, "x_b={x_b}: {k:?}");
        last = k.k2_ab;
    }
}

#[test]
fn sweep_shape_and_failures_in_row() {
    let xb = GridAxis::new(2.0, 3.0, 2).unwrap();
    let xv = GridAxis::new(2.0, 3.0, 2).unwrap();
    let rows = sweep(&xb, &xv, 1.5, GeometryKind::Linear3, PotentialKind::Gaussian);
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[1].x_b, rows[1].x_v), (2.0, 3.0));
    assert!(rows.iter().all(|r| r.result.is_ok()));
    let bad = sweep(&GridAxis::new(-1.0, 1.0, 2).unwrap(), &xv, 1.5, GeometryKind::Linear3, PotentialKind::Gaussian);
    assert_eq!(bad.len(), 4);
    assert!(bad[0].result.is_err() && bad[2].result.is_ok());
}

#[test]
fn mc_oracle_matches_closed_forms_at_one_point() {
    let m = model(GeometryKind::Linear3, PotentialKind::Gaussian, 3.0, 3.0);
    let [a, b, c] = [m.geometry.centers[0], m.geometry.centers[1], m.geometry.centers[2]];
    let n = 200_000;
    let checks = [
        (McIntegrand::Overlap { a, b }, overlap(a, b)),
        (McIntegrand::Kinetic { a, b }, kinetic(a, b)),
        (McIntegrand::Potential { a, b: a }, potential_element(&m.potential, a, a).unwrap()),
        (McIntegrand::OneBody { a, b: c }, one_body_element(&m.potential, a, c).unwrap()),
        (McIntegrand::Coulomb { a, b: a, c: a, d: a }, coulomb_element(m.coulomb, a, a, a, a)),
        (McIntegrand::Coulomb { a, b, c: b, d: c }, coulomb_element(m.coulomb, a, b, b, c)),
    ];
    for (i, (integrand, exact)) in checks.iter().enumerate() {
        let est = mc_integral(&m, integrand, n, 100 + i as u64).unwrap();
        assert!(est.agrees_with(*exact, 3.0), "{integrand:?}: {est:?} vs {exact}");
    }
    let d = (coulomb_element(m.coulomb, a, a, a, a) - m.coulomb * (2.0 / std::f64::consts::PI).sqrt()).abs();
    assert!(d < 1e-14);
}
