use qdspin_core::encoded_gates::*;
use qdspin_core::spin_algebra::phase_insensitive_distance;
use qdspin_core::ComplexMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMED: [GateId; 6] = [GateId::UA, GateId::UB, GateId::U1, GateId::U2, GateId::U3, GateId::U5];

fn random_couplings(rng: &mut ChaCha8Rng) -> FourBodyCouplings {
    let mut a = [0.0; 10];
    for x in &mut a {
        *x = rng.random_range(-2.0..2.0);
    }
    FourBodyCouplings::from_array(a)
}

#[test]
fn closed_forms_match_the_exponential_on_random_draws() {
    let table = ExchangeTable::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for id in PRIMED {
        for _ in 0..100 {
            let j = random_couplings(&mut rng);
            let numeric = table.gate(id, &j).unwrap();
            let closed = closed_form_gate(id, &j).unwrap();
            let (dev, _) = phase_insensitive_distance(&closed, &numeric);
            assert!(dev < 1e-9, "{id} {j:?}: {dev:e}");
        }
    }
}

#[test]
fn gates_are_unitary_and_generators_hermitian() {
    let table = ExchangeTable::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let j = random_couplings(&mut rng);
        for id in PRIMED {
            assert!(table.generator(id, &j).unwrap().hermiticity_defect() < 1e-13);
            assert!(table.gate(id, &j).unwrap().unitarity_defect() < 1e-11, "{id}");
        }
        assert!(table.gate(GateId::U6, &j).unwrap().unitarity_defect() < 1e-11);
    }
}

#[test]
fn generator_limits() {
    let table = ExchangeTable::new();
    let z = FourBodyCouplings::zero();
    let pairs = ["AB", "AC", "AD", "BC", "BD", "CD"];
    let mut sum = ComplexMatrix::zeros(DIM, DIM);
    for p in pairs {
        sum = &sum + table.e(p);
    }
    assert!(table.generator(GateId::UB, &z).unwrap().max_abs_diff(&sum) < 1e-14);
    let u5 = table.e("FG") + &table.e("GH").scale_real(0.5);
    assert!(table.generator(GateId::U5, &z).unwrap().max_abs_diff(&u5) < 1e-14);
    assert!(table.generator(GateId::U6, &z).is_err());
    assert!("U7".parse::<GateId>().is_err());
}

#[test]
fn bacon_limits_are_recovered() {
    let z = FourBodyCouplings::zero();
    for (id, reference) in [(GateId::U1, bacon_u1()), (GateId::U5, bacon_u5()), (GateId::UB, bacon_ub())] {
        let (dev, _) = phase_insensitive_distance(&gate(id, &z).unwrap(), &reference);
        assert!(dev < 1e-10, "{id}: {dev:e}");
    }
    let r = assemble_cp(&z).unwrap();
    assert!(r.pass && r.deviation < 1e-9, "{:?}", r.deviation);
}

#[test]
fn ua_matches_printed_entries() {
    let u = gate(GateId::UA, &FourBodyCouplings::zero()).unwrap();
    let alpha = qdspin_core::C64::new(2f64.sqrt(), -1.0) / 6f64.sqrt();
    assert!((u[(0, 0)] - alpha).norm() < 1e-12);
    assert!((u[(4, 4)] - alpha.conj()).norm() < 1e-12);
    assert!((u[(0, 4)] - qdspin_core::C64::new(0.0, -1.0 / 2f64.sqrt())).norm() < 1e-12);
    assert!((u[(10, 11)] - qdspin_core::C64::new(0.0, -0.5 * 2.5f64.sqrt())).norm() < 1e-12);
}

fn tuned() -> FourBodyCouplings {
    let (j1a, j1b, j1d) = tune_chi_plus_zero(2.0).unwrap();
    FourBodyCouplings {
        j1a,
        j1b,
        j1c: 0.37,
        j1d,
        j2p: 0.5,
        j2pp: 0.5,
        j3p: 0.5,
        j3pp: 0.5,
        j5p: tune_lambda_even(1, LambdaBranch::Plus).unwrap(),
        jb: 1.0,
    }
}

#[test]
fn tuned_constants_give_a_controlled_phase() {
    let r = assemble_cp(&tuned()).unwrap();
    assert!(r.pass, "deviation {:e} leakage {:e}", r.deviation, r.leakage);
    assert!(r.conditions.iter().all(|c| c.satisfied), "{:?}", r.conditions);
    assert!(r.unitary.unitarity_defect() < 1e-11);
}

#[test]
fn detuned_constants_fail() {
    let base = tuned();
    let names = FourBodyCouplings::NAMES;
    let mut fails = Vec::new();
    for k in 0..10 {
        if names[k] == "J1c" {
            continue;
        }
        let mut a = base.as_array();
        a[k] += 0.05;
        if !assemble_cp(&FourBodyCouplings::from_array(a)).unwrap().pass {
            fails.push(names[k]);
        }
    }
    // The only tolerated survivor is J5p: U6 commutes with U5' at integer J_B.
    assert!(fails.len() >= 8, "{fails:?}");
    let r = assemble_cp(&FourBodyCouplings { jb: 0.5, ..FourBodyCouplings::zero() }).unwrap();
    assert!(!r.pass && r.deviation > 1e-3);
}

#[test]
fn integer_jb_leaves_u6_unchanged() {
    let z = FourBodyCouplings::zero();
    let u6 = gate(GateId::U6, &z).unwrap();
    for jb in [1.0, 2.0, -1.0, 3.0] {
        let u = gate(GateId::U6, &FourBodyCouplings { jb, ..z }).unwrap();
        assert!(phase_insensitive_distance(&u, &u6).0 < 1e-10, "jb={jb}");
    }
}

#[test]
fn primed_gates_act_classically_when_tuned() {
    let all: Vec<usize> = (0..DIM).collect();
    let j = FourBodyCouplings { j2p: 0.3, j2pp: tune_eta_zero(GateId::U2, EtaFixed::Prime(0.3)).unwrap(), ..Default::default() };
    assert!(classicality_check(&gate(GateId::U2, &j).unwrap(), &all).classical);
    let u1 = gate(GateId::U1, &tuned()).unwrap();
    let first8: Vec<usize> = (0..8).collect();
    assert!(classicality_check(&u1, &first8).classical);
    let off = FourBodyCouplings { j2p: 0.3, j2pp: 0.9, ..Default::default() };
    assert!(!classicality_check(&gate(GateId::U2, &off).unwrap(), &all).classical);
}

#[test]
fn printed_forms_are_flagged_not_asserted() {
    let j = FourBodyCouplings { j5p: 0.0, ..Default::default() };
    let n = gate(GateId::U5, &j).unwrap();
    let rep = printed_form_report(GateId::U5, &j, Form::Printed, &n).unwrap();
    assert!(rep.iter().any(|e| !e.deviation.is_finite() || e.deviation > 1e-6));
    let rep = printed_form_report(GateId::U5, &j, Form::Corrected, &n).unwrap();
    assert!(rep.iter().all(|e| e.deviation < 1e-9));
}

#[test]
fn constraint_examples() {
    use std::collections::BTreeMap;
    let mut m: BTreeMap<String, f64> = BTreeMap::new();
    for k in ["AB", "AC", "AD", "BC", "BD", "CD", "DE"] {
        m.insert(k.into(), 0.2);
    }
    m.insert("DE".into(), 0.4);
    for k in [
        "ABCD", "ACBD", "ADBC", "ABCE", "ACBE", "AEBC", "ADBE", "AEBD", "ADCE", "AECD", "BDCE", "BECD", "ABDE", "ACDE", "BCDE",
    ] {
        m.insert(k.into(), 0.01);
    }
    let r = check_gate_constraints(&m, GateId::U1).unwrap();
    assert!(r.iter().find(|c| c.id == 'o').unwrap().satisfied);
    assert!(r.iter().all(|c| c.satisfied), "{r:?}");
    let err = check_gate_constraints(&BTreeMap::new(), GateId::U2).unwrap_err();
    assert!(matches!(err, qdspin_core::Error::MissingKeys(ref k) if k.len() == 7));
}
