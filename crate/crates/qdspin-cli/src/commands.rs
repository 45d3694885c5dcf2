use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use csv::WriterBuilder;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use qdspin_core::cg_basis::{path_to_vector, SpinPathBasis};
use qdspin_core::encoded_gates::{
    assemble_cp, check_gate_constraints, tune_chi_plus_zero, tune_eta_zero, tune_lambda_even, EtaFixed, FourBodyCouplings, GateId,
    LambdaBranch,
};
use qdspin_core::heitler_london::{
    analyze, mc_sector_energy, optimize_orbital_centers, reduce_to_natural_units, sweep_points, sweep_row, CouplingCoefficients,
    DimensionlessParams, GeometryKind,
};
use qdspin_core::Error;

use crate::args::{BasisArgs, Branch, CoeffsArgs, ConstraintArgs, Fixed, Format, SweepArgs, TuneCommand, VerifyArgs};
use crate::output::{emit, fmt12, num, opt_num, pretty};

/// Failure classes, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Fail(String),
    #[error("{0}")]
    Tuner(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Fail(_) => 3,
            CliError::Tuner(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoRoot(_) => CliError::Tuner(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

fn write_out(out: Option<&Path>, text: &str) -> CliResult {
    emit(out, text).map_err(|e| match out {
        Some(p) => CliError::Io(format!("cannot write {}: {e}", p.display())),
        None => CliError::Io(format!("cannot write to stdout: {e}")),
    })
}

fn k_fields(k: &CouplingCoefficients) -> [Option<f64>; 5] {
    [Some(k.k0), Some(k.k2_ab), Some(k.k2_ac), k.k4_abcd, k.k4_acbd]
}

const K_NAMES: [&str; 5] = ["K0", "K2_AB", "K2_AC", "K4_ABCD", "K4_ACBD"];

pub fn sweep(args: &SweepArgs, format: Format, out: Option<&Path>) -> CliResult {
    let m = &args.model;
    // Rows are computed in parallel and collected back in grid order.
    let rows: Vec<_> = sweep_points(&args.xb, &args.xv)
        .into_par_iter()
        .map(|(b, v)| sweep_row(b, v, m.xc, m.geometry, m.potential))
        .collect();
    for r in &rows {
        if let Err(e) = &r.result {
            eprintln!("x_b={} x_v={}: {e}", r.x_b, r.x_v);
        }
    }
    let text = match format {
        Format::Csv => {
            let mut w = WriterBuilder::new().from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["x_b", "x_v", "x_c"].iter().chain(K_NAMES.iter())).map_err(io)?;
            for r in &rows {
                let mut rec = vec![fmt12(r.x_b), fmt12(r.x_v), fmt12(r.x_c)];
                let ks = r.result.as_ref().map(k_fields).unwrap_or([None; 5]);
                rec.extend(ks.iter().map(|k| k.map(fmt12).unwrap_or_default()));
                w.write_record(&rec).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).expect("csv output is utf-8")
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    o.insert("x_b".into(), num(r.x_b));
                    o.insert("x_v".into(), num(r.x_v));
                    o.insert("x_c".into(), num(r.x_c));
                    let ks = r.result.as_ref().map(k_fields).unwrap_or([None; 5]);
                    for (name, k) in K_NAMES.iter().zip(ks) {
                        o.insert((*name).into(), opt_num(k));
                    }
                    if let Err(e) = &r.result {
                        o.insert("error".into(), Value::String(e.to_string()));
                    }
                    Value::Object(o)
                })
                .collect();
            pretty(&Value::Array(list))
        }
    };
    write_out(out, &text)
}

fn ratio(a: Option<f64>, b: f64) -> Value {
    opt_num(a.map(|a| a / b))
}

pub fn coeffs(args: &CoeffsArgs, seed: u64, out: Option<&Path>) -> CliResult {
    let m = &args.model;
    let p = DimensionlessParams::new(args.xb, args.xv, m.xc)?;
    let a = analyze(p, m.geometry, m.potential)?;
    let k = &a.coefficients;
    let mut o = Map::new();
    o.insert("geometry".into(), json!(m.geometry.name()));
    o.insert("potential".into(), json!(m.potential.name()));
    o.insert("x_b".into(), num(args.xb));
    o.insert("x_v".into(), num(args.xv));
    o.insert("x_c".into(), num(m.xc));
    for (name, v) in K_NAMES.iter().zip(k_fields(k)) {
        if let Some(v) = v {
            o.insert((*name).into(), num(v));
        }
    }
    let mut ratios = Map::new();
    ratios.insert("K2_AC/K2_AB".into(), num(k.ratio_ac_ab()));
    if m.geometry == GeometryKind::Square4 {
        ratios.insert("K4_ABCD/K2_AB".into(), ratio(k.k4_abcd, k.k2_ab));
        ratios.insert("K4_ACBD/K2_AC".into(), ratio(k.k4_acbd, k.k2_ac));
    }
    o.insert("ratios".into(), Value::Object(ratios));
    let l = a.fit.l;
    let sectors: Vec<Value> = a.sectors.iter().zip(&a.energies).map(|(s, e)| json!({"sector": s.to_string(), "energy": num(*e)})).collect();
    let mut diag = json!({
        "orbital_shift": num(a.orbitals.delta),
        "orbital_shift_at_boundary": a.orbitals.boundary_flag,
        "sectors": sectors,
        "L": {"L0": num(l.l0), "L1": num(l.l1), "L1p": num(l.l1p), "L2": num(l.l2), "L2p": num(l.l2p)},
        "fit_relative_residual": num(a.fit.relative_residual),
    });
    if let Some(n) = args.mc_samples {
        let model = reduce_to_natural_units(p, m.geometry, m.potential)?;
        let centers = optimize_orbital_centers(&model)?.centers;
        let mut list = Vec::new();
        for (i, s) in a.sectors.iter().enumerate() {
            let e = mc_sector_energy(&model, &centers, *s, n, seed.wrapping_add(i as u64))?;
            list.push(json!({"sector": s.to_string(), "estimate": num(e.estimate), "std_error": num(e.std_error)}));
        }
        diag["monte_carlo"] = Value::Array(list);
    }
    o.insert("diagnostics".into(), diag);
    write_out(out, &pretty(&Value::Object(o)))
}

fn couplings_json(j: &FourBodyCouplings) -> Value {
    let mut o = Map::new();
    for (name, v) in FourBodyCouplings::NAMES.iter().zip(j.as_array()) {
        o.insert((*name).into(), num(v));
    }
    Value::Object(o)
}

fn tune_couplings(base: FourBodyCouplings, ratio: f64) -> Result<FourBodyCouplings, CliError> {
    let (j1a, j1b, j1d) = tune_chi_plus_zero(ratio)?;
    Ok(FourBodyCouplings {
        j1a,
        j1b,
        j1d,
        j2pp: tune_eta_zero(GateId::U2, EtaFixed::Prime(base.j2p))?,
        j3pp: tune_eta_zero(GateId::U3, EtaFixed::Prime(base.j3p))?,
        j5p: tune_lambda_even(1, LambdaBranch::Plus)?,
        ..base
    })
}

pub fn verify_cp(args: &VerifyArgs, out: Option<&Path>) -> CliResult {
    let mut j = args.couplings.couplings();
    if args.tune {
        j = tune_couplings(j, args.ratio)?;
    }
    let r = assemble_cp(&j)?;
    let block: Vec<Value> = (0..4).map(|row| Value::Array((0..4).map(|c| json!([num(r.code_block[(row, c)].re), num(r.code_block[(row, c)].im)])).collect())).collect();
    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| json!({"id": c.id, "description": c.description, "satisfied": c.satisfied, "residual": num(c.residual)}))
        .collect();
    let report = json!({
        "couplings": couplings_json(&j),
        "conditions": conditions,
        "code_block": block,
        "deviation": num(r.deviation),
        "leakage": num(r.leakage),
        "verdict": if r.pass { "PASS" } else { "FAIL" },
    });
    write_out(out, &pretty(&report))?;
    if r.pass {
        Ok(())
    } else {
        Err(CliError::Fail(format!("controlled phase FAIL: deviation {:.3e}, leakage {:.3e}", r.deviation, r.leakage)))
    }
}

pub fn tune(cmd: &TuneCommand, out: Option<&Path>) -> CliResult {
    let v = match *cmd {
        TuneCommand::Lambda { n, branch } => {
            let b = match branch {
                Branch::Plus => LambdaBranch::Plus,
                Branch::Minus => LambdaBranch::Minus,
            };
            json!({"J5p": num(tune_lambda_even(n, b)?), "n": n})
        }
        TuneCommand::Eta { gate, fixed, value } => {
            let f = match fixed {
                Fixed::Prime => EtaFixed::Prime(value),
                Fixed::DoublePrime => EtaFixed::DoublePrime(value),
            };
            let root = tune_eta_zero(gate, f)?;
            let (jp, jpp) = match fixed {
                Fixed::Prime => (value, root),
                Fixed::DoublePrime => (root, value),
            };
            json!({"gate": gate.name(), "Jp": num(jp), "Jpp": num(jpp), "eta_abs": num(qdspin_core::encoded_gates::eta(jp, jpp).norm())})
        }
        TuneCommand::Chi { ratio } => {
            let (a, b, d) = tune_chi_plus_zero(ratio)?;
            json!({"J1a": num(a), "J1b": num(b), "J1d": num(d), "chi_plus_abs": num(qdspin_core::encoded_gates::chi_plus(a, b, d).norm())})
        }
    };
    write_out(out, &pretty(&v))
}

pub fn basis(args: &BasisArgs, out: Option<&Path>) -> CliResult {
    if args.sites == 0 || args.sites > 8 {
        return Err(CliError::Usage(format!("--sites must be between 1 and 8, got {}", args.sites)));
    }
    let sz = args.sz.unwrap_or(args.total);
    let b = SpinPathBasis::new(args.sites, args.total, sz)?;
    let entries: Vec<Value> = b
        .paths
        .iter()
        .map(|p| {
            let v = path_to_vector(p, sz).expect("basis paths are valid");
            json!({
                "path": p.twice(),
                "vector": v.iter().map(|x| json!([num(*x), 0.0])).collect::<Vec<_>>(),
            })
        })
        .collect();
    write_out(out, &pretty(&Value::Array(entries)))
}

fn parse_assignment(args: &ConstraintArgs) -> Result<BTreeMap<String, f64>, CliError> {
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: expected a JSON object of numbers ({e})", path.display())));
    }
    let Some(values) = &args.values else {
        return Err(CliError::Usage("provide --values or --input".into()));
    };
    values
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (k, v) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("{item:?} is not KEY=VALUE")))?;
            let v: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("bad value in {item:?}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub fn check_constraints(args: &ConstraintArgs, out: Option<&Path>) -> CliResult {
    let assignment = parse_assignment(args)?;
    let results = check_gate_constraints(&assignment, args.gate)?;
    let all = results.iter().all(|r| r.satisfied);
    let list: Vec<Value> = results
        .iter()
        .map(|r| json!({"id": r.id.to_string(), "satisfied": r.satisfied, "residual": num(r.residual), "detail": r.detail}))
        .collect();
    let v = json!({"gate": args.gate.name(), "constraints": list, "verdict": if all { "PASS" } else { "FAIL" }});
    write_out(out, &pretty(&v))?;
    if all {
        Ok(())
    } else {
        let bad: Vec<String> = results.iter().filter(|r| !r.satisfied).map(|r| r.id.to_string()).collect();
        Err(CliError::Fail(format!("violated constraints: {}", bad.join(", "))))
    }
}
