use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdspin_core::cg_basis::HalfInt;
use qdspin_core::encoded_gates::{FourBodyCouplings, GateId};
use qdspin_core::heitler_london::{DimensionlessParams, GeometryKind, GridAxis, PotentialKind};

#[derive(Debug, Parser)]
#[command(name = "qdspin", version, about = "Quantum-dot exchange coefficients and encoded exchange-only gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for Monte-Carlo checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coupling coefficients over an (x_b, x_v) grid.
    Sweep(SweepArgs),
    /// Coupling coefficients and diagnostic ratios at one point.
    Coeffs(CoeffsArgs),
    /// Assemble the primed controlled-phase sequence and grade it.
    VerifyCp(VerifyArgs),
    /// Solve one of the gate tuning conditions.
    #[command(subcommand)]
    Tune(TuneCommand),
    /// Dump a total-spin path basis.
    Basis(BasisArgs),
    /// Check the coefficient constraints attached to a gate.
    CheckConstraints(ConstraintArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_parser = parse_geometry, default_value = "linear3")]
    pub geometry: GeometryKind,
    #[arg(long, value_parser = parse_potential, default_value = "gaussian")]
    pub potential: PotentialKind,
    /// Coulomb parameter x_c.
    #[arg(long, default_value_t = DimensionlessParams::DEFAULT_X_C, allow_negative_numbers = true)]
    pub xc: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Barrier grid `min:max:steps` (inclusive).
    #[arg(long, value_parser = parse_grid, allow_negative_numbers = true)]
    pub xb: GridAxis,
    /// Well-depth grid `min:max:steps` (inclusive).
    #[arg(long, value_parser = parse_grid, allow_negative_numbers = true)]
    pub xv: GridAxis,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub xb: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub xv: f64,
    /// Also estimate every sector energy by Monte Carlo with this many samples.
    #[arg(long)]
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CouplingArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j1a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j1b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j1c: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j1d: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j2p: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j2pp: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j3p: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j3pp: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub j5p: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub jb: f64,
}

impl CouplingArgs {
    pub fn couplings(&self) -> FourBodyCouplings {
        FourBodyCouplings {
            j1a: self.j1a,
            j1b: self.j1b,
            j1c: self.j1c,
            j1d: self.j1d,
            j2p: self.j2p,
            j2pp: self.j2pp,
            j3p: self.j3p,
            j3pp: self.j3pp,
            j5p: self.j5p,
            jb: self.jb,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    /// Solve the tunable conditions: J2pp and J3pp from eta = 0 given J2p and
    /// J3p, J5p from Lambda = 2, and (J1a, J1b, J1d) from chi_+ = 0 at `--ratio`.
    #[arg(long)]
    pub tune: bool,
    /// J1b / J1d used with `--tune`.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixed {
    Prime,
    DoublePrime,
}

#[derive(Debug, Subcommand)]
pub enum TuneCommand {
    /// J5p with Lambda(J5p) = 2n.
    Lambda {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value = "plus")]
        branch: Branch,
    },
    /// The free U2'/U3' constant that makes eta vanish.
    Eta {
        #[arg(long, value_parser = parse_gate)]
        gate: GateId,
        /// Which constant is held fixed.
        #[arg(long, value_enum, default_value = "prime")]
        fixed: Fixed,
        #[arg(long, allow_negative_numbers = true)]
        value: f64,
    },
    /// (J1a, J1b, J1d) with J1b / J1d = ratio and chi_+ = 0.
    Chi {
        #[arg(long, allow_negative_numbers = true)]
        ratio: f64,
    },
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Number of spins (1..=8).
    #[arg(long, default_value_t = 8)]
    pub sites: usize,
    /// Total spin, e.g. `0`, `1`, `3/2` or `1.5`.
    #[arg(long, value_parser = parse_half, default_value = "0")]
    pub total: HalfInt,
    /// S_z of the realization; defaults to the total spin.
    #[arg(long, value_parser = parse_half, allow_negative_numbers = true)]
    pub sz: Option<HalfInt>,
}

#[derive(Debug, Args)]
pub struct ConstraintArgs {
    #[arg(long, value_parser = parse_gate)]
    pub gate: GateId,
    /// Comma-separated `KEY=VALUE` list, e.g. `FG=1,GH=0.5,FH=0`.
    #[arg(long, conflicts_with = "input", allow_negative_numbers = true)]
    pub values: Option<String>,
    /// JSON file holding an object of `KEY: VALUE` pairs.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

fn parse_geometry(s: &str) -> Result<GeometryKind, String> {
    GeometryKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_potential(s: &str) -> Result<PotentialKind, String> {
    PotentialKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_gate(s: &str) -> Result<GateId, String> {
    GateId::from_str(s).map_err(|e| e.to_string())
}

pub fn parse_grid(s: &str) -> Result<GridAxis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number {p:?} in grid {s:?}"));
    match parts.as_slice() {
        [v] => GridAxis::new(num(v)?, num(v)?, 1).map_err(|e| e.to_string()),
        [lo, hi, steps] => {
            let steps = steps.trim().parse::<usize>().map_err(|_| format!("bad step count in grid {s:?}"))?;
            GridAxis::new(num(lo)?, num(hi)?, steps).map_err(|e| e.to_string())
        }
        _ => Err(format!("grid {s:?} must be `min:max:steps` or a single value")),
    }
}

pub fn parse_half(s: &str) -> Result<HalfInt, String> {
    let bad = || format!("{s:?} is not a multiple of 1/2");
    if let Some((n, d)) = s.split_once('/') {
        let n: i32 = n.trim().parse().map_err(|_| bad())?;
        return match d.trim() {
            "1" => Ok(HalfInt::from_twice(2 * n)),
            "2" => Ok(HalfInt::from_twice(n)),
            _ => Err(bad()),
        };
    }
    let x: f64 = s.trim().parse().map_err(|_| bad())?;
    HalfInt::from_f64(x).ok_or_else(bad)
}
