//! Monte-Carlo estimates of the orbital integrals and sector energies.
//!
//! Every integrand carries a Gaussian product `phi_a phi_b`, so points are
//! drawn from `N(P, I/2)` with `P` the product center; the ratio to the
//! sampling density is then bounded. Each call owns its generator, seeded
//! from `seed`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::model::{dist2, midpoint, orbital, overlap, NaturalModel, Point};
use super::{permutations, spins_of, Sector};
use crate::error::{domain, invalid, Result};

/// Minimum accepted sample count.
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

impl McEstimate {
    /// `|estimate - exact| <= k * std_error` (plus a rounding floor).
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        (self.estimate - exact).abs() <= k * self.std_error + 1e-12 * exact.abs().max(1.0)
    }
}

/// Integral selected for [`mc_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum McIntegrand {
    /// `<phi_a|phi_b>`.
    Overlap { a: Point, b: Point },
    /// `<phi_a| -lap/2 |phi_b>`.
    Kinetic { a: Point, b: Point },
    /// `<phi_a| V |phi_b>`.
    Potential { a: Point, b: Point },
    /// `<phi_a| -lap/2 + V |phi_b>`.
    OneBody { a: Point, b: Point },
    /// `<phi_a(1) phi_c(2)| c / r12 |phi_b(1) phi_d(2)>`.
    Coulomb { a: Point, b: Point, c: Point, d: Point },
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(invalid(format!("at least {MIN_SAMPLES} samples are required, got {samples}")));
    }
    Ok(())
}

fn gaussian_point(rng: &mut ChaCha8Rng, center: Point) -> Point {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut p = center;
    for x in &mut p {
        let z: f64 = rng.sample(StandardNormal);
        *x += s * z;
    }
    p
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

fn mean_and_error(sum: Sum, sum_sq: Sum, n: usize) -> McEstimate {
    let n = n as f64;
    let mean = sum.value() / n;
    let var = f64::max(sum_sq.value() / n - mean * mean, 0.0) * n / (n - 1.0);
    McEstimate { estimate: mean, std_error: libm::sqrt(var / n) }
}

/// Importance-sampled estimate of one orbital integral.
pub fn mc_integral(model: &NaturalModel, integrand: &McIntegrand, samples: usize, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (Sum::default(), Sum::default());
    let mut push = |w: f64| {
        sum.add(w);
        sum_sq.add(w * w);
    };
    match *integrand {
        McIntegrand::Coulomb { a, b, c, d } => {
            let (p, q) = (midpoint(a, b), midpoint(c, d));
            let weight = overlap(a, b) * overlap(c, d) * model.coulomb;
            for _ in 0..samples {
                let r1 = gaussian_point(&mut rng, p);
                let r2 = gaussian_point(&mut rng, q);
                push(weight / libm::sqrt(dist2(r1, r2)));
            }
        }
        McIntegrand::Overlap { a, b }
        | McIntegrand::Kinetic { a, b }
        | McIntegrand::Potential { a, b }
        | McIntegrand::OneBody { a, b } => {
            let p = midpoint(a, b);
            let s = overlap(a, b);
            for _ in 0..samples {
                let r = gaussian_point(&mut rng, p);
                let kin = || -0.5 * (dist2(r, b) - 3.0);
                let f = match integrand {
                    McIntegrand::Overlap { .. } => 1.0,
                    McIntegrand::Kinetic { .. } => kin(),
                    McIntegrand::Potential { .. } => model.potential.value(r),
                    _ => kin() + model.potential.value(r),
                };
                push(s * f);
            }
        }
    }
    Ok(mean_and_error(sum, sum_sq, samples))
}

/// Estimate of a sector energy `<Psi|H|Psi>/<Psi|Psi>` by sampling the full
/// `3N`-dimensional integrand.
///
/// Electron coordinates are drawn from the equal-weight mixture over
/// permutations of `prod_k |phi_{pi(k)}(r_k)|^2`. The spin-resolved amplitude
/// is `Psi_sigma(R) = sum_P sgn(P) a[sigma o P] prod_k phi_k(r_P(k))`, and
/// `H` acts on each product term through its local energy. The result is a
/// ratio estimator with a delta-method standard error.
pub fn mc_sector_energy(model: &NaturalModel, centers: &[Point], sector: Sector, samples: usize, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let n = centers.len();
    if sector.geometry().n_dots() != n {
        return Err(domain(format!("sector {sector} does not match {n} orbitals")));
    }
    let amp = sector.state()?;
    let perms = permutations(n);
    let spins: Vec<Vec<u8>> = (0..1usize << n).map(|i| spins_of(i, n)).collect();
    let index_of = |s: &[u8]| s.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    // For each sigma and P, the coefficient a[sigma o P].
    let coeff: Vec<Vec<f64>> = spins
        .iter()
        .map(|sigma| {
            perms
                .iter()
                .map(|(p, sgn)| {
                    let s: Vec<u8> = (0..n).map(|k| sigma[p[k]]).collect();
                    sgn * amp[index_of(&s)]
                })
                .collect()
        })
        .collect();
    let live: Vec<usize> = (0..spins.len()).filter(|&i| coeff[i].iter().any(|c| *c != 0.0)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density_norm = libm::pow(core::f64::consts::PI, -1.5 * n as f64);
    let mut r = vec![[0.0; 3]; n];
    let mut phi = vec![0.0; n * n];
    let mut kin = vec![0.0; n * n];
    let (mut sn, mut sd, mut snn, mut sdd, mut snd) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..samples {
        let (pick, _) = &perms[rng.random_range(0..perms.len())];
        for k in 0..n {
            r[k] = gaussian_point(&mut rng, centers[pick[k]]);
        }
        // phi[k * n + i] = phi_k(r_i); kin likewise holds (-lap/2 phi_k)/phi_k at r_i.
        for k in 0..n {
            for i in 0..n {
                phi[k * n + i] = orbital(centers[k], r[i]);
                kin[k * n + i] = -0.5 * (dist2(r[i], centers[k]) - 3.0);
            }
        }
        let mut shared = 0.0;
        for i in 0..n {
            shared += model.potential.value(r[i]);
            for j in i + 1..n {
                shared += model.coulomb / libm::sqrt(dist2(r[i], r[j]));
            }
        }
        let q: f64 = perms
            .iter()
            .map(|(p, _)| (0..n).map(|k| libm::exp(-dist2(r[k], centers[p[k]]))).product::<f64>())
            .sum::<f64>()
            * density_norm
            / perms.len() as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for &si in &live {
            let (mut psi, mut hpsi) = (0.0, 0.0);
            for (pi, (p, _)) in perms.iter().enumerate() {
                let c = coeff[si][pi];
                if c == 0.0 {
                    continue;
                }
                let prod: f64 = (0..n).map(|k| phi[k * n + p[k]]).product();
                let local: f64 = shared + (0..n).map(|k| kin[k * n + p[k]]).sum::<f64>();
                psi += c * prod;
                hpsi += c * prod * local;
            }
            num += psi * hpsi;
            den += psi * psi;
        }
        let (x, y) = (num / q, den / q);
        sn += x;
        sd += y;
        snn += x * x;
        sdd += y * y;
        snd += x * y;
    }
    let m = samples as f64;
    let (mx, my) = (sn / m, sd / m);
    let vxx = snn / m - mx * mx;
    let vyy = sdd / m - my * my;
    let vxy = snd / m - mx * my;
    let ratio = mx / my;
    let var = (vxx - 2.0 * ratio * vxy + ratio * ratio * vyy) / (my * my);
    Ok(McEstimate { estimate: ratio, std_error: libm::sqrt(f64::max(var, 0.0) / m) })
}
