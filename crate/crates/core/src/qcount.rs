//! Quantum counting of primes, simulated exactly in the Grover plane.
//!
//! The uniform state splits evenly over the eigenvectors of `G` with
//! eigenvalues `e^{±iθ}`. Phase estimation with a `t`-bit register
//! (`T = 2ᵗ`) then returns `y` with probability
//!
//! `P(y) = ½ F(θ − 2πy/T) + ½ F(−θ − 2πy/T)`,  `F(δ) = |T⁻¹ Σ_k e^{ikδ}|²`.
//!
//! The register drives `T − 1` controlled Grover applications, so the
//! call constant is `c = (T − 1)/√N`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{li, PiSource, PrimeTable};

pub const MAX_PHASE_BITS: u32 = 20;

/// `θ = 2 arcsin √(M/N)`.
pub fn grover_angle(big_n: u64, m: u64) -> Result<f64> {
    if big_n == 0 || m > big_n {
        return Err(Error::Domain(format!("need 0 <= M <= N, N >= 1; got M = {m}, N = {big_n}")));
    }
    Ok(2.0 * ((m as f64 / big_n as f64).sqrt()).min(1.0).asin())
}

/// Fejér kernel `sin²(Tδ/2) / (T² sin²(δ/2))`.
fn fejer(delta: f64, big_t: f64) -> f64 {
    let delta = delta - 2.0 * PI * (delta / (2.0 * PI)).round();
    if delta.abs() < 1e-9 {
        return 1.0 - (big_t * big_t - 1.0) * delta * delta / 12.0;
    }
    let half = (delta / 2.0).sin();
    let num = (big_t * delta / 2.0).sin();
    (num * num) / (big_t * big_t * half * half)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingDistribution {
    pub big_n: u64,
    pub m: u64,
    pub t: u32,
    pub theta: f64,
    pub probs: Vec<f64>,
}

pub fn counting_distribution(big_n: u64, m: u64, t: u32) -> Result<CountingDistribution> {
    if t == 0 || t > MAX_PHASE_BITS {
        return Err(Error::Capacity(format!("phase register t = {t} outside [1, {MAX_PHASE_BITS}]")));
    }
    let theta = grover_angle(big_n, m)?;
    let size = 1usize << t;
    let big_t = size as f64;
    let probs = (0..size)
        .map(|y| {
            let phase = 2.0 * PI * y as f64 / big_t;
            0.5 * (fejer(theta - phase, big_t) + fejer(-theta - phase, big_t))
        })
        .collect();
    Ok(CountingDistribution { big_n, m, t, theta, probs })
}

impl CountingDistribution {
    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Most likely outcome (lowest index on ties).
    pub fn mode(&self) -> usize {
        self.probs
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (y, &p)| if p > best.1 { (y, p) } else { best })
            .0
    }

    /// Controlled-Grover applications, `2ᵗ − 1`.
    pub fn oracle_calls(&self) -> u64 {
        (1u64 << self.t) - 1
    }

    /// `c = calls / √N`.
    pub fn calls_constant(&self) -> f64 {
        self.oracle_calls() as f64 / (self.big_n as f64).sqrt()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random::<f64>() * self.total_mass();
        let mut acc = 0.0;
        for (y, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return y;
            }
        }
        // rounding left u at the very top
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }

    /// `M̃ = N sin²(θ̃/2)` for outcome `y`, with `θ̃ = 2πy/2ᵗ` folded to `[0, π]`.
    pub fn estimate_from_outcome(&self, y: usize) -> CountEstimate {
        let size = 1usize << self.t;
        let y = y % size;
        let folded = y.min(size - y);
        let theta_tilde = 2.0 * PI * folded as f64 / size as f64;
        let m_tilde = self.big_n as f64 * (theta_tilde / 2.0).sin().powi(2);
        let c = self.calls_constant();
        let bound = counting_bound(self.m, c);
        let abs_err = (m_tilde - self.m as f64).abs();
        CountEstimate {
            big_n: self.big_n,
            m: self.m,
            t: self.t,
            y_observed: y as u64,
            theta_tilde,
            m_tilde,
            oracle_calls: self.oracle_calls(),
            c,
            bound,
            abs_err,
            within_bound: abs_err < bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    pub big_n: u64,
    pub m: u64,
    pub t: u32,
    pub y_observed: u64,
    pub theta_tilde: f64,
    pub m_tilde: f64,
    pub oracle_calls: u64,
    pub c: f64,
    pub bound: f64,
    pub abs_err: f64,
    pub within_bound: bool,
}

/// `(2π/c)√M + π²/c²`.
pub fn counting_bound(m: u64, c: f64) -> f64 {
    2.0 * PI / c * (m as f64).sqrt() + PI * PI / (c * c)
}

/// Draws one outcome with a generator seeded by `seed` and estimates `M`.
pub fn estimate_m(dist: &CountingDistribution, seed: u64) -> CountEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dist.estimate_from_outcome(dist.sample(&mut rng))
}

/// `samples` independent estimates from one seeded stream.
pub fn estimate_many(dist: &CountingDistribution, samples: usize, seed: u64) -> Vec<CountEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| dist.estimate_from_outcome(dist.sample(&mut rng)))
        .collect()
}

/// Fraction of estimates inside the error bound.
pub fn success_frequency(dist: &CountingDistribution, samples: usize, seed: u64) -> f64 {
    let hits = estimate_many(dist, samples, seed)
        .iter()
        .filter(|e| e.within_bound)
        .count();
    hits as f64 / samples as f64
}

/// `(2π/c) √x / √(ln x)`: the counting error with `π(x) ∼ x / ln x`.
pub fn pi_accuracy_bound(x: f64, c: f64) -> Result<f64> {
    if !(x >= 4.0) || !(c > 0.0) {
        return Err(Error::Domain(format!("accuracy bound needs x >= 4, c > 0; got x = {x}, c = {c}")));
    }
    Ok(2.0 * PI / c * x.sqrt() / x.ln().sqrt())
}

/// `√x ln x`, the fluctuation size of π(x) − Li(x) under RH.
pub fn rh_scale(x: f64) -> f64 {
    x.sqrt() * x.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhRow {
    pub n: u32,
    pub x: u64,
    pub pi: u64,
    pub li: f64,
    pub abs_err: f64,
    pub qc_bound: f64,
    pub rh_scale: f64,
}

impl RhRow {
    pub const CSV_HEADER: &'static str = "n,x,pi,li,abs_err,qc_bound,rh_scale";
}

/// Rows at `x = 2ⁿ` comparing the counting accuracy with the RH scale.
pub fn rh_comparison_scan(table: &PrimeTable, n_min: u32, n_max: u32, c: f64) -> Result<Vec<RhRow>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::Domain(format!("bad range [{n_min}, {n_max}]")));
    }
    (n_min..=n_max)
        .map(|n| {
            let x = 1u64 << n;
            let pi = table
                .pi_pow2(n)
                .ok_or_else(|| Error::Range(format!("table limit {} does not cover 2^{n}", table.limit())))?;
            let xf = x as f64;
            let li = li(xf)?;
            Ok(RhRow {
                n,
                x,
                pi,
                li,
                abs_err: (pi as f64 - li).abs(),
                qc_bound: pi_accuracy_bound(xf, c)?,
                rh_scale: rh_scale(xf),
            })
        })
        .collect()
}
