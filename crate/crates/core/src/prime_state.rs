//! The Prime state `|P_n⟩`, its odd-only variant, the measurement-based
//! preparation statistics and the diagonal primality Hamiltonian.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{is_prime, PrimeTable, WitnessSet};
use crate::qstate::QuantumState;

pub const MIN_N: u32 = 2;
pub const MAX_N: u32 = 24;

fn check(n: u32, table: &PrimeTable) -> Result<()> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::Capacity(format!(
            "n = {n} outside [{MIN_N}, {MAX_N}]; 2^n must be composite and fit in memory"
        )));
    }
    if table.limit() < 1u64 << n {
        return Err(Error::Capacity(format!(
            "prime table limit {} below 2^{n}",
            table.limit()
        )));
    }
    Ok(())
}

/// `|P_n⟩ = π(2ⁿ)^{-1/2} Σ_{p < 2ⁿ} |p⟩`.
pub fn build_prime_state(n: u32, table: &PrimeTable) -> Result<QuantumState> {
    check(n, table)?;
    QuantumState::equal_superposition(n, table.primes_up_to((1u64 << n) - 1))
}

/// `|P_n⟩` without the even element `|2⟩`.
pub fn build_odd_prime_state(n: u32, table: &PrimeTable) -> Result<QuantumState> {
    check(n, table)?;
    QuantumState::equal_superposition(n, table.primes_up_to((1u64 << n) - 1).skip(1))
}

/// Outcome statistics of preparing `|P_n⟩` by measuring the primality
/// ancilla after `U_primality` acts on the uniform superposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparationModel {
    pub n: u32,
    /// π(2ⁿ)
    pub primes: u64,
    /// π(2ⁿ) / 2ⁿ
    pub success_prob: f64,
    /// 1 / (n ln 2)
    pub asymptotic: f64,
    /// Amplitude of every composite branch, 2^{-n/2}.
    pub normalization_a: f64,
    /// Total squared weight of the composite branch.
    pub composite_mass: f64,
}

impl PreparationModel {
    pub fn from_count(n: u32, primes: u64) -> Result<Self> {
        if !(MIN_N..=62).contains(&n) {
            return Err(Error::Domain(format!("n = {n} outside [2, 62]")));
        }
        let dim = (1u64 << n) as f64;
        let a = dim.sqrt().recip();
        Ok(PreparationModel {
            n,
            primes,
            success_prob: primes as f64 / dim,
            asymptotic: 1.0 / (n as f64 * std::f64::consts::LN_2),
            normalization_a: a,
            composite_mass: a * a * ((1u64 << n) - primes) as f64,
        })
    }

    /// Standard deviation of the success frequency over `shots` repetitions.
    pub fn shot_stddev(&self, shots: u64) -> f64 {
        let p = self.success_prob;
        (p * (1.0 - p) / shots as f64).sqrt()
    }
}

pub fn preparation_probability(n: u32, table: &PrimeTable) -> Result<PreparationModel> {
    if n < MIN_N {
        return Err(Error::Domain(format!("n = {n} below 2")));
    }
    let x = (1u64 << n) - 1;
    PreparationModel::from_count(n, table.pi(x)?)
}

/// A diagonal operator `H|x⟩ = λ_x |x⟩` built from a primality test, with
/// `λ_x = 0` on declared primes.
#[derive(Debug, Clone)]
pub struct PrimalityHamiltonian {
    n: u32,
    diag: Vec<f64>,
}

impl PrimalityHamiltonian {
    pub fn build<T, L>(n: u32, test: T, lambda_rule: L) -> Result<Self>
    where
        T: Fn(u64) -> bool,
        L: Fn(u64) -> f64,
    {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(Error::Capacity(format!("n = {n} outside [{MIN_N}, {MAX_N}]")));
        }
        let mut diag = Vec::with_capacity(1 << n);
        for x in 0..1u64 << n {
            if test(x) {
                diag.push(0.0);
            } else {
                let lambda = lambda_rule(x);
                if !(lambda > 0.0) {
                    return Err(Error::Domain(format!(
                        "lambda rule gave {lambda} for composite {x}; must be positive"
                    )));
                }
                diag.push(lambda);
            }
        }
        Ok(PrimalityHamiltonian { n, diag })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn kernel(&self) -> impl Iterator<Item = u64> + '_ {
        self.diag
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == 0.0)
            .map(|(x, _)| x as u64)
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn energy(&self, state: &QuantumState) -> f64 {
        state
            .amplitudes()
            .iter()
            .zip(&self.diag)
            .map(|(a, l)| a.norm_sqr() * l)
            .sum()
    }

    /// Smallest nonzero eigenvalue.
    pub fn gap(&self) -> Option<f64> {
        self.diag.iter().copied().filter(|&l| l > 0.0).reduce(f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianCheck {
    pub kernel_dim: u64,
    pub prime_state_energy: f64,
    /// Kernel is exactly the span of the primes below 2ⁿ.
    pub holds: bool,
}

/// Builds `H_primality` from Miller–Rabin with the deterministic witnesses
/// and checks its kernel against the sieve, so that `|P_n⟩` is a ground state.
pub fn primality_hamiltonian_check<L: Fn(u64) -> f64>(
    n: u32,
    table: &PrimeTable,
    lambda_rule: L,
) -> Result<HamiltonianCheck> {
    check(n, table)?;
    let ws = WitnessSet::deterministic();
    let h = PrimalityHamiltonian::build(n, |x| is_prime(x, &ws), lambda_rule)?;
    let primes = table.primes_up_to((1u64 << n) - 1);
    let holds = h.kernel().eq(primes);
    let state = build_prime_state(n, table)?;
    Ok(HamiltonianCheck {
        kernel_dim: h.kernel().count() as u64,
        prime_state_energy: h.energy(&state),
        holds,
    })
}
