//! Classical number theory: sieving, Miller–Rabin and the prime counting
//! functions that reappear as quantum observables.

mod analytic;
mod counting;
mod miller_rabin;
mod pitable;
mod sieve;

pub use analytic::{hl_twin_estimate, li, rh_residual, twin_prime_constant, TWIN_CONSTANT_CUTOFF};
pub use counting::{
    bias_scan, chebyshev_bias, euler_phi, first_negative_bias, gcd, pi_ab, pi_twin, BiasReport,
    TwinClass,
};
pub use miller_rabin::{
    is_prime, mr_decompose, mr_witness_test, mul_mod, pow_mod, MrDecomposition, Verdict,
    WitnessMode, WitnessSet, DETERMINISTIC_WITNESSES,
};
pub use pitable::{Chain, PiSource, PiTable, SegmentedCounter, PI_TABLE_ENV};
pub use sieve::{count_primes_below, sieve, PrimeTable, MAX_LIMIT, MIN_LIMIT, SEGMENT_BITS};

/// π(x) through the table.
pub fn pi(table: &PrimeTable, x: u64) -> crate::Result<u64> {
    table.pi(x)
}
