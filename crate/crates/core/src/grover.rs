//! Grover search toward `|P_n⟩`: sign-flip oracle, diffusion about the
//! uniform state, the iteration schedule and the overlap diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{PiSource, PrimeTable};
use crate::prime_state::build_prime_state;
use crate::qstate::QuantumState;

/// Full statevector runs stop here.
pub const MAX_SIM_QUBITS: u32 = 22;

/// `U_f|x⟩ = (−1)^{f(x)}|x⟩`.
pub fn oracle_sign_flip<F: Fn(u64) -> bool>(state: &mut QuantumState, predicate: F) {
    for (x, a) in state.amplitudes_mut().iter_mut().enumerate() {
        if predicate(x as u64) {
            *a = -*a;
        }
    }
}

/// `U_ψ = 2|ψ⟩⟨ψ| − 1`: each amplitude maps to `2·mean − a`.
pub fn diffusion(state: &mut QuantumState) {
    let amp = state.amplitudes_mut();
    // pairwise sum keeps the reduction order fixed
    let mean = pairwise_sum(amp) / amp.len() as f64;
    for a in amp.iter_mut() {
        *a = 2.0 * mean - *a;
    }
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// One application of `G = U_ψ U_f`.
pub fn grover_step<F: Fn(u64) -> bool>(state: &mut QuantumState, predicate: F) {
    oracle_sign_flip(state, predicate);
    diffusion(state);
}

/// `θ` with `sin(θ/2) = √(M/N)`.
pub fn rotation_angle(big_n: u64, m: u64) -> f64 {
    2.0 * ((m as f64) / (big_n as f64)).sqrt().asin()
}

/// `R = ⌊arccos √(M/N) / (2 arcsin √(M/N))⌋`, valid for `1 ≤ M ≤ N/2`.
pub fn optimal_iterations(big_n: u64, m: u64) -> Result<u64> {
    if m < 1 || m > big_n / 2 {
        return Err(Error::Domain(format!(
            "iteration count needs 1 <= M <= N/2, got M = {m}, N = {big_n}"
        )));
    }
    let s = ((m as f64) / (big_n as f64)).sqrt();
    Ok((s.acos() / (2.0 * s.asin())).floor() as u64)
}

/// `R_max(n) = ⌊(π/4)·√(n ln 2)⌋`, the PNT form of the `(π/4)√(N/M)` bound.
pub fn r_max(n: u32) -> u64 {
    (PI / 4.0 * (n as f64 * std::f64::consts::LN_2).sqrt()).floor() as u64
}

/// `P_G = sin²((2R + 1) θ/2)`.
pub fn pg_analytic(big_n: u64, m: u64, r: u64) -> f64 {
    let theta = rotation_angle(big_n, m);
    ((2 * r + 1) as f64 * theta / 2.0).sin().powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverRun {
    pub n: u32,
    pub big_n: u64,
    pub m: u64,
    pub r: u64,
    pub theta: f64,
    pub overlap: f64,
}

/// Applies `G^R` to the uniform state with the sieve as oracle and returns
/// the overlap with `|P_n⟩`.
pub fn run_grover(n: u32, table: &PrimeTable, r: u64) -> Result<GroverRun> {
    let (state, target) = evolve(n, table, r)?;
    let big_n = 1u64 << n;
    let m = table.pi(big_n - 1)?;
    Ok(GroverRun {
        n,
        big_n,
        m,
        r,
        theta: rotation_angle(big_n, m),
        overlap: target.overlap(&state)?,
    })
}

/// `G^R|ψ⟩` and `|P_n⟩`.
pub fn evolve(n: u32, table: &PrimeTable, r: u64) -> Result<(QuantumState, QuantumState)> {
    if n > MAX_SIM_QUBITS {
        return Err(Error::Capacity(format!(
            "statevector Grover limited to {MAX_SIM_QUBITS} qubits, got {n}"
        )));
    }
    let target = build_prime_state(n, table)?;
    let mut state = QuantumState::uniform(n)?;
    for _ in 0..r {
        grover_step(&mut state, |x| table.is_prime(x));
    }
    Ok((state, target))
}

/// One row of the iteration-count and accuracy figure. `None` marks a
/// missing π(2ⁿ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub n: u32,
    pub r: Option<u64>,
    pub r_max: u64,
    pub pg: Option<f64>,
}

pub fn figure_scan(n_min: u32, n_max: u32, source: &dyn PiSource) -> Result<Vec<FigureRow>> {
    if n_min < 2 || n_max > 62 || n_min > n_max {
        return Err(Error::Domain(format!(
            "figure range [{n_min}, {n_max}] must lie in [2, 62]"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let big_n = 1u64 << n;
            let (r, pg) = match source.pi_pow2(n) {
                Some(m) => {
                    let r = optimal_iterations(big_n, m)?;
                    (Some(r), Some(pg_analytic(big_n, m, r)))
                }
                None => (None, None),
            };
            Ok(FigureRow { n, r, r_max: r_max(n), pg })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::{sieve, PiTable};
    use approx::assert_abs_diff_eq;

    #[test]
    fn oracle_on_uniform_two_qubits() {
        let mut s = QuantumState::uniform(2).unwrap();
        oracle_sign_flip(&mut s, |x| x == 2 || x == 3);
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.5, 0.5, -0.5, -0.5]);
        let before = s.clone();
        oracle_sign_flip(&mut s, |_| false);
        assert_eq!(s, before);
        oracle_sign_flip(&mut s, |x| x == 2 || x == 3);
        oracle_sign_flip(&mut s, |x| x == 2 || x == 3);
        assert_eq!(s, before);
    }

    #[test]
    fn diffusion_cases() {
        let mut u = QuantumState::uniform(4).unwrap();
        let before = u.clone();
        diffusion(&mut u);
        for (a, b) in u.amplitudes().iter().zip(before.amplitudes()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
        }
        // n = 1: 2|ψ⟩⟨ψ| − 1 = [[0, 1], [1, 0]]
        let mut b = QuantumState::basis(1, 0).unwrap();
        diffusion(&mut b);
        assert_abs_diff_eq!(b.amplitudes()[0].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.amplitudes()[1].re, 1.0, epsilon = 1e-15);
        // mean-zero input is negated
        let h = 0.5;
        let amp = [h, -h, h, -h].map(|v| Complex64::new(v, 0.0)).to_vec();
        let mut s = QuantumState::from_amplitudes(2, amp.clone()).unwrap();
        diffusion(&mut s);
        for (a, b) in s.amplitudes().iter().zip(&amp) {
            assert_abs_diff_eq!(a.re, -b.re, epsilon = 1e-15);
        }
    }

    #[test]
    fn schedule_values() {
        assert_eq!(optimal_iterations(8, 4).unwrap(), 0);
        assert_eq!(optimal_iterations(1024, 172).unwrap(), 1);
        assert!(optimal_iterations(8, 5).is_err());
        assert!(optimal_iterations(8, 0).is_err());
        assert_eq!(r_max(45), 4);
        assert_eq!(r_max(2), 0);
        let table = PiTable::bundled();
        let m45 = table.pi_pow2(45).unwrap();
        assert_eq!(optimal_iterations(1 << 45, m45).unwrap(), 3);
    }

    #[test]
    fn small_runs() {
        let t = sieve(1 << 10).unwrap();
        let r0 = run_grover(3, &t, 0).unwrap();
        assert_abs_diff_eq!(r0.overlap, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r0.theta, PI / 2.0, epsilon = 1e-15);
        let r1 = run_grover(3, &t, 1).unwrap();
        assert_abs_diff_eq!(r1.overlap, 0.5, epsilon = 1e-12);
        for r in 0..6 {
            let (s, _) = evolve(10, &t, r).unwrap();
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-10);
        }
        assert!(matches!(run_grover(23, &t, 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn analytic_edges() {
        assert_abs_diff_eq!(pg_analytic(1024, 172, 0), 172.0 / 1024.0, epsilon = 1e-15);
        for r in 0..10 {
            assert_abs_diff_eq!(pg_analytic(64, 64, r), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn figure_rows() {
        let t = sieve(1 << 20).unwrap();
        let rows = figure_scan(2, 24, &t).unwrap();
        assert_eq!(rows.len(), 23);
        assert!(rows[..19].iter().all(|r| r.r.is_some()));
        assert!(rows[19..].iter().all(|r| r.r.is_none() && r.pg.is_none()));
        let full = figure_scan(2, 45, &PiTable::bundled()).unwrap();
        let last = full.last().unwrap();
        assert_eq!((last.n, last.r, last.r_max), (45, Some(3), 4));
        assert!(figure_scan(1, 5, &t).is_err());
    }
}
