//! Miller–Rabin strong-probable-prime testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Witnesses that classify every integer below 3·10^14 correctly.
pub const DETERMINISTIC_WITNESSES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by repeated squaring.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// `x − 1 = d · 2^s` with `d` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrDecomposition {
    pub x: u64,
    pub d: u64,
    pub s: u32,
}

pub fn mr_decompose(x: u64) -> Result<MrDecomposition> {
    if x < 3 || x.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "decomposition needs an odd x >= 3, got {x}"
        )));
    }
    let s = (x - 1).trailing_zeros();
    Ok(MrDecomposition { x, d: (x - 1) >> s, s })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CompositeProven,
    ProbablePrime,
}

/// One strong-probable-prime round of `x` against witness `a`.
pub fn mr_witness_test(x: u64, a: u64) -> Result<Verdict> {
    let MrDecomposition { d, s, .. } = mr_decompose(x)?;
    if a >= x {
        return Err(Error::WitnessGuard { a, x });
    }
    if a == 0 {
        return Err(Error::Domain("witness must be >= 1".into()));
    }
    let mut y = pow_mod(a, d, x);
    if y == 1 || y == x - 1 {
        return Ok(Verdict::ProbablePrime);
    }
    for _ in 1..s {
        y = mul_mod(y, y, x);
        if y == x - 1 {
            return Ok(Verdict::ProbablePrime);
        }
    }
    Ok(Verdict::CompositeProven)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMode {
    Deterministic,
    Probabilistic,
}

/// The bases a primality test runs against.
///
/// Deterministic sets hold a fixed list. Probabilistic sets draw `k` bases
/// uniformly from `[2, x − 2]` for each tested `x`, from a generator seeded
/// by `(seed, x)` so any single verdict can be replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub mode: WitnessMode,
    pub witnesses: Vec<u64>,
    pub k: usize,
    pub seed: u64,
}

impl Default for WitnessSet {
    fn default() -> Self {
        Self::deterministic()
    }
}

impl WitnessSet {
    pub fn deterministic() -> Self {
        Self::custom(DETERMINISTIC_WITNESSES.to_vec())
    }

    pub fn custom(witnesses: Vec<u64>) -> Self {
        let k = witnesses.len();
        WitnessSet {
            mode: WitnessMode::Deterministic,
            witnesses,
            k,
            seed: 0,
        }
    }

    pub fn probabilistic(k: usize, seed: u64) -> Self {
        WitnessSet {
            mode: WitnessMode::Probabilistic,
            witnesses: Vec::new(),
            k,
            seed,
        }
    }

    /// Probabilistic set with `k` equal to the register width `n`.
    pub fn for_width(n: u32, seed: u64) -> Self {
        Self::probabilistic(n as usize, seed)
    }

    /// Bases used when testing `x`, before the `a < x` guard.
    pub fn witnesses_for(&self, x: u64) -> Vec<u64> {
        match self.mode {
            WitnessMode::Deterministic => self.witnesses.clone(),
            WitnessMode::Probabilistic => {
                if x < 5 {
                    // [2, x − 2] is empty
                    return vec![2];
                }
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix(self.seed ^ splitmix(x)));
                (0..self.k).map(|_| rng.random_range(2..=x - 2)).collect()
            }
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Miller–Rabin over every witness below `x`; witnesses `≥ x` are skipped.
pub fn is_prime(x: u64, ws: &WitnessSet) -> bool {
    match x {
        0 | 1 => return false,
        2 => return true,
        _ if x.is_multiple_of(2) => return false,
        _ => {}
    }
    ws.witnesses_for(x)
        .into_iter()
        .filter(|&a| a >= 1 && a < x)
        .all(|a| mr_witness_test(x, a) == Ok(Verdict::ProbablePrime))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        assert_eq!(mr_decompose(25).unwrap(), MrDecomposition { x: 25, d: 3, s: 3 });
        assert_eq!(mr_decompose(9).unwrap(), MrDecomposition { x: 9, d: 1, s: 3 });
        assert_eq!(mr_decompose(13).unwrap(), MrDecomposition { x: 13, d: 3, s: 2 });
        assert!(matches!(mr_decompose(10), Err(Error::Domain(_))));
        assert!(matches!(mr_decompose(1), Err(Error::Domain(_))));
    }

    #[test]
    fn decomposition_roundtrip() {
        for x in (3..1u64 << 16).step_by(2) {
            let m = mr_decompose(x).unwrap();
            assert_eq!(m.d % 2, 1);
            assert!(m.s >= 1);
            assert_eq!(m.d * (1 << m.s) + 1, x);
        }
    }

    #[test]
    fn witness_rounds() {
        assert_eq!(mr_witness_test(9, 2).unwrap(), Verdict::CompositeProven);
        assert_eq!(mr_witness_test(7, 2).unwrap(), Verdict::ProbablePrime);
        // 2047 = 23 · 89, base 2 is a strong liar
        assert_eq!(mr_witness_test(2047, 2).unwrap(), Verdict::ProbablePrime);
        assert_eq!(mr_witness_test(2047, 3).unwrap(), Verdict::CompositeProven);
        assert_eq!(
            mr_witness_test(7, 7),
            Err(Error::WitnessGuard { a: 7, x: 7 })
        );
        assert_eq!(mr_witness_test(9, 1).unwrap(), Verdict::ProbablePrime);
    }

    #[test]
    fn small_cases() {
        let ws = WitnessSet::deterministic();
        assert!(!is_prime(0, &ws));
        assert!(!is_prime(1, &ws));
        assert!(is_prime(2, &ws));
        assert!(is_prime(3, &ws));
        assert!(!is_prime(4, &ws));
        assert!(is_prime(101, &ws));
        assert!(!is_prime(2047, &ws));
        // strong pseudoprime to bases 2, 3, 5 and 7
        assert!(is_prime(3_215_031_751, &WitnessSet::custom(vec![2, 3, 5, 7])));
        assert!(!is_prime(3_215_031_751, &ws));
    }

    #[test]
    fn large_moduli_do_not_overflow() {
        let ws = WitnessSet::deterministic();
        // largest prime below 2^34
        assert!(is_prime(17_179_869_143, &ws));
        assert!(!is_prime(17_179_869_143 * 3, &ws));
    }

    #[test]
    fn probabilistic_witnesses_are_reproducible() {
        let ws = WitnessSet::probabilistic(5, 42);
        let a = ws.witnesses_for(1_000_003);
        assert_eq!(a, ws.witnesses_for(1_000_003));
        assert_eq!(a.len(), 5);
        assert!(a.iter().all(|&w| (2..=1_000_001).contains(&w)));
        assert_eq!(ws.witnesses_for(3), vec![2]);
        assert!(is_prime(3, &ws));
    }
}
