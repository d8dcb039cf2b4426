//! Segmented sieve of Eratosthenes over odd integers.
//!
//! The bitmap stores only odd numbers: bit `i` stands for `2i + 1`. Segments
//! are `SEGMENT_BITS` wide and sieved independently, so the result is
//! bit-identical whatever the rayon thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Odd-only bits per segment (2^24 bits cover 2^25 integers).
pub const SEGMENT_BITS: u64 = 1 << 24;
const SEGMENT_WORDS: usize = (SEGMENT_BITS / 64) as usize;

pub const MIN_LIMIT: u64 = 4;
pub const MAX_LIMIT: u64 = 1 << 34;

/// Words per cumulative-count block.
const BLOCK_WORDS: usize = 8;

/// Primality bitmap over `[0, limit)` with cumulative counts at block
/// boundaries. Immutable once built and `Sync`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    words: Vec<u64>,
    /// Number of odd primes strictly before each block of `BLOCK_WORDS` words.
    cum: Vec<u64>,
}

fn check_limit(limit: u64) -> Result<()> {
    if !(MIN_LIMIT..=MAX_LIMIT).contains(&limit) {
        return Err(Error::Capacity(format!(
            "sieve limit {limit} outside [{MIN_LIMIT}, 2^34]"
        )));
    }
    Ok(())
}

/// Odd primes up to and including `bound`, by a plain sieve.
fn base_primes(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    let mut composite = vec![false; bound + 1];
    let mut out = Vec::new();
    let mut p = 3;
    while p <= bound {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= bound {
                composite[m] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    out
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Sieves one segment whose first bit is `lo` (an odd-index offset).
/// `total_bits` is the number of valid odd indices overall.
fn sieve_segment(lo: u64, words: &mut [u64], base: &[u64], total_bits: u64) {
    words.iter_mut().for_each(|w| *w = u64::MAX);
    let hi = lo + (words.len() as u64) * 64;
    let first_num = 2 * lo + 1;
    let last_num = 2 * hi - 1;
    for &p in base {
        if p * p > last_num {
            break;
        }
        let mut start = first_num.div_ceil(p) * p;
        if start < p * p {
            start = p * p;
        }
        if start % 2 == 0 {
            start += p;
        }
        let mut j = (start - 1) / 2;
        while j < hi {
            let rel = j - lo;
            words[(rel / 64) as usize] &= !(1u64 << (rel % 64));
            j += p;
        }
    }
    if lo == 0 {
        // the number 1
        words[0] &= !1;
    }
    if hi > total_bits {
        let valid = total_bits.saturating_sub(lo);
        for (k, w) in words.iter_mut().enumerate() {
            let word_lo = (k as u64) * 64;
            if word_lo >= valid {
                *w = 0;
            } else if word_lo + 64 > valid {
                *w &= (1u64 << (valid - word_lo)) - 1;
            }
        }
    }
}

/// Builds the primality table for `[0, limit)`.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    check_limit(limit)?;
    let total_bits = limit / 2;
    let n_words = total_bits.div_ceil(64) as usize;
    let base = base_primes(isqrt(limit));
    let mut words = vec![0u64; n_words];
    words
        .par_chunks_mut(SEGMENT_WORDS)
        .enumerate()
        .for_each(|(k, chunk)| sieve_segment(k as u64 * SEGMENT_BITS, chunk, &base, total_bits));

    let mut cum = Vec::with_capacity(n_words / BLOCK_WORDS + 1);
    let mut acc = 0u64;
    for block in words.chunks(BLOCK_WORDS) {
        cum.push(acc);
        acc += block.iter().map(|w| w.count_ones() as u64).sum::<u64>();
    }
    Ok(PrimeTable { limit, words, cum })
}

/// π(limit − 1) without materialising the bitmap; memory is one segment per
/// worker thread.
pub fn count_primes_below(limit: u64) -> Result<u64> {
    check_limit(limit)?;
    let total_bits = limit / 2;
    let base = base_primes(isqrt(limit));
    let segments = total_bits.div_ceil(SEGMENT_BITS);
    let odd: u64 = (0..segments)
        .into_par_iter()
        .map_init(
            || vec![0u64; SEGMENT_WORDS],
            |buf, k| {
                let lo = k * SEGMENT_BITS;
                let words = (total_bits - lo).min(SEGMENT_BITS).div_ceil(64) as usize;
                let seg = &mut buf[..words];
                sieve_segment(lo, seg, &base, total_bits);
                seg.iter().map(|w| w.count_ones() as u64).sum::<u64>()
            },
        )
        .sum();
    Ok(odd + 1)
}

impl PrimeTable {
    /// Exclusive upper bound of the table.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, x: u64) -> bool {
        if x == 2 {
            return true;
        }
        if x.is_multiple_of(2) || x >= self.limit {
            return false;
        }
        let i = x / 2;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub(crate) fn check(&self, x: u64) -> Result<()> {
        if x >= self.limit {
            return Err(Error::Range(format!(
                "x = {x} not below table limit {}",
                self.limit
            )));
        }
        Ok(())
    }

    /// π(x) for `x < limit`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x < 2 {
            return Ok(0);
        }
        // odd indices 0..=last
        let last = (x - 1) / 2;
        let word = (last / 64) as usize;
        let block = word / BLOCK_WORDS;
        let mut count = self.cum[block];
        for w in &self.words[block * BLOCK_WORDS..word] {
            count += w.count_ones() as u64;
        }
        let bit = last % 64;
        let mask = if bit == 63 { u64::MAX } else { (1u64 << (bit + 1)) - 1 };
        count += (self.words[word] & mask).count_ones() as u64;
        Ok(count + 1)
    }

    /// Number of primes in the whole table, π(limit − 1).
    pub fn count(&self) -> u64 {
        self.cum.last().copied().unwrap_or(0)
            + self.words[(self.cum.len() - 1) * BLOCK_WORDS..]
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum::<u64>()
            + 1
    }

    /// Primes in increasing order, all below `limit`.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(2).chain(self.words.iter().enumerate().flat_map(|(k, &w)| {
            let base = k as u64 * 64;
            BitIter(w).map(move |b| 2 * (base + b) + 1)
        }))
    }

    /// Primes `≤ x` (clipped to the table).
    pub fn primes_up_to(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        self.primes().take_while(move |&p| p <= x)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as u64;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(x: u64) -> bool {
        if x < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= x {
            if x.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_limits() {
        let t = sieve(8).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(t.count(), 4);
        let t = sieve(101).unwrap();
        assert_eq!(t.pi(100).unwrap(), 25);
        let t = sieve(102).unwrap();
        assert_eq!(t.pi(101).unwrap(), 26);
    }

    #[test]
    fn matches_trial_division_below_1024() {
        let t = sieve(1024).unwrap();
        for x in 0..1024 {
            assert_eq!(t.is_prime(x), trial_division(x), "x = {x}");
        }
        assert_eq!(t.pi(1023).unwrap(), 172);
        assert_eq!(t.count(), 172);
    }

    #[test]
    fn odd_limits_mask_tail() {
        for limit in 4..300u64 {
            let t = sieve(limit).unwrap();
            let expected = (0..limit).filter(|&x| trial_division(x)).count() as u64;
            assert_eq!(t.count(), expected, "limit {limit}");
            assert_eq!(t.primes().count() as u64, expected);
            assert_eq!(count_primes_below(limit).unwrap(), expected);
        }
    }

    #[test]
    fn limit_bounds() {
        assert!(matches!(sieve(3), Err(Error::Capacity(_))));
        assert!(matches!(sieve(MAX_LIMIT + 1), Err(Error::Capacity(_))));
        assert!(matches!(count_primes_below(2), Err(Error::Capacity(_))));
    }

    #[test]
    fn pi_range_error() {
        let t = sieve(64).unwrap();
        assert!(matches!(t.pi(64), Err(Error::Range(_))));
        assert_eq!(t.pi(63).unwrap(), 18);
    }

    #[test]
    fn multi_segment_matches_count() {
        // crosses two segment boundaries
        let limit = 2 * 2 * SEGMENT_BITS + 12345;
        let t = sieve(limit).unwrap();
        assert_eq!(t.count(), count_primes_below(limit).unwrap());
        for x in (2 * SEGMENT_BITS - 200)..(2 * SEGMENT_BITS + 200) {
            assert_eq!(t.is_prime(x), trial_division(x), "x = {x}");
        }
    }

    #[test]
    fn pi_is_step_function() {
        let t = sieve(1 << 14).unwrap();
        let mut prev = 0;
        for x in 0..(1 << 14) {
            let p = t.pi(x).unwrap();
            assert_eq!(p - prev, t.is_prime(x) as u64);
            prev = p;
        }
    }
}
