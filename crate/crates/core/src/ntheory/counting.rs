//! Counting functions over a [`PrimeTable`]: progressions, twin pairs and the
//! mod-4 bias.

use serde::{Deserialize, Serialize};

use super::sieve::PrimeTable;
use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient by trial factorisation.
pub fn euler_phi(a: u64) -> u64 {
    let mut n = a;
    let mut phi = a;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// π_{a,b}(x): primes `p ≤ x` with `p ≡ b (mod a)`.
pub fn pi_ab(table: &PrimeTable, a: u64, b: u64, x: u64) -> Result<u64> {
    table.check(x)?;
    if a == 0 || gcd(a, b) != 1 {
        return Err(Error::Domain(format!(
            "progression {a}m + {b} needs gcd(a, b) = 1"
        )));
    }
    let b = b % a;
    Ok(table.primes_up_to(x).filter(|p| p % a == b).count() as u64)
}

/// Twin pairs split by the residue of the smaller member mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwinClass {
    One,
    Three,
    All,
}

/// Pairs `(p, p + 2)` of primes with both members `≤ x`.
pub fn pi_twin(table: &PrimeTable, x: u64, class: TwinClass) -> Result<u64> {
    table.check(x)?;
    let count = table
        .primes_up_to(x.saturating_sub(2))
        .filter(|&p| table.is_prime(p + 2))
        .filter(|p| match class {
            TwinClass::One => p % 4 == 1,
            TwinClass::Three => p % 4 == 3,
            TwinClass::All => true,
        })
        .count();
    Ok(count as u64)
}

/// Residue-class counts mod 4 and the twin-pair split at one `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasReport {
    pub x: u64,
    pub pi41: u64,
    pub pi43: u64,
    pub delta: i64,
    pub pi2_1: u64,
    pub pi2_3: u64,
    pub delta2: i64,
}

#[derive(Default)]
struct BiasAccumulator {
    pi41: u64,
    pi43: u64,
    pi2_1: u64,
    pi2_3: u64,
}

impl BiasAccumulator {
    fn push(&mut self, table: &PrimeTable, p: u64) {
        match p % 4 {
            1 => self.pi41 += 1,
            3 => self.pi43 += 1,
            _ => {}
        }
        // the pair (p − 2, p) completes when p arrives
        if p >= 5 && table.is_prime(p - 2) {
            match (p - 2) % 4 {
                1 => self.pi2_1 += 1,
                _ => self.pi2_3 += 1,
            }
        }
    }

    fn report(&self, x: u64) -> BiasReport {
        BiasReport {
            x,
            pi41: self.pi41,
            pi43: self.pi43,
            delta: self.pi43 as i64 - self.pi41 as i64,
            pi2_1: self.pi2_1,
            pi2_3: self.pi2_3,
            delta2: self.pi2_3 as i64 - self.pi2_1 as i64,
        }
    }
}

pub fn chebyshev_bias(table: &PrimeTable, x: u64) -> Result<BiasReport> {
    table.check(x)?;
    let mut acc = BiasAccumulator::default();
    for p in table.primes_up_to(x) {
        acc.push(table, p);
    }
    Ok(acc.report(x))
}

/// Reports at `x = step, 2·step, …` up to `upto`, computed in one pass.
pub fn bias_scan(table: &PrimeTable, upto: u64, step: u64) -> Result<Vec<BiasReport>> {
    table.check(upto)?;
    if step == 0 {
        return Err(Error::Domain("scan step must be positive".into()));
    }
    let mut acc = BiasAccumulator::default();
    let mut rows = Vec::new();
    let mut next = step;
    let mut primes = table.primes_up_to(upto).peekable();
    while next <= upto {
        while let Some(&p) = primes.peek() {
            if p > next {
                break;
            }
            acc.push(table, p);
            primes.next();
        }
        rows.push(acc.report(next));
        next += step;
    }
    Ok(rows)
}

/// Smallest `x ≤ upto` at which Δ(x) = π_{4,3}(x) − π_{4,1}(x) is negative.
pub fn first_negative_bias(table: &PrimeTable, upto: u64) -> Result<Option<u64>> {
    table.check(upto)?;
    let mut acc = BiasAccumulator::default();
    for p in table.primes_up_to(upto) {
        acc.push(table, p);
        if acc.pi41 > acc.pi43 {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
