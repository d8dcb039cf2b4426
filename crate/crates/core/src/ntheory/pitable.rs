//! π(2ⁿ) values beyond sieve range.
//!
//! Text format: one `n,pi_value` record per line; `#` starts a comment;
//! blank lines are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use super::sieve::{count_primes_below, PrimeTable, MAX_LIMIT};
use crate::error::{Error, Result};

/// Environment variable naming a π-table file to use instead of the bundled one.
pub const PI_TABLE_ENV: &str = "PRIMEQ_PI_TABLE";

const BUNDLED: &str = include_str!("../../data/pi_pow2.txt");

/// Anything that can report π(2ⁿ).
pub trait PiSource {
    fn pi_pow2(&self, n: u32) -> Option<u64>;
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PiTable {
    entries: BTreeMap<u32, u64>,
}

impl PiTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: format!("{msg}: {raw:?}"),
            };
            let (n, v) = line.split_once(',').ok_or_else(|| err("expected n,pi_value"))?;
            let n: u32 = n.trim().parse().map_err(|_| err("bad n"))?;
            let v: u64 = v.trim().parse().map_err(|_| err("bad pi value"))?;
            if n >= 64 {
                return Err(err("n must be below 64"));
            }
            if entries.insert(n, v).is_some() {
                return Err(err("duplicate n"));
            }
        }
        Ok(PiTable { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Values shipped with the crate (n = 1 to 45).
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled table is well formed")
    }

    /// The file named by [`PI_TABLE_ENV`], or the bundled table.
    pub fn from_env_or_bundled() -> Result<Self> {
        match std::env::var_os(PI_TABLE_ENV) {
            Some(p) => Self::load(p),
            None => Ok(Self::bundled()),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.entries.iter().map(|(&n, &v)| (n, v))
    }

    pub fn insert(&mut self, n: u32, value: u64) {
        self.entries.insert(n, value);
    }
}

impl PiSource for PiTable {
    fn pi_pow2(&self, n: u32) -> Option<u64> {
        self.entries.get(&n).copied()
    }
}

impl PiSource for PrimeTable {
    fn pi_pow2(&self, n: u32) -> Option<u64> {
        let x = 1u64.checked_shl(n)?;
        // 2ⁿ itself is never prime for n ≥ 2
        self.pi(x.checked_sub(1)?).ok()
    }
}

/// Segmented counting for every `n ≤ max_n` (at most 34), no bitmap kept.
#[derive(Debug, Clone, Copy)]
pub struct SegmentedCounter {
    pub max_n: u32,
}

impl PiSource for SegmentedCounter {
    fn pi_pow2(&self, n: u32) -> Option<u64> {
        if n < 2 || n > self.max_n {
            return None;
        }
        let x = 1u64 << n;
        if x > MAX_LIMIT {
            return None;
        }
        count_primes_below(x).ok()
    }
}

/// First source that answers wins.
pub struct Chain<'a>(pub Vec<&'a dyn PiSource>);

impl PiSource for Chain<'_> {
    fn pi_pow2(&self, n: u32) -> Option<u64> {
        self.0.iter().find_map(|s| s.pi_pow2(n))
    }
}
