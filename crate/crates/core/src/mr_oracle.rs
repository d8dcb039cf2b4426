//! Per-basis-state emulation of the reversible Miller–Rabin oracle.
//!
//! Each computational basis state `|x⟩` carries a register file: the
//! decomposition registers `d` and `s`, one modular-exponentiation register
//! and one test ancilla per `(a, r)` slot, one carrier per witness and the
//! global ancilla. Every stage XORs a function of registers it does not
//! write, so running the stages again in reverse order restores the
//! ancillae exactly. The circuit is a permutation plus a phase on the basis,
//! which is why tracking one basis state at a time reproduces it.
//!
//! Stages, in order:
//! 1. `d ^= (x − 1) >> tz(x − 1)`, `s ^= tz(x − 1)` (trailing-zero read-out)
//! 2. for every witness `a` with `a < x` and `r < s`:
//!    `v[a,r] ^= a^{2^r d} mod x`
//! 3. `t[a,r] ^= evidence(v[a,r])`, starting from 1; evidence is
//!    `v ∈ {1, x−1}` for `r = 0` and `v = x−1` for `r ≥ 1`
//! 4. `c[a] ^= (a < x) ∧ ⋀_r t[a,r]`: the witness proves `x` composite
//! 5. `g ^= 1`, then `g ^= (⋁_a c[a]) ∨ (no witness ran)`
//! 6. phase `−1` when `g = 0`
//! 7. stages 5 to 1 undone in reverse

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{mul_mod, pow_mod, PrimeTable, WitnessSet};
use crate::qstate::QuantumState;

/// One `(a, r)` test: the exponentiation register and its test ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSlot {
    pub r: u32,
    pub value: u64,
    /// 0 when the slot found probable-prime evidence.
    pub test: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub a: u64,
    /// `a < x`: the guard let this witness run.
    pub executed: bool,
    pub slots: Vec<TestSlot>,
    /// 1 when this witness proves `x` composite.
    pub carrier: u8,
}

/// Register contents at the marking point, plus the restoration check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleTranscript {
    pub x: u64,
    pub n: u32,
    pub d: u64,
    pub s: u32,
    pub witnesses: Vec<WitnessRecord>,
    pub global: u8,
    pub phase_flip: bool,
    /// Every ancilla equals its initial value after uncomputation.
    pub restored: bool,
    /// No witness passed the guard; the verdict defaults to composite.
    pub all_skipped: bool,
    /// Modular multiplications spent in the compute half.
    pub mulmods: u64,
}

impl OracleTranscript {
    pub fn witness_values(&self) -> Vec<u64> {
        self.witnesses.iter().map(|w| w.a).collect()
    }
}

/// Register file for one basis state. Slot `(k, r)` lives at
/// `k * slots_per_witness + r`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Registers {
    d: u64,
    s: u32,
    values: Vec<u64>,
    tests: Vec<u8>,
    carriers: Vec<u8>,
    global: u8,
}

impl Registers {
    fn initial(witnesses: usize, slots: usize) -> Self {
        Registers {
            d: 0,
            s: 0,
            values: vec![0; witnesses * slots],
            tests: vec![1; witnesses * slots],
            carriers: vec![0; witnesses],
            global: 1,
        }
    }
}

/// The `a < x` control; a zero base never runs.
fn guard(a: u64, x: u64) -> bool {
    a >= 1 && a < x
}

struct Pipeline<'a> {
    x: u64,
    witnesses: &'a [u64],
    slots: usize,
    mulmods: u64,
}

impl Pipeline<'_> {
    fn active(&self, k: usize, r: usize, s: u32) -> bool {
        guard(self.witnesses[k], self.x) && (r as u32) < s
    }

    fn decompose(&self, reg: &mut Registers) {
        let tz = (self.x - 1).trailing_zeros();
        reg.d ^= (self.x - 1) >> tz;
        reg.s ^= tz;
    }

    fn exponentiate(&mut self, reg: &mut Registers) {
        let (x, d, s) = (self.x, reg.d, reg.s);
        for k in 0..self.witnesses.len() {
            if !self.active(k, 0, s) {
                continue;
            }
            let mut v = pow_mod(self.witnesses[k], d, x);
            self.mulmods += 2 * (64 - d.leading_zeros() as u64);
            for r in 0..self.slots {
                if !self.active(k, r, s) {
                    break;
                }
                if r > 0 {
                    v = mul_mod(v, v, x);
                    self.mulmods += 1;
                }
                reg.values[k * self.slots + r] ^= v;
            }
        }
    }

    fn mark_tests(&self, reg: &mut Registers) {
        let x = self.x;
        for k in 0..self.witnesses.len() {
            for r in 0..self.slots {
                if !self.active(k, r, reg.s) {
                    continue;
                }
                let i = k * self.slots + r;
                let v = reg.values[i];
                let evidence = v == x - 1 || (r == 0 && v == 1);
                reg.tests[i] ^= evidence as u8;
            }
        }
    }

    fn carry(&self, reg: &mut Registers) {
        for k in 0..self.witnesses.len() {
            let ran = guard(self.witnesses[k], self.x);
            let all_ones = reg.tests[k * self.slots..(k + 1) * self.slots]
                .iter()
                .all(|&t| t == 1);
            reg.carriers[k] ^= (ran && all_ones) as u8;
        }
    }

    fn globalize(&self, reg: &mut Registers) {
        let any_ran = self.witnesses.iter().any(|&a| guard(a, self.x));
        let composite = reg.carriers.contains(&1) || !any_ran;
        reg.global ^= 1;
        reg.global ^= composite as u8;
    }

    fn compute(&mut self, reg: &mut Registers) {
        self.decompose(reg);
        self.exponentiate(reg);
        self.mark_tests(reg);
        self.carry(reg);
        self.globalize(reg);
    }

    fn uncompute(&mut self, reg: &mut Registers) {
        self.globalize(reg);
        self.carry(reg);
        self.mark_tests(reg);
        let saved = self.mulmods;
        self.exponentiate(reg);
        self.mulmods = saved;
        self.decompose(reg);
    }
}

/// Runs the oracle on `|x⟩` for an odd `3 ≤ x < 2ⁿ`.
pub fn pipeline(x: u64, ws: &WitnessSet, n: u32) -> Result<OracleTranscript> {
    if x.is_multiple_of(2) {
        return Err(Error::Domain(format!("oracle input must be odd, got {x}")));
    }
    if !(2..=63).contains(&n) || x < 3 || x >= 1u64 << n {
        return Err(Error::Range(format!("oracle input {x} outside [3, 2^{n})")));
    }
    let witnesses = ws.witnesses_for(x);
    // s ≤ n − 1 for every x < 2ⁿ
    let slots = (n - 1) as usize;
    let mut p = Pipeline { x, witnesses: &witnesses, slots, mulmods: 0 };
    let initial = Registers::initial(witnesses.len(), slots);
    let mut reg = initial.clone();

    p.compute(&mut reg);
    let marked = reg.clone();
    let phase_flip = reg.global == 0;
    p.uncompute(&mut reg);

    let records = witnesses
        .iter()
        .enumerate()
        .map(|(k, &a)| WitnessRecord {
            a,
            executed: guard(a, x),
            slots: (0..slots)
                .filter(|&r| p.active(k, r, marked.s))
                .map(|r| TestSlot {
                    r: r as u32,
                    value: marked.values[k * slots + r],
                    test: marked.tests[k * slots + r],
                })
                .collect(),
            carrier: marked.carriers[k],
        })
        .collect::<Vec<_>>();

    Ok(OracleTranscript {
        x,
        n,
        d: marked.d,
        s: marked.s,
        all_skipped: records.iter().all(|w| !w.executed),
        witnesses: records,
        global: marked.global,
        phase_flip,
        restored: reg == initial,
        mulmods: p.mulmods,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub x: u64,
    pub expected: bool,
    pub got: bool,
    pub witnesses: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub n: u32,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
    pub all_restored: bool,
    /// Inputs where the guard skipped every witness.
    pub all_skipped: Vec<u64>,
}

impl EquivalenceReport {
    /// CSV with header `x,expected,got,witnesses`; witnesses are `;`-joined.
    pub fn mismatch_csv(&self) -> String {
        let mut out = String::from("x,expected,got,witnesses\n");
        let word = |b: bool| if b { "prime" } else { "composite" };
        for m in &self.mismatches {
            let ws: Vec<String> = m.witnesses.iter().map(u64::to_string).collect();
            out.push_str(&format!(
                "{},{},{},{}\n",
                m.x,
                word(m.expected),
                word(m.got),
                ws.join(";")
            ));
        }
        out
    }
}

pub const MAX_SCAN_BITS: u32 = 20;

/// Compares the oracle's phase flip with the sieve for every odd `x < 2ⁿ`.
pub fn oracle_equivalence_scan(n: u32, ws: &WitnessSet, table: &PrimeTable) -> Result<EquivalenceReport> {
    if !(2..=MAX_SCAN_BITS).contains(&n) {
        return Err(Error::Capacity(format!("scan width {n} outside [2, {MAX_SCAN_BITS}]")));
    }
    if table.limit() < 1u64 << n {
        return Err(Error::Capacity(format!("prime table limit {} below 2^{n}", table.limit())));
    }
    let inputs: Vec<u64> = (3..1u64 << n).step_by(2).collect();
    let transcripts: Vec<OracleTranscript> = inputs
        .par_iter()
        .map(|&x| pipeline(x, ws, n))
        .collect::<Result<_>>()?;
    let mut report = EquivalenceReport {
        n,
        checked: transcripts.len() as u64,
        mismatches: Vec::new(),
        all_restored: true,
        all_skipped: Vec::new(),
    };
    for t in &transcripts {
        let expected = table.is_prime(t.x);
        if t.phase_flip != expected {
            report.mismatches.push(Mismatch {
                x: t.x,
                expected,
                got: t.phase_flip,
                witnesses: t.witness_values(),
            });
        }
        report.all_restored &= t.restored;
        if t.all_skipped {
            report.all_skipped.push(t.x);
        }
    }
    Ok(report)
}

/// Sign flip through the oracle on every odd `x ≥ 3`; even states and `|1⟩`
/// pass unchanged.
pub fn apply_pipeline_oracle(state: &mut QuantumState, ws: &WitnessSet) -> Result<()> {
    let n = state.n();
    if n < 2 {
        return Err(Error::Range("oracle needs at least 2 qubits".into()));
    }
    let flips: Vec<bool> = (0..state.dim() as u64)
        .into_par_iter()
        .map(|x| {
            if x < 3 || x % 2 == 0 {
                Ok(false)
            } else {
                pipeline(x, ws, n).map(|t| t.phase_flip)
            }
        })
        .collect::<Result<_>>()?;
    for (a, flip) in state.amplitudes_mut().iter_mut().zip(flips) {
        if flip {
            *a = -*a;
        }
    }
    Ok(())
}

/// [`apply_pipeline_oracle`] plus the controlled flip restoring `|2⟩`.
pub fn apply_full_primality_oracle(state: &mut QuantumState, ws: &WitnessSet) -> Result<()> {
    apply_pipeline_oracle(state, ws)?;
    let a = &mut state.amplitudes_mut()[2];
    *a = -*a;
    Ok(())
}

/// Operation counts in units of elementary reversible gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateBudget {
    pub n: u32,
    /// Witness cap n².
    pub witnesses: u64,
    /// Exponentiation tests per witness, at most n.
    pub tests_per_witness: u64,
    /// Cost of one modular exponentiation test, n³.
    pub modexp_ops_per_test: u64,
    /// n² · n · n³ = n⁶.
    pub total: f64,
    /// The seven deterministic witnesses: 7 · n · n³.
    pub practical_total: f64,
}

pub fn gate_budget(n: u32) -> Result<GateBudget> {
    if n < 2 {
        return Err(Error::Domain(format!("budget needs n >= 2, got {n}")));
    }
    let nn = n as u64;
    let witnesses = nn * nn;
    let per_test = nn * nn * nn;
    Ok(GateBudget {
        n,
        witnesses,
        tests_per_witness: nn,
        modexp_ops_per_test: per_test,
        total: witnesses as f64 * nn as f64 * per_test as f64,
        practical_total: crate::ntheory::DETERMINISTIC_WITNESSES.len() as f64 * nn as f64 * per_test as f64,
    })
}
