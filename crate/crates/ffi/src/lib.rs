//! C ABI over `primeq`. Objects cross the boundary as opaque handles that
//! the caller frees with the matching `*_free`. Every fallible call returns
//! a `PqStatus` and writes its result through an out-pointer; the message of
//! the last failure on the calling thread is available from
//! `pq_last_error_message`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use primeq::grover::{optimal_iterations, pg_analytic, run_grover};
use primeq::mr_oracle::pipeline;
use primeq::ntheory::{is_prime, pi_ab, sieve, PrimeTable, WitnessSet};
use primeq::prime_state::{build_odd_prime_state, build_prime_state};
use primeq::qcount::{counting_distribution, estimate_m};
use primeq::qstate::{entanglement_entropy, pauli_expectation, two_site_flip_expectation, PauliAxis, QuantumState};
use primeq::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqStatus {
    Ok = 0,
    NullPointer = 1,
    Capacity = 2,
    Domain = 3,
    Range = 4,
    WitnessGuard = 5,
    Validation = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqPauli {
    X = 0,
    Y = 1,
    Z = 2,
}

/// Sieved primality table.
pub struct PqPrimeTable(PrimeTable);

/// Dense statevector.
pub struct PqState(QuantumState);

/// One quantum-counting estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PqCountEstimate {
    pub y_observed: u64,
    pub m_tilde: f64,
    pub abs_err: f64,
    pub bound: f64,
    pub oracle_calls: u64,
    pub within_bound: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PqStatus {
    match e {
        Error::Capacity(_) => PqStatus::Capacity,
        Error::Domain(_) => PqStatus::Domain,
        Error::Range(_) => PqStatus::Range,
        Error::WitnessGuard { .. } => PqStatus::WitnessGuard,
        Error::Validation(_) => PqStatus::Validation,
        Error::Parse { .. } => PqStatus::Parse,
        Error::Io(_) => PqStatus::Io,
    }
}

/// Runs `f`, records any error and converts panics.
fn guarded<F: FnOnce() -> Result<(), PqStatus>>(f: F) -> PqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PqStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside primeq".into());
            PqStatus::Panic
        }
    }
}

fn lib<T>(r: primeq::Result<T>) -> Result<T, PqStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

fn null(what: &str) -> PqStatus {
    set_error(format!("{what} is null"));
    PqStatus::NullPointer
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), PqStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, PqStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn witness_set(ptr: *const u64, len: usize) -> Result<WitnessSet, PqStatus> {
    if len == 0 {
        return Ok(WitnessSet::deterministic());
    }
    if ptr.is_null() {
        return Err(null("witness array"));
    }
    Ok(WitnessSet::custom(std::slice::from_raw_parts(ptr, len).to_vec()))
}

/// Copies the last error message on this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pq_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Sieves every integer below `limit` (4 ≤ limit ≤ 2^34).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pq_prime_table_new(limit: u64, out: *mut *mut PqPrimeTable) -> PqStatus {
    guarded(|| {
        let t = lib(sieve(limit))?;
        write(out, Box::into_raw(Box::new(PqPrimeTable(t))))
    })
}

/// # Safety
/// `table` must come from `pq_prime_table_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pq_prime_table_free(table: *mut PqPrimeTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pq_prime_table_limit(table: *const PqPrimeTable) -> u64 {
    table.as_ref().map_or(0, |t| t.0.limit())
}

/// π(x), for x below the table limit.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_pi(table: *const PqPrimeTable, x: u64, out: *mut u64) -> PqStatus {
    guarded(|| {
        let t = deref(table, "table")?;
        write(out, lib(t.0.pi(x))?)
    })
}

/// π(x; a, b), primes p ≤ x with p ≡ b (mod a).
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_pi_ab(table: *const PqPrimeTable, a: u64, b: u64, x: u64, out: *mut u64) -> PqStatus {
    guarded(|| {
        let t = deref(table, "table")?;
        write(out, lib(pi_ab(&t.0, a, b, x))?)
    })
}

/// Miller–Rabin with the given witnesses; `count == 0` selects the
/// deterministic set {2, 3, 5, 7, 11, 13, 17}.
///
/// # Safety
/// `witnesses` must point to `count` values when `count > 0`; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_is_prime(x: u64, witnesses: *const u64, count: usize, out: *mut bool) -> PqStatus {
    guarded(|| {
        let ws = witness_set(witnesses, count)?;
        write(out, is_prime(x, &ws))
    })
}

/// Builds the Prime state on `n` qubits, without |2⟩ when `odd` is set.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_prime_state_new(
    n: u32,
    table: *const PqPrimeTable,
    odd: bool,
    out: *mut *mut PqState,
) -> PqStatus {
    guarded(|| {
        let t = deref(table, "table")?;
        let s = if odd { build_odd_prime_state(n, &t.0) } else { build_prime_state(n, &t.0) };
        write(out, Box::into_raw(Box::new(PqState(lib(s)?))))
    })
}

/// # Safety
/// `state` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pq_state_free(state: *mut PqState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pq_state_num_qubits(state: *const PqState) -> u32 {
    state.as_ref().map_or(0, |s| s.0.n())
}

/// # Safety
/// `state` must be a live handle; `re` and `im` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_state_amplitude(state: *const PqState, x: u64, re: *mut f64, im: *mut f64) -> PqStatus {
    guarded(|| {
        let s = deref(state, "state")?;
        let a = *s.0.amplitudes().get(x as usize).ok_or_else(|| {
            set_error(format!("basis index {x} outside the register"));
            PqStatus::Range
        })?;
        write(re, a.re)?;
        write(im, a.im)
    })
}

/// Entanglement entropy in nats across the cut after the first `l` qubits.
///
/// # Safety
/// `state` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_entanglement_entropy(state: *const PqState, l: u32, out: *mut f64) -> PqStatus {
    guarded(|| {
        let s = deref(state, "state")?;
        write(out, lib(entanglement_entropy(&s.0, l))?.entropy_nats)
    })
}

/// # Safety
/// `state` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_pauli_expectation(state: *const PqState, i: u32, axis: PqPauli, out: *mut f64) -> PqStatus {
    guarded(|| {
        let s = deref(state, "state")?;
        let axis = match axis {
            PqPauli::X => PauliAxis::X,
            PqPauli::Y => PauliAxis::Y,
            PqPauli::Z => PauliAxis::Z,
        };
        write(out, lib(pauli_expectation(&s.0, i, axis))?)
    })
}

/// `⟨X_i X_j + Y_i Y_j⟩`.
///
/// # Safety
/// `state` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_two_site_flip(state: *const PqState, i: u32, j: u32, out: *mut f64) -> PqStatus {
    guarded(|| {
        let s = deref(state, "state")?;
        write(out, lib(two_site_flip_expectation(&s.0, i, j))?)
    })
}

/// Grover iteration count for `m` marked items out of `big_n`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pq_optimal_iterations(big_n: u64, m: u64, out: *mut u64) -> PqStatus {
    guarded(|| write(out, lib(optimal_iterations(big_n, m))?))
}

/// `sin²((2R + 1) θ/2)`.
#[no_mangle]
pub extern "C" fn pq_pg_analytic(big_n: u64, m: u64, r: u64) -> f64 {
    pg_analytic(big_n, m, r)
}

/// Overlap `|⟨P_n|G^R|ψ⟩|²` from a statevector run.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pq_grover_overlap(n: u32, table: *const PqPrimeTable, r: u64, out: *mut f64) -> PqStatus {
    guarded(|| {
        let t = deref(table, "table")?;
        write(out, lib(run_grover(n, &t.0, r))?.overlap)
    })
}

/// Samples one quantum-counting estimate of `m` with a `t`-bit register.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pq_count_estimate(big_n: u64, m: u64, t: u32, seed: u64, out: *mut PqCountEstimate) -> PqStatus {
    guarded(|| {
        let d = lib(counting_distribution(big_n, m, t))?;
        let e = estimate_m(&d, seed);
        write(
            out,
            PqCountEstimate {
                y_observed: e.y_observed,
                m_tilde: e.m_tilde,
                abs_err: e.abs_err,
                bound: e.bound,
                oracle_calls: e.oracle_calls,
                within_bound: e.within_bound,
            },
        )
    })
}

/// Runs the reversible Miller–Rabin oracle on odd `x` in an `n`-bit register.
/// `count == 0` selects the deterministic witnesses.
///
/// # Safety
/// `witnesses` must point to `count` values when `count > 0`; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn pq_oracle_phase_flip(
    x: u64,
    n: u32,
    witnesses: *const u64,
    count: usize,
    phase_flip: *mut bool,
    restored: *mut bool,
) -> PqStatus {
    guarded(|| {
        let ws = witness_set(witnesses, count)?;
        let tr = lib(pipeline(x, &ws, n))?;
        write(phase_flip, tr.phase_flip)?;
        write(restored, tr.restored)
    })
}
