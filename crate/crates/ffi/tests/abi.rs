use std::ffi::CStr;
use std::ptr;

use primeq_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe {
        pq_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn table(limit: u64) -> *mut PqPrimeTable {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { pq_prime_table_new(limit, &mut t) }, PqStatus::Ok);
    assert!(!t.is_null());
    t
}

#[test]
fn table_queries() {
    let t = table(1 << 12);
    unsafe {
        assert_eq!(pq_prime_table_limit(t), 4096);
        let mut v = 0;
        assert_eq!(pq_pi(t, 100, &mut v), PqStatus::Ok);
        assert_eq!(v, 25);
        assert_eq!(pq_pi_ab(t, 4, 3, 100, &mut v), PqStatus::Ok);
        assert_eq!(v, 13);
        assert_eq!(pq_pi(t, 5000, &mut v), PqStatus::Range);
        assert!(!last_error().is_empty());
        assert_eq!(pq_pi_ab(t, 4, 2, 100, &mut v), PqStatus::Domain);
        assert_eq!(pq_pi(ptr::null(), 10, &mut v), PqStatus::NullPointer);
        assert_eq!(pq_pi(t, 10, ptr::null_mut()), PqStatus::NullPointer);
        pq_prime_table_free(t);
        pq_prime_table_free(ptr::null_mut());
    }
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { pq_prime_table_new(1, &mut t) }, PqStatus::Capacity);
    assert!(t.is_null());
}

#[test]
fn primality() {
    let mut b = false;
    unsafe {
        assert_eq!(pq_is_prime(2047, ptr::null(), 0, &mut b), PqStatus::Ok);
        assert!(!b);
        let two = [2u64];
        assert_eq!(pq_is_prime(2047, two.as_ptr(), 1, &mut b), PqStatus::Ok);
        assert!(b);
        assert_eq!(pq_is_prime(17179869143, ptr::null(), 0, &mut b), PqStatus::Ok);
        assert!(b);
        assert_eq!(pq_is_prime(7, ptr::null(), 3, &mut b), PqStatus::NullPointer);
    }
}

#[test]
fn prime_state_observables() {
    let t = table(1 << 10);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pq_prime_state_new(3, t, false, &mut s), PqStatus::Ok);
        assert_eq!(pq_state_num_qubits(s), 3);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(pq_state_amplitude(s, 5, &mut re, &mut im), PqStatus::Ok);
        assert_eq!((re, im), (0.5, 0.0));
        assert_eq!(pq_state_amplitude(s, 8, &mut re, &mut im), PqStatus::Range);
        let mut v = 0.0;
        assert_eq!(pq_entanglement_entropy(s, 1, &mut v), PqStatus::Ok);
        assert!((v - 0.562335144618).abs() < 1e-9);
        assert_ne!(pq_entanglement_entropy(s, 3, &mut v), PqStatus::Ok);
        assert_eq!(pq_pauli_expectation(s, 1, PqPauli::Z, &mut v), PqStatus::Ok);
        assert!((v + 0.5).abs() < 1e-12);
        assert_eq!(pq_pauli_expectation(s, 1, PqPauli::X, &mut v), PqStatus::Ok);
        assert!((v - 0.5).abs() < 1e-12);
        assert_eq!(pq_two_site_flip(s, 1, 2, &mut v), PqStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        pq_state_free(s);

        assert_eq!(pq_prime_state_new(3, t, true, &mut s), PqStatus::Ok);
        assert_eq!(pq_state_amplitude(s, 2, &mut re, &mut im), PqStatus::Ok);
        assert_eq!(re, 0.0);
        pq_state_free(s);
        assert_eq!(pq_prime_state_new(11, t, false, &mut s), PqStatus::Capacity);
        pq_prime_table_free(t);
    }
}

#[test]
fn grover_and_counting() {
    let t = table(1 << 12);
    unsafe {
        let mut r = 0;
        assert_eq!(pq_optimal_iterations(1024, 172, &mut r), PqStatus::Ok);
        assert_eq!(r, 1);
        assert_eq!(pq_optimal_iterations(8, 7, &mut r), PqStatus::Domain);
        let mut ov = 0.0;
        assert_eq!(pq_grover_overlap(10, t, 1, &mut ov), PqStatus::Ok);
        assert!((ov - pq_pg_analytic(1024, 172, 1)).abs() < 1e-10);
        let mut e = PqCountEstimate::default();
        assert_eq!(pq_count_estimate(1024, 172, 10, 5, &mut e), PqStatus::Ok);
        assert_eq!(e.oracle_calls, 1023);
        assert!(e.bound > 0.0 && e.m_tilde >= 0.0);
        assert_eq!(pq_count_estimate(1024, 172, 0, 5, &mut e), PqStatus::Capacity);
        pq_prime_table_free(t);
    }
}

#[test]
fn oracle() {
    let (mut flip, mut restored) = (false, false);
    unsafe {
        assert_eq!(pq_oracle_phase_flip(7, 4, ptr::null(), 0, &mut flip, &mut restored), PqStatus::Ok);
        assert!(flip && restored);
        let two = [2u64];
        assert_eq!(pq_oracle_phase_flip(2047, 12, two.as_ptr(), 1, &mut flip, &mut restored), PqStatus::Ok);
        assert!(flip && restored);
        assert_eq!(pq_oracle_phase_flip(2047, 12, ptr::null(), 0, &mut flip, &mut restored), PqStatus::Ok);
        assert!(!flip);
        assert_eq!(pq_oracle_phase_flip(8, 4, ptr::null(), 0, &mut flip, &mut restored), PqStatus::Domain);
        assert_eq!(pq_oracle_phase_flip(17, 4, ptr::null(), 0, &mut flip, &mut restored), PqStatus::Range);
    }
}

#[test]
fn errors_are_thread_local() {
    let mut v = 0;
    unsafe { pq_optimal_iterations(8, 0, &mut v) };
    assert!(!last_error().is_empty());
    std::thread::spawn(|| assert!(last_error().is_empty())).join().unwrap();
    unsafe { pq_optimal_iterations(8, 2, &mut v) };
    assert!(last_error().is_empty());
    let mut tiny = [1 as std::ffi::c_char; 4];
    unsafe { pq_optimal_iterations(8, 0, &mut v) };
    let full = unsafe { pq_last_error_message(tiny.as_mut_ptr(), tiny.len()) };
    assert!(full > 3);
    assert_eq!(tiny[3], 0);
}
