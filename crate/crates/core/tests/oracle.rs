mod common;

use common::trial_division;
use num_complex::Complex64;
use primeq::grover::oracle_sign_flip;
use primeq::mr_oracle::{apply_full_primality_oracle, apply_pipeline_oracle, gate_budget, oracle_equivalence_scan, pipeline};
use primeq::ntheory::{is_prime, sieve, WitnessSet};
use primeq::qstate::QuantumState;

fn witness_sets() -> Vec<WitnessSet> {
    vec![
        WitnessSet::deterministic(),
        WitnessSet::custom(vec![2]),
        WitnessSet::custom(vec![3, 5]),
        WitnessSet::custom(vec![101, 1000, 5000]),
        WitnessSet::custom(vec![1, 4096]),
        WitnessSet::probabilistic(3, 9),
    ]
}

#[test]
fn exhaustive_transcript_properties() {
    for ws in witness_sets() {
        for n in 2..=14u32 {
            for x in (3..1u64 << n).step_by(2) {
                let tr = pipeline(x, &ws, n).unwrap();
                assert!(tr.restored, "x={x} n={n}");
                assert_eq!((1u64 << tr.s) * tr.d, x - 1);
                for w in &tr.witnesses {
                    assert_eq!(w.executed, w.a >= 1 && w.a < x);
                    if !w.executed {
                        // guard soundness
                        assert!(w.slots.iter().all(|s| s.test == 1), "x={x} a={}", w.a);
                        assert_eq!(w.carrier, 0);
                    } else if trial_division(x) {
                        // marking completeness
                        assert!(w.slots.iter().any(|s| s.test == 0), "x={x} a={}", w.a);
                        assert_eq!(w.carrier, 0);
                    }
                }
                let executed = WitnessSet::custom(tr.witness_values());
                let expected = !tr.all_skipped && is_prime(x, &executed);
                assert_eq!(tr.phase_flip, expected, "x={x} n={n} ws={:?}", tr.witness_values());
                assert_eq!(tr.global == 0, tr.phase_flip);
            }
        }
    }
}

#[test]
fn scans_with_deterministic_witnesses_are_clean() {
    let t = sieve(1 << 16).unwrap();
    for n in [4, 9, 16] {
        let r = oracle_equivalence_scan(n, &WitnessSet::deterministic(), &t).unwrap();
        assert!(r.mismatches.is_empty() && r.all_restored);
        assert_eq!(r.checked, (1u64 << (n - 1)) - 1);
    }
}

#[test]
fn pipeline_oracle_on_states() {
    let t = sieve(1 << 14).unwrap();
    let ws = WitnessSet::deterministic();
    for n in 2..=14u32 {
        let dim = 1usize << n;
        let amp: Vec<Complex64> = (0..dim).map(|x| Complex64::new(1.0 + x as f64, 0.5 - (x % 3) as f64)).collect();
        let start = QuantumState::normalized(n, amp).unwrap();

        let mut odd = start.clone();
        apply_pipeline_oracle(&mut odd, &ws).unwrap();
        let mut reference = start.clone();
        oracle_sign_flip(&mut reference, |x| x % 2 == 1 && t.is_prime(x));
        assert_eq!(odd, reference, "n = {n}");

        let mut full = start.clone();
        apply_full_primality_oracle(&mut full, &ws).unwrap();
        let mut reference = start.clone();
        oracle_sign_flip(&mut reference, |x| t.is_prime(x));
        assert_eq!(full, reference, "n = {n}");

        apply_full_primality_oracle(&mut full, &ws).unwrap();
        assert_eq!(full, start);
    }
}

#[test]
fn budget_scaling() {
    for n in 4..=32u32 {
        let small = gate_budget(n).unwrap();
        let big = gate_budget(2 * n).unwrap();
        assert!(big.total / small.total <= 64.0 + 1e-9);
        assert!(small.practical_total / (n as f64).powi(4) <= 7.0);
    }
    assert!(gate_budget(10).unwrap().total <= 1e6);
}
