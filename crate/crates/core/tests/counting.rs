mod common;

use std::f64::consts::PI;

use common::{brute_force_counting, trial_division};
use primeq::qcount::{counting_distribution, estimate_many, rh_comparison_scan, success_frequency};
use primeq::ntheory::sieve;

fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn plane_distribution_matches_full_register() {
    for n in 2..=8u32 {
        let m = (0..1u64 << n).filter(|&x| trial_division(x)).count() as u64;
        for t in 1..=8u32 {
            let brute = brute_force_counting(n, t, |x| trial_division(x as u64));
            let plane = counting_distribution(1 << n, m, t).unwrap();
            let tv = total_variation(&brute, &plane.probs);
            assert!(tv < 1e-8, "n={n} t={t}: tv={tv}");
        }
    }
}

#[test]
fn arbitrary_marked_sets() {
    for (n, m) in [(5u32, 1u64), (6, 7), (6, 32), (7, 100), (4, 16)] {
        let brute = brute_force_counting(n, 6, |x| (x as u64) < m);
        let plane = counting_distribution(1 << n, m, 6).unwrap();
        assert!(total_variation(&brute, &plane.probs) < 1e-8, "n={n} m={m}");
    }
}

#[test]
fn success_floor_over_grid() {
    let t = sieve(1 << 12).unwrap();
    for n in [8u32, 10, 12] {
        let m = t.pi((1 << n) - 1).unwrap();
        for bits in [8u32, 10, 12] {
            let d = counting_distribution(1 << n, m, bits).unwrap();
            let f = success_frequency(&d, 10_000, (n * 100 + bits) as u64);
            assert!(f >= 8.0 / (PI * PI) - 0.02, "n={n} t={bits}: {f}");
            assert!(estimate_many(&d, 3, 1).iter().all(|e| e.oracle_calls == (1 << bits) - 1));
        }
    }
}

#[test]
fn rh_ordering() {
    let t = sieve(1 << 26).unwrap();
    for c in [2.0 * PI, 3.0 * PI, 10.0, 100.0] {
        for row in rh_comparison_scan(&t, 10, 26, c).unwrap() {
            assert!(row.qc_bound < row.rh_scale, "n={} c={c}", row.n);
            assert!(row.abs_err < row.rh_scale, "n={}", row.n);
        }
    }
}
