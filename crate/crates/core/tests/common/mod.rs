//! Reference implementations that share no code with the library.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn trial_division(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x.is_multiple_of(2) {
        return x == 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Plain Eratosthenes over bytes.
pub fn byte_sieve(limit: usize) -> Vec<bool> {
    let mut p = vec![true; limit.max(2)];
    p[0] = false;
    p[1] = false;
    let mut i = 2;
    while i * i < limit {
        if p[i] {
            let mut j = i * i;
            while j < limit {
                p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    p.truncate(limit);
    p
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

/// π(x) by the Lucy–Hedgehog recursion, O(x^{3/4}).
pub fn lucy_pi(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let r = isqrt(x);
    // small[v] = S(v) for v ≤ r, large[i] = S(x / i) for i ≤ r
    let mut small: Vec<u64> = (0..=r).map(|v| v.saturating_sub(1)).collect();
    let mut large: Vec<u64> = (0..=r).map(|i| if i == 0 { 0 } else { x / i - 1 }).collect();
    for p in 2..=r {
        if small[p as usize] == small[p as usize - 1] {
            continue;
        }
        let sp = small[p as usize - 1];
        let p2 = p * p;
        let imax = r.min(x / p2);
        for i in 1..=imax {
            let d = i * p;
            let v = if d <= r { large[d as usize] } else { small[(x / d) as usize] };
            large[i as usize] -= v - sp;
        }
        if p2 <= r {
            for v in (p2..=r).rev() {
                small[v as usize] -= small[(v / p) as usize] - sp;
            }
        }
    }
    large[1]
}

/// li(x) − li(2) from Ramanujan's series for li(x).
pub fn li_offset_series(x: f64) -> f64 {
    const GAMMA: f64 = 0.577_215_664_901_532_9;
    const LI2: f64 = 1.045_163_780_117_493;
    let lx = x.ln();
    let mut sum = 0.0;
    let mut fact_pow = 1.0; // (ln x)^n / (n! 2^{n−1})
    let mut inner = 0.0; // Σ_{k ≤ ⌊(n−1)/2⌋} 1/(2k+1)
    for n in 1..400 {
        fact_pow *= lx / n as f64;
        if n > 1 {
            fact_pow /= 2.0;
        }
        if (n - 1) % 2 == 0 {
            inner += 1.0 / (n - 1 + 1) as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * fact_pow * inner;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() && n > 10 {
            break;
        }
    }
    GAMMA + lx.ln() + x.sqrt() * sum - LI2
}

/// Statevector of the Prime state from trial division.
pub fn prime_amplitudes(n: u32) -> Vec<f64> {
    let dim = 1usize << n;
    let primes: Vec<usize> = (0..dim).filter(|&x| trial_division(x as u64)).collect();
    let a = 1.0 / (primes.len() as f64).sqrt();
    let mut v = vec![0.0; dim];
    for p in primes {
        v[p] = a;
    }
    v
}

/// Phase estimation over the full register: t control qubits in uniform
/// superposition, controlled `G^k` on the n-qubit uniform state, inverse DFT.
/// Returns `P(y)` for every y.
pub fn brute_force_counting(n: u32, t: u32, marked: impl Fn(usize) -> bool) -> Vec<f64> {
    let dim = 1usize << n;
    let big_t = 1usize << t;
    let mut psi = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    // column k: G^k |ψ⟩
    let mut columns = Vec::with_capacity(big_t);
    for _ in 0..big_t {
        columns.push(psi.clone());
        for (x, a) in psi.iter_mut().enumerate() {
            if marked(x) {
                *a = -*a;
            }
        }
        let mean: Complex64 = psi.iter().sum::<Complex64>() / dim as f64;
        for a in psi.iter_mut() {
            *a = mean * 2.0 - *a;
        }
    }
    let norm = 1.0 / big_t as f64;
    (0..big_t)
        .map(|y| {
            let mut p = 0.0;
            for x in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, col) in columns.iter().enumerate() {
                    let phase = -2.0 * PI * ((k * y) % big_t) as f64 / big_t as f64;
                    acc += col[x] * Complex64::from_polar(1.0, phase);
                }
                p += (acc * norm).norm_sqr();
            }
            p
        })
        .collect()
}
