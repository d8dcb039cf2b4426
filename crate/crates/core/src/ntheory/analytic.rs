//! Smooth approximations: the offset logarithmic integral, the twin-prime
//! constant and the normalised fluctuation of π(x).

use std::sync::OnceLock;

use super::sieve::{sieve, PrimeTable};
use crate::error::{Error, Result};

// 15-point Kronrod nodes on [0, 1]; the embedded 7-point Gauss rule uses the
// odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]` to relative tolerance `rel_tol`.
fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut stack = vec![(a, b, 0u32)];
    let (whole, _) = gauss_kronrod(f, a, b);
    let target = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gauss_kronrod(f, lo, hi);
        let share = target * (hi - lo) / (b - a);
        if err <= share || depth >= 40 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Offset logarithmic integral `Li(x) = ∫₂ˣ dt / ln t`.
///
/// The range is split at powers of two so each piece is smooth on its own
/// scale; each piece is integrated adaptively.
pub fn li(x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::Domain(format!("Li(x) needs x >= 2, got {x}")));
    }
    let f = |t: f64| 1.0 / t.ln();
    let mut total = 0.0;
    let mut lo = 2.0;
    while lo < x {
        let hi = (2.0 * lo).min(x);
        total += integrate(&f, lo, hi, 1e-13);
        lo = hi;
    }
    Ok(total)
}

/// `|π(x) − Li(x)| / (√x · ln x)`.
pub fn rh_residual(table: &PrimeTable, x: u64) -> Result<f64> {
    let pi = table.pi(x)? as f64;
    if x < 2 {
        return Err(Error::Domain("residual needs x >= 2".into()));
    }
    let xf = x as f64;
    Ok((pi - li(xf)?).abs() / (xf.sqrt() * xf.ln()))
}

/// Euler-product cutoff. The tail Σ_{p > P} 1/(p − 1)² is close to
/// 1/(P ln P) ≈ 7·10⁻⁹ here.
pub const TWIN_CONSTANT_CUTOFF: u64 = 1 << 23;

/// Twin-prime constant `C₂ = ∏_{odd p} (1 − 1/(p − 1)²)`, evaluated once.
pub fn twin_prime_constant() -> f64 {
    static C2: OnceLock<f64> = OnceLock::new();
    *C2.get_or_init(|| {
        let table = sieve(TWIN_CONSTANT_CUTOFF).expect("cutoff within sieve range");
        table
            .primes()
            .skip(1)
            .map(|p| {
                let q = (p - 1) as f64;
                1.0 - 1.0 / (q * q)
            })
            .product()
    })
}

/// Hardy–Littlewood twin-pair estimate `2 C₂ x / (ln x)²`.
pub fn hl_twin_estimate(x: f64) -> Result<f64> {
    if !(x >= 10.0) {
        return Err(Error::Domain(format!("twin estimate needs x >= 10, got {x}")));
    }
    let l = x.ln();
    Ok(2.0 * twin_prime_constant() * x / (l * l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn li_basics() {
        assert_eq!(li(2.0).unwrap(), 0.0);
        assert!(matches!(li(1.5), Err(Error::Domain(_))));
        assert!(li(f64::NAN).is_err());
        let v = li(100.0).unwrap();
        assert!((v - 29.081).abs() < 1e-3, "{v}");
    }

    #[test]
    fn integrator_on_polynomial() {
        let v = integrate(&|t: f64| t * t * t, 0.0, 2.0, 1e-14);
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn twin_constant_ranges() {
        let c2 = twin_prime_constant();
        assert!(c2 > 0.66 && c2 < 0.6602, "{c2}");
        let mut prev = hl_twin_estimate(10.0).unwrap();
        for k in 1..200 {
            let v = hl_twin_estimate(10.0 + k as f64 * 7.5).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(hl_twin_estimate(9.0).is_err());
    }
}
