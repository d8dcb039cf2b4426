//! Dense statevectors and the reduced-state quantities computed from them.
//!
//! Basis index `x` encodes `|x⟩` with qubit `i` holding the bit of weight
//! `2^i`, so qubit 0 is the least significant ("last") qubit. A bipartition
//! into the "first `l`" qubits keeps the `l` most significant bits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_QUBITS: u32 = 1;
pub const MAX_QUBITS: u32 = 24;
pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Eigenvalues at or below this are dropped from `λ ln λ`.
pub const EIGEN_CLAMP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: u32,
    amp: Vec<Complex64>,
}

fn check_qubits(n: u32) -> Result<()> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(Error::Capacity(format!(
            "{n} qubits outside [{MIN_QUBITS}, {MAX_QUBITS}]"
        )));
    }
    Ok(())
}

impl QuantumState {
    /// Wraps an amplitude vector; it must have length 2ⁿ and unit norm.
    pub fn from_amplitudes(n: u32, amp: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        if amp.len() != 1usize << n {
            return Err(Error::Validation(format!(
                "expected {} amplitudes, got {}",
                1usize << n,
                amp.len()
            )));
        }
        let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("state norm {norm} is not 1")));
        }
        Ok(QuantumState { n, amp })
    }

    /// Unnormalised input is rescaled; a zero vector is rejected.
    pub fn normalized(n: u32, mut amp: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Validation("zero vector".into()));
        }
        amp.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(n, amp)
    }

    pub fn basis(n: u32, x: u64) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if x as usize >= dim {
            return Err(Error::Range(format!("basis index {x} needs more than {n} qubits")));
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); dim];
        amp[x as usize] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { n, amp })
    }

    /// `|ψ⟩ = H^{⊗n}|0⟩`.
    pub fn uniform(n: u32) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(QuantumState { n, amp: vec![a; dim] })
    }

    /// Equal-weight superposition over the given distinct basis indices.
    pub fn equal_superposition<I: IntoIterator<Item = u64>>(n: u32, support: I) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut amp = vec![Complex64::new(0.0, 0.0); dim];
        let mut count = 0usize;
        for x in support {
            let slot = amp
                .get_mut(x as usize)
                .ok_or_else(|| Error::Range(format!("index {x} outside {n} qubits")))?;
            if slot.re != 0.0 {
                return Err(Error::Validation(format!("index {x} repeated")));
            }
            *slot = Complex64::new(1.0, 0.0);
            count += 1;
        }
        if count == 0 {
            return Err(Error::Validation("empty support".into()));
        }
        let a = 1.0 / (count as f64).sqrt();
        amp.iter_mut().for_each(|v| *v *= a);
        Ok(QuantumState { n, amp })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    /// Mutable access for in-place gate passes; callers keep the norm.
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::Validation("qubit counts differ".into()));
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Indices with a nonzero amplitude.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.amp
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(x, _)| x as u64)
    }

    fn check_qubit(&self, i: u32) -> Result<()> {
        if i >= self.n {
            return Err(Error::Range(format!("qubit {i} outside 0..{}", self.n)));
        }
        Ok(())
    }
}

/// Hermitian, unit-trace matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Validation(format!(
                "{} entries do not form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let rho = DensityMatrix { dim, entries };
        for r in 0..dim {
            for c in r..dim {
                let dev = (rho.get(r, c) - rho.get(c, r).conj()).norm();
                if dev > HERMITIAN_TOL {
                    return Err(Error::Validation(format!(
                        "not Hermitian at ({r}, {c}): deviation {dev:e}"
                    )));
                }
            }
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!("trace {tr} is not 1")));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Spectrum in ascending order. Real matrices take the real symmetric
    /// path, which is what every Prime-state reduction produces.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = if self.entries.iter().all(|z| z.im == 0.0) {
            DMatrix::from_row_iterator(self.dim, self.dim, self.entries.iter().map(|z| z.re))
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect()
        } else {
            DMatrix::from_row_iterator(self.dim, self.dim, self.entries.iter().copied())
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect()
        };
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Accumulates `Σ_k A[r][k]·conj(A[r'][k])` where `index(r, k)` locates the
/// amplitude. Only nonzero entries of each column contribute.
fn gram<F: Fn(usize, usize) -> usize>(
    amp: &[Complex64],
    rows: usize,
    cols: usize,
    index: F,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * rows];
    let mut nz: Vec<(usize, Complex64)> = Vec::with_capacity(rows);
    for k in 0..cols {
        nz.clear();
        nz.extend(
            (0..rows)
                .map(|r| (r, amp[index(r, k)]))
                .filter(|(_, a)| a.re != 0.0 || a.im != 0.0),
        );
        for &(r, a) in &nz {
            for &(r2, b) in &nz {
                out[r * rows + r2] += a * b.conj();
            }
        }
    }
    out
}

/// ρ(l): trace out all but the `l` most significant qubits.
pub fn reduced_density(state: &QuantumState, l: u32) -> Result<DensityMatrix> {
    let n = state.n;
    if l < 1 || l >= n {
        return Err(Error::Range(format!("cut l = {l} outside 1..{n}")));
    }
    let rows = 1usize << l;
    let cols = 1usize << (n - l);
    let entries = gram(&state.amp, rows, cols, |r, k| r * cols + k);
    DensityMatrix::new(rows, entries)
}

/// Reduced state of the `k` least significant qubits, the complement of
/// `reduced_density(state, n − k)`.
pub fn reduced_density_low(state: &QuantumState, k: u32) -> Result<DensityMatrix> {
    let n = state.n;
    if k < 1 || k >= n {
        return Err(Error::Range(format!("cut k = {k} outside 1..{n}")));
    }
    let rows = 1usize << k;
    let entries = gram(&state.amp, rows, 1usize << (n - k), |r, hi| (hi << k) | r);
    DensityMatrix::new(rows, entries)
}

/// ρ⁽ⁱ⁾: the 2×2 reduced state of qubit `i`.
pub fn single_qubit_density(state: &QuantumState, i: u32) -> Result<DensityMatrix> {
    state.check_qubit(i)?;
    let bit = 1usize << i;
    let (mut r00, mut r11) = (0.0, 0.0);
    let mut r01 = Complex64::new(0.0, 0.0);
    for x in (0..state.dim()).filter(|x| x & bit == 0) {
        let a0 = state.amp[x];
        let a1 = state.amp[x | bit];
        r00 += a0.norm_sqr();
        r11 += a1.norm_sqr();
        r01 += a0 * a1.conj();
    }
    DensityMatrix::new(
        2,
        vec![Complex64::new(r00, 0.0), r01, r01.conj(), Complex64::new(r11, 0.0)],
    )
}

/// `S(ρ) = −Σ λ ln λ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let ev = rho.eigenvalues();
    if let Some(&min) = ev.first() {
        if min < EIGEN_FLOOR {
            return Err(Error::Validation(format!(
                "negative eigenvalue {min:e}, matrix is not PSD"
            )));
        }
    }
    Ok(-ev
        .iter()
        .filter(|&&l| l > EIGEN_CLAMP)
        .map(|&l| l * l.ln())
        .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyRecord {
    pub n: u32,
    pub l: u32,
    pub entropy_nats: f64,
    pub entropy_bits: f64,
}

impl EntropyRecord {
    pub fn new(n: u32, l: u32, nats: f64) -> Self {
        EntropyRecord {
            n,
            l,
            entropy_nats: nats,
            entropy_bits: nats / std::f64::consts::LN_2,
        }
    }
}

/// Entanglement entropy across the cut after the first `l` qubits. The
/// spectrum comes from whichever side of the cut is smaller.
pub fn entanglement_entropy(state: &QuantumState, l: u32) -> Result<EntropyRecord> {
    let n = state.n;
    if l < 1 || l >= n {
        return Err(Error::Range(format!("cut l = {l} outside 1..{n}")));
    }
    let rho = if l <= n - l {
        reduced_density(state, l)?
    } else {
        reduced_density_low(state, n - l)?
    };
    Ok(EntropyRecord::new(n, l, von_neumann_entropy(&rho)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// `⟨σ^a_i⟩ = Tr(ρ⁽ⁱ⁾ σ^a)` with `σᶻ|0⟩ = |0⟩`.
pub fn pauli_expectation(state: &QuantumState, i: u32, axis: PauliAxis) -> Result<f64> {
    let rho = single_qubit_density(state, i)?;
    Ok(match axis {
        PauliAxis::Z => rho.get(0, 0).re - rho.get(1, 1).re,
        PauliAxis::X => 2.0 * rho.get(0, 1).re,
        PauliAxis::Y => 2.0 * rho.get(1, 0).im,
    })
}

/// `⟨σˣ_i σˣ_j + σʸ_i σʸ_j⟩`. The operator is `2(|01⟩⟨10| + |10⟩⟨01|)` on
/// the pair, so only basis states differing in exactly bits `i` and `j`
/// with opposite values couple.
pub fn two_site_flip_expectation(state: &QuantumState, i: u32, j: u32) -> Result<f64> {
    state.check_qubit(i)?;
    state.check_qubit(j)?;
    if i == j {
        return Err(Error::Range("flip operator needs two distinct qubits".into()));
    }
    let (bi, bj) = (1usize << i, 1usize << j);
    let sum: f64 = (0..state.dim())
        .filter(|x| x & bi == 0 && x & bj != 0)
        .map(|x| (state.amp[x].conj() * state.amp[x ^ bi ^ bj]).re)
        .sum();
    Ok(4.0 * sum)
}
