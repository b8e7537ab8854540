//! Statevector simulation of the QAOA circuit: a diagonal problem
//! Hamiltonian built from the bilinear coefficients, the uniform initial
//! state, problem/mixing unitaries, exact expectation values, and seeded
//! measurement sampling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::RealMatrix;
use crate::radius::{self, BitString, Rank1Delta};

/// Cap on simulated qubits; `2^24` amplitudes is already 256 MiB.
pub const MAX_QUBITS: usize = 24;

/// Diagonal Hamiltonian `sum_ij c_ij Z_i Z_{n+j}` on `2n` qubits with
/// `c_ij = v_i * ainv_ij * delta_j`. Its diagonal entry at bit string `x`
/// is `sum_ij c_ij (-1)^{x_i + x_{n+j}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    terms: Vec<(usize, usize, f64)>,
}

/// Assemble the problem Hamiltonian for a factored perturbation. Exact-zero
/// coefficients are dropped.
pub fn build_problem_hamiltonian(ainv: &RealMatrix, r1: &Rank1Delta) -> DiagonalHamiltonian {
    let n = ainv.dim();
    let coeffs = radius::bilinear_coeffs(ainv, r1);
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = coeffs[(i, j)];
            if c != 0.0 {
                terms.push((i, j, c));
            }
        }
    }
    DiagonalHamiltonian { n, terms }
}

impl DiagonalHamiltonian {
    /// Assemble directly from coupling terms `(i, j, c_ij)`, zero-based.
    pub fn new(n: usize, terms: Vec<(usize, usize, f64)>) -> Self {
        assert!(n >= 1 && 2 * n <= MAX_QUBITS, "dimension out of range");
        assert!(
            terms.iter().all(|&(i, j, c)| i < n && j < n && c.is_finite()),
            "term indices must lie in 0..n with finite coefficients"
        );
        Self { n, terms }
    }

    /// Matrix dimension `n`; the circuit acts on `2n` qubits.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.n
    }

    /// Nonzero couplings `(i, j, c_ij)` between qubit `i` and qubit `n + j`,
    /// zero-based.
    pub fn terms(&self) -> &[(usize, usize, f64)] {
        &self.terms
    }

    /// Diagonal entry (classical cost) at a bit string of length `2n`.
    pub fn diagonal_value(&self, x: &BitString) -> f64 {
        assert_eq!(x.len(), self.num_qubits(), "bit string length mismatch");
        let bits = x.bits();
        let mut acc = 0.0;
        for &(i, j, c) in &self.terms {
            let sign = if bits[i] == bits[self.n + j] { 1.0 } else { -1.0 };
            acc += c * sign;
        }
        acc
    }

    /// Diagonal entry at amplitude index `k` (qubit 1 = most significant bit).
    pub fn value_at_index(&self, k: usize) -> f64 {
        let m = self.num_qubits();
        let mut acc = 0.0;
        for &(i, j, c) in &self.terms {
            let bi = (k >> (m - 1 - i)) & 1;
            let bj = (k >> (m - 1 - (self.n + j))) & 1;
            let sign = if bi == bj { 1.0 } else { -1.0 };
            acc += c * sign;
        }
        acc
    }

    /// The full diagonal, indexed by amplitude index.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.num_qubits())
            .map(|k| self.value_at_index(k))
            .collect()
    }
}

/// Dense complex state of `m` qubits: `2^m` amplitudes with unit norm,
/// amplitude index `k` corresponding to the bit string of `k` with qubit 1
/// as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Uniform superposition: every amplitude `2^(-m/2)`.
    pub fn uniform(m: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&m), "qubit count out of range");
        let len = 1usize << m;
        let amp = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Self {
            num_qubits: m,
            amps: vec![amp; len],
        }
    }

    /// Computational basis state `|k>`.
    pub fn basis_state(m: usize, k: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&m), "qubit count out of range");
        let len = 1usize << m;
        assert!(k < len, "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[k] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits: m,
            amps,
        }
    }

    /// Wrap raw amplitudes; the norm must already be 1 within `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        let len = amps.len();
        assert!(len.is_power_of_two() && len > 1, "length must be 2^m, m >= 1");
        let m = len.trailing_zeros() as usize;
        assert!(m <= MAX_QUBITS, "qubit count out of range");
        let sv = Self {
            num_qubits: m,
            amps,
        };
        assert!(
            (sv.norm_sqr() - 1.0).abs() <= 1e-10,
            "amplitudes are not normalized"
        );
        sv
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.amps[k].norm_sqr()
    }

    /// Multiply each amplitude by `exp(-i * gamma * C(x))`; probabilities are
    /// untouched.
    pub fn apply_problem_unitary(&mut self, h: &DiagonalHamiltonian, gamma: f64) {
        assert_eq!(self.num_qubits, h.num_qubits(), "qubit count mismatch");
        self.apply_phases(&h.diagonal(), gamma);
    }

    pub(crate) fn apply_phases(&mut self, diag: &[f64], gamma: f64) {
        assert_eq!(diag.len(), self.amps.len());
        for (a, &c) in self.amps.iter_mut().zip(diag) {
            let (s, co) = (gamma * c).sin_cos();
            *a *= Complex64::new(co, -s);
        }
    }

    /// Apply `exp(-i * beta * sum_j X_j)`, factored into the per-qubit map
    /// `cos(beta) I - i sin(beta) X`.
    pub fn apply_mixing_unitary(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        for q in 0..self.num_qubits {
            let bit = 1usize << (self.num_qubits - 1 - q);
            for k in 0..self.amps.len() {
                if k & bit != 0 {
                    continue;
                }
                let a0 = self.amps[k];
                let a1 = self.amps[k | bit];
                self.amps[k] = Complex64::new(c * a0.re + s * a1.im, c * a0.im - s * a1.re);
                self.amps[k | bit] = Complex64::new(c * a1.re + s * a0.im, c * a1.im - s * a0.re);
            }
        }
    }

    /// Exact expectation `sum_x |a_x|^2 C(x)`; no sampling involved.
    pub fn expectation(&self, h: &DiagonalHamiltonian) -> f64 {
        assert_eq!(self.num_qubits, h.num_qubits(), "qubit count mismatch");
        self.expectation_of_diag(&h.diagonal())
    }

    pub(crate) fn expectation_of_diag(&self, diag: &[f64]) -> f64 {
        self.amps
            .iter()
            .zip(diag)
            .map(|(a, &c)| a.norm_sqr() * c)
            .sum()
    }

    /// Draw `shots` measurements from `|a_x|^2`, deterministic in `seed`.
    pub fn sample(&self, shots: u64, seed: u64) -> CountsHistogram {
        assert!(shots >= 1, "at least one shot required");
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = CountsHistogram::new(shots);
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * acc;
            let k = cdf.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            hist.record(&BitString::from_index(k, self.num_qubits).to_string());
        }
        hist
    }
}

/// Run the full QAOA circuit `U_B(b_p) U_P(g_p) ... U_B(b_1) U_P(g_1) |psi0>`
/// on the uniform initial state over `2n` qubits.
pub fn run_circuit(h: &DiagonalHamiltonian, beta: &[f64], gamma: &[f64]) -> Statevector {
    assert_eq!(beta.len(), gamma.len(), "layer parameter length mismatch");
    let diag = h.diagonal();
    let mut psi = Statevector::uniform(h.num_qubits());
    for (&b, &g) in beta.iter().zip(gamma) {
        psi.apply_phases(&diag, g);
        psi.apply_mixing_unitary(b);
    }
    psi
}

/// Empirical measurement outcomes: counts per bit string, summing to `shots`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsHistogram {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl CountsHistogram {
    fn new(shots: u64) -> Self {
        Self {
            shots,
            counts: BTreeMap::new(),
        }
    }

    fn record(&mut self, bit_string: &str) {
        *self.counts.entry(bit_string.to_string()).or_insert(0) += 1;
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn count(&self, bit_string: &str) -> u64 {
        self.counts.get(bit_string).copied().unwrap_or(0)
    }

    /// Entries sorted by descending count, ties lexicographically.
    pub fn sorted_desc(&self) -> Vec<(&str, u64)> {
        let mut rows: Vec<(&str, u64)> = self
            .counts
            .iter()
            .map(|(s, &c)| (s.as_str(), c))
            .collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        rows
    }

    /// Two-column CSV `bitstring,count` in `sorted_desc` order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,count\n");
        for (s, c) in self.sorted_desc() {
            out.push_str(&format!("{s},{c}\n"));
        }
        out
    }
}
