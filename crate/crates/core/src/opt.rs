//! Classical half of the variational loop: exact objective evaluation,
//! finite-difference gradients, gradient ascent with random restarts, and
//! extraction of the candidate solution from sampled measurements.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{invert, RealMatrix, Tolerances};
use crate::radius::{
    check_nonnegative, decompose_rank1, signs_from_bits, singular_witness, BitString,
};
use crate::report::{Decision, Method, RadiusReport, CAVEAT_HEURISTIC};
use crate::sim::{run_circuit, CountsHistogram, DiagonalHamiltonian, Statevector};

/// Stop a restart once the objective improves by less than this.
const CONVERGENCE_TOL: f64 = 1e-8;

/// Angles for the `p` circuit layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl QaoaParams {
    pub fn layers(&self) -> usize {
        debug_assert_eq!(self.beta.len(), self.gamma.len());
        self.beta.len()
    }
}

fn default_layers() -> usize {
    2
}
fn default_restarts() -> usize {
    10
}
fn default_max_iterations() -> usize {
    200
}
fn default_step_size() -> f64 {
    0.05
}
fn default_fd_step() -> f64 {
    1e-4
}
fn default_shots() -> u64 {
    100
}
fn default_seed() -> u64 {
    0
}
fn default_init_range() -> f64 {
    std::f64::consts::PI
}

/// Knobs for the optimization loop and final sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaConfig {
    /// Circuit depth `p`.
    #[serde(default = "default_layers", rename = "p")]
    pub layers: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_step_size")]
    pub step_size: f64,
    /// Central-difference step for the gradient estimate.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Initial angles are drawn uniformly from `[0, init_range)`.
    #[serde(default = "default_init_range")]
    pub init_range: f64,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        Self {
            layers: default_layers(),
            restarts: default_restarts(),
            max_iterations: default_max_iterations(),
            step_size: default_step_size(),
            fd_step: default_fd_step(),
            shots: default_shots(),
            seed: default_seed(),
            init_range: default_init_range(),
        }
    }
}

impl QaoaConfig {
    fn validate(&self) {
        assert!(self.layers >= 1, "layer count must be positive");
        assert!(self.restarts >= 1, "restart count must be positive");
        assert!(self.max_iterations >= 1, "iteration budget must be positive");
        assert!(self.step_size > 0.0, "step size must be positive");
        assert!(self.fd_step > 0.0, "finite-difference step must be positive");
        assert!(self.shots >= 1, "shot count must be positive");
        assert!(self.init_range > 0.0, "init range must be positive");
    }
}

/// A sampled bit string with its exactly-evaluated classical cost.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCandidate {
    pub bit_string: BitString,
    pub classical_cost: f64,
    pub count: u64,
}

/// Caches the Hamiltonian diagonal so repeated objective evaluations skip
/// the term sum.
struct Evaluator {
    diag: Vec<f64>,
    num_qubits: usize,
}

impl Evaluator {
    fn new(h: &DiagonalHamiltonian) -> Self {
        Self {
            diag: h.diagonal(),
            num_qubits: h.num_qubits(),
        }
    }

    fn objective(&self, beta: &[f64], gamma: &[f64]) -> f64 {
        let mut psi = Statevector::uniform(self.num_qubits);
        for (&b, &g) in beta.iter().zip(gamma) {
            psi.apply_phases(&self.diag, g);
            psi.apply_mixing_unitary(b);
        }
        psi.expectation_of_diag(&self.diag)
    }

    /// Central differences, `[d/d beta_1.., d/d gamma_1..]`.
    fn gradient(&self, beta: &[f64], gamma: &[f64], h: f64) -> Vec<f64> {
        let p = beta.len();
        let mut grad = Vec::with_capacity(2 * p);
        let mut b = beta.to_vec();
        let mut g = gamma.to_vec();
        for k in 0..p {
            b[k] = beta[k] + h;
            let plus = self.objective(&b, &g);
            b[k] = beta[k] - h;
            let minus = self.objective(&b, &g);
            b[k] = beta[k];
            grad.push((plus - minus) / (2.0 * h));
        }
        for k in 0..p {
            g[k] = gamma[k] + h;
            let plus = self.objective(&b, &g);
            g[k] = gamma[k] - h;
            let minus = self.objective(&b, &g);
            g[k] = gamma[k];
            grad.push((plus - minus) / (2.0 * h));
        }
        grad
    }
}

/// Exact expectation of `H` in the circuit state; the quantity the optimizer
/// maximizes.
pub fn objective(h: &DiagonalHamiltonian, params: &QaoaParams) -> f64 {
    Evaluator::new(h).objective(&params.beta, &params.gamma)
}

/// Central finite-difference gradient of the objective, `2p` components in
/// the order `[beta..., gamma...]`.
pub fn gradient(h: &DiagonalHamiltonian, params: &QaoaParams, fd_step: f64) -> Vec<f64> {
    assert!(fd_step > 0.0, "finite-difference step must be positive");
    Evaluator::new(h).gradient(&params.beta, &params.gamma, fd_step)
}

/// Gradient ascent with restarts. Restart `i` seeds its initializer with
/// `seed + i`; the best final objective wins, earlier restarts win ties.
/// Returns the winning parameters and the best-so-far objective trace
/// (one entry per completed iteration, non-decreasing).
pub fn optimize(h: &DiagonalHamiltonian, config: &QaoaConfig) -> (QaoaParams, Vec<f64>) {
    config.validate();
    let ev = Evaluator::new(h);
    let p = config.layers;

    let mut best_final = f64::NEG_INFINITY;
    let mut best_params = None;
    let mut trace = Vec::new();
    let mut best_so_far = f64::NEG_INFINITY;

    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
        let mut beta: Vec<f64> = (0..p).map(|_| rng.gen::<f64>() * config.init_range).collect();
        let mut gamma: Vec<f64> = (0..p).map(|_| rng.gen::<f64>() * config.init_range).collect();

        let mut obj = ev.objective(&beta, &gamma);
        for _ in 0..config.max_iterations {
            let grad = ev.gradient(&beta, &gamma, config.fd_step);
            for k in 0..p {
                beta[k] += config.step_size * grad[k];
                gamma[k] += config.step_size * grad[p + k];
            }
            let next = ev.objective(&beta, &gamma);
            best_so_far = best_so_far.max(next);
            trace.push(best_so_far);
            let done = (next - obj).abs() < CONVERGENCE_TOL;
            obj = next;
            if done {
                break;
            }
        }
        if obj > best_final {
            best_final = obj;
            best_params = Some(QaoaParams {
                beta: beta.clone(),
                gamma: gamma.clone(),
            });
        }
    }

    (best_params.expect("at least one restart"), trace)
}

/// Sample the circuit state and pick the best candidate: maximum classical
/// cost, ties broken by higher count, then lexicographically smaller string.
pub fn extract_solution(
    h: &DiagonalHamiltonian,
    params: &QaoaParams,
    shots: u64,
    seed: u64,
) -> (SolutionCandidate, CountsHistogram) {
    let psi = run_circuit(h, &params.beta, &params.gamma);
    let hist = psi.sample(shots, seed);

    let mut best: Option<SolutionCandidate> = None;
    for (s, &count) in hist.counts() {
        let bit_string: BitString = s.parse().expect("histogram keys are bit strings");
        let cost = h.diagonal_value(&bit_string);
        let better = match &best {
            None => true,
            Some(b) => cost > b.classical_cost || (cost == b.classical_cost && count > b.count),
        };
        if better {
            best = Some(SolutionCandidate {
                bit_string,
                classical_cost: cost,
                count,
            });
        }
    }
    (best.expect("at least one shot"), hist)
}

/// Full heuristic pipeline: invert, factor, build the Hamiltonian, optimize,
/// then read `r` off the best sampled string. The report carries the
/// histogram, the winning parameters, and the singular witness attaining the
/// sampled cost; its decision is left at `NotCertified` until a verifier
/// compares `d` against a concrete interval.
pub fn qaoa_radius(
    a: &RealMatrix,
    delta: &RealMatrix,
    config: &QaoaConfig,
) -> Result<RadiusReport> {
    check_nonnegative(delta)?;
    let ainv = invert(a)?;
    let r1 = decompose_rank1(delta, Tolerances::DEFAULT.rank1_rel)?;
    let h = crate::sim::build_problem_hamiltonian(&ainv, &r1);

    let (params, _trace) = optimize(&h, config);
    let (candidate, histogram) = extract_solution(&h, &params, config.shots, config.seed);

    let r = candidate.classical_cost;
    if r <= 0.0 {
        return Err(Error::NonPositiveCost { cost: r });
    }
    let signs = signs_from_bits(&candidate.bit_string);
    let witness = singular_witness(a, delta, &signs, r);

    Ok(RadiusReport {
        method: Method::Qaoa,
        decision: Decision::NotCertified,
        r,
        d: 1.0 / r,
        best_bit_string: candidate.bit_string.to_string(),
        z_star: signs.z().to_vec(),
        y_star: signs.y().to_vec(),
        witness: Some(witness),
        histogram: Some(histogram),
        params: Some(params),
        caveat: Some(CAVEAT_HEURISTIC.to_string()),
    })
}
