//! Decision layer: compute the radius by the chosen method, compare it
//! against the interval half-width `epsilon`, and certify non-singularity or
//! (for symmetric centers) robust stability. Also defines the JSON problem
//! file format consumed by the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{self, IntervalMatrix};
use crate::linalg::{invert, RealMatrix, Tolerances};
use crate::opt::{qaoa_radius, QaoaConfig};
use crate::radius::{
    brute_force_r, check_nonnegative, decompose_rank1, singular_witness, DEFAULT_BRUTE_LIMIT,
};
use crate::report::{Decision, Method, RadiusReport, CAVEAT_HEURISTIC};

/// Environment variable the CLI reads to override the brute-force cap.
pub const BRUTE_LIMIT_ENV: &str = "IQMV_BRUTE_LIMIT";

/// Problem description as stored in a JSON input file. Exactly one input
/// form must be present: either `A_m` + `Delta` (+ optional `epsilon`), or
/// `A_lower` + `A_upper` bounds.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(rename = "A_m", skip_serializing_if = "Option::is_none", default)]
    pub a_m: Option<RealMatrix>,
    #[serde(rename = "A_lower", skip_serializing_if = "Option::is_none", default)]
    pub a_lower: Option<RealMatrix>,
    #[serde(rename = "A_upper", skip_serializing_if = "Option::is_none", default)]
    pub a_upper: Option<RealMatrix>,
    #[serde(rename = "Delta", skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<RealMatrix>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub qaoa: Option<QaoaConfig>,
}

impl ProblemSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidProblem(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serialization cannot fail")
    }

    /// Validate and normalize into center/perturbation/epsilon form. A bounds
    /// input becomes `center = (upper+lower)/2`, `delta = (upper-lower)/2`,
    /// `epsilon = 1`.
    pub fn resolve(&self) -> Result<ResolvedProblem> {
        let center_form = self.a_m.is_some() || self.delta.is_some();
        let bounds_form = self.a_lower.is_some() || self.a_upper.is_some();
        if center_form && bounds_form {
            return Err(Error::InvalidProblem(
                "give either A_m + Delta or A_lower + A_upper, not both".into(),
            ));
        }

        let (center, delta, epsilon) = if center_form {
            let a_m = self
                .a_m
                .clone()
                .ok_or_else(|| Error::InvalidProblem("A_m is missing".into()))?;
            let delta = self
                .delta
                .clone()
                .ok_or_else(|| Error::InvalidProblem("Delta is missing".into()))?;
            if a_m.dim() != delta.dim() {
                return Err(Error::InvalidProblem(
                    "A_m and Delta must have the same dimension".into(),
                ));
            }
            (a_m, delta, self.epsilon.unwrap_or(0.0))
        } else if bounds_form {
            let lower = self
                .a_lower
                .clone()
                .ok_or_else(|| Error::InvalidProblem("A_lower is missing".into()))?;
            let upper = self
                .a_upper
                .clone()
                .ok_or_else(|| Error::InvalidProblem("A_upper is missing".into()))?;
            if lower.dim() != upper.dim() {
                return Err(Error::InvalidProblem(
                    "A_lower and A_upper must have the same dimension".into(),
                ));
            }
            if self.epsilon.is_some() {
                return Err(Error::InvalidProblem(
                    "epsilon is implied by bounds input (epsilon = 1)".into(),
                ));
            }
            let im = IntervalMatrix::from_bounds(&lower, &upper)?;
            (im.center().clone(), im.radius().clone(), 1.0)
        } else {
            return Err(Error::InvalidProblem(
                "no input matrices: give A_m + Delta or A_lower + A_upper".into(),
            ));
        };

        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidProblem(
                "epsilon must be a finite nonnegative number".into(),
            ));
        }

        Ok(ResolvedProblem {
            center,
            delta,
            epsilon,
            method: self.method.unwrap_or(Method::Brute),
            qaoa: self.qaoa.clone().unwrap_or_default(),
            brute_limit: DEFAULT_BRUTE_LIMIT,
        })
    }
}

/// A validated problem in center/perturbation form, ready to verify.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedProblem {
    pub center: RealMatrix,
    pub delta: RealMatrix,
    pub epsilon: f64,
    pub method: Method,
    pub qaoa: QaoaConfig,
    pub brute_limit: usize,
}

impl ResolvedProblem {
    pub fn new(center: RealMatrix, delta: RealMatrix, epsilon: f64) -> Self {
        Self {
            center,
            delta,
            epsilon,
            method: Method::Brute,
            qaoa: QaoaConfig::default(),
            brute_limit: DEFAULT_BRUTE_LIMIT,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_qaoa(mut self, qaoa: QaoaConfig) -> Self {
        self.qaoa = qaoa;
        self
    }

    pub fn with_brute_limit(mut self, limit: usize) -> Self {
        self.brute_limit = limit;
        self
    }
}

fn brute_report(
    a: &RealMatrix,
    delta: &RealMatrix,
    method: Method,
    brute_limit: usize,
) -> Result<RadiusReport> {
    let ainv = invert(a)?;
    let r1 = decompose_rank1(delta, Tolerances::DEFAULT.rank1_rel)?;
    let (r, argmax) = brute_force_r(&ainv, &r1, brute_limit)?;
    if r <= 0.0 {
        return Err(Error::NonPositiveCost { cost: r });
    }
    let witness = singular_witness(a, delta, &argmax, r);
    Ok(RadiusReport {
        method,
        decision: Decision::NonSingular,
        r,
        d: 1.0 / r,
        best_bit_string: argmax.bit_string().to_string(),
        z_star: argmax.z().to_vec(),
        y_star: argmax.y().to_vec(),
        witness: Some(witness),
        histogram: None,
        params: None,
        caveat: None,
    })
}

/// Radius of non-singularity `d = 1/r` by the chosen method.
///
/// The returned decision reflects the degenerate interval `epsilon = 0`:
/// exact methods certify `NonSingular` outright, the heuristic stays
/// `NotCertified`. [`verify_nonsingular`] re-derives the decision against a
/// concrete `epsilon`.
pub fn compute_radius(
    a: &RealMatrix,
    delta: &RealMatrix,
    method: Method,
    qaoa: &QaoaConfig,
    brute_limit: usize,
) -> Result<RadiusReport> {
    check_nonnegative(delta)?;
    match method {
        Method::Brute => brute_report(a, delta, Method::Brute, brute_limit),
        Method::Qaoa => qaoa_radius(a, delta, qaoa),
        Method::Both => {
            let mut report = brute_report(a, delta, Method::Both, brute_limit)?;
            match qaoa_radius(a, delta, qaoa) {
                Ok(heuristic) => {
                    report.histogram = heuristic.histogram;
                    report.params = heuristic.params;
                }
                Err(Error::NonPositiveCost { cost }) => {
                    report.caveat = Some(format!(
                        "heuristic run degenerated (best sampled cost {cost}); exact result unaffected"
                    ));
                }
                Err(e) => return Err(e),
            }
            Ok(report)
        }
    }
}

/// Decide the non-singularity question for the interval
/// `[center - eps*Delta, center + eps*Delta]`.
///
/// `NonSingular` requires `d > epsilon` strictly with `|d - epsilon|` outside
/// the boundary band. Exact methods additionally report `SingularInside` when
/// `d < epsilon`, with the witness inside the interval. A heuristic-only run
/// is accepted as a certificate only when the dimension exceeds the
/// brute-force limit; otherwise it reports `NotCertified`.
pub fn verify_nonsingular(problem: &ResolvedProblem) -> Result<RadiusReport> {
    if !problem.epsilon.is_finite() || problem.epsilon < 0.0 {
        return Err(Error::InvalidProblem(
            "epsilon must be a finite nonnegative number".into(),
        ));
    }
    let mut report = compute_radius(
        &problem.center,
        &problem.delta,
        problem.method,
        &problem.qaoa,
        problem.brute_limit,
    )?;
    apply_nonsingular_decision(&mut report, problem);
    Ok(report)
}

fn apply_nonsingular_decision(report: &mut RadiusReport, problem: &ResolvedProblem) {
    let eps = problem.epsilon;
    let exact = matches!(report.method, Method::Brute | Method::Both);
    let n = problem.center.dim();

    report.decision = if (report.d - eps).abs() <= Tolerances::DEFAULT.boundary_abs {
        Decision::NotCertified
    } else if report.d > eps {
        if exact {
            Decision::NonSingular
        } else if n > problem.brute_limit {
            report.caveat = Some(format!(
                "{CAVEAT_HEURISTIC}; accepted without exact confirmation because \
                 dimension {n} exceeds the brute-force limit {}",
                problem.brute_limit
            ));
            Decision::NonSingular
        } else {
            Decision::NotCertified
        }
    } else if exact {
        Decision::SingularInside
    } else {
        Decision::NotCertified
    };
}

/// Robust stability of a symmetric interval matrix: certified non-singularity
/// of the interval plus stability of the (symmetrized) center.
///
/// When the interval is not certified non-singular the stability question is
/// left `NotCertified` even if an exact run found a singular member: the
/// witness is generally not symmetric, so the symmetric sub-interval is
/// undecided. The witness and a caveat are carried in the report.
pub fn verify_stable_symmetric(problem: &ResolvedProblem) -> Result<RadiusReport> {
    let tol = Tolerances::DEFAULT;
    if !problem.center.is_symmetric_within(tol.symmetry_rel) {
        return Err(Error::NotSymmetric);
    }
    let center_sym = problem.center.symmetrized();
    let sym_problem = ResolvedProblem {
        center: center_sym.clone(),
        ..problem.clone()
    };

    let mut report = verify_nonsingular(&sym_problem)?;
    let center_stable = interval::is_stable_symmetric_member(&center_sym, tol.stability_margin)?;

    report.decision = match report.decision {
        Decision::NonSingular if center_stable => Decision::Stable,
        Decision::NonSingular => {
            report.caveat = Some(
                "interval is non-singular but the center matrix is not stable; \
                 no stable member known"
                    .into(),
            );
            Decision::NotCertified
        }
        Decision::SingularInside => {
            report.caveat = Some(format!(
                "the full interval contains a singular matrix at distance d = {}; \
                 stability of the symmetric sub-interval is undecided",
                report.d
            ));
            Decision::NotCertified
        }
        other => other,
    };
    Ok(report)
}
