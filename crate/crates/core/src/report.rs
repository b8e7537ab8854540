//! Report types shared by the radius pipelines and the verifier.

use serde::{Deserialize, Serialize};

use crate::linalg::RealMatrix;
use crate::opt::QaoaParams;
use crate::sim::CountsHistogram;

/// How the radius is computed. `Both` runs the heuristic for diagnostics but
/// reports the exact brute-force value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Qaoa,
    Both,
}

/// Outcome of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    /// Every matrix in the interval is non-singular (certified).
    NonSingular,
    /// The symmetric interval matrix is robustly stable (certified).
    Stable,
    /// No certificate; see the caveat for why.
    NotCertified,
    /// The interval provably contains a singular matrix; see the witness.
    SingularInside,
}

/// Caveat attached to heuristic-only runs: the sampled cost underestimates
/// the true maximum, so the reported `d = 1/r` can only overestimate.
pub const CAVEAT_HEURISTIC: &str = "heuristic upper bound on d";

/// Result of a radius computation or verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub method: Method,
    pub decision: Decision,
    /// Maximum of the bilinear cost found by the chosen method.
    pub r: f64,
    /// Radius of non-singularity, `1/r`.
    pub d: f64,
    /// Argmax bit string (lexicographically smallest for brute force).
    pub best_bit_string: String,
    pub z_star: Vec<f64>,
    pub y_star: Vec<f64>,
    /// Singular matrix `A - (1/r) T_y Delta T_z` attaining the reported `r`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<RealMatrix>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub histogram: Option<CountsHistogram>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub params: Option<QaoaParams>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub caveat: Option<String>,
}

impl RadiusReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
