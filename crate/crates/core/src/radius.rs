//! Classical core of the radius computation: rank-1 factorization of the
//! perturbation, the bilinear sign-cube cost, conversion between bit strings
//! and sign vectors, exact brute-force maximization, and the singular-witness
//! construction via the matrix determinant lemma.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// Default cap on the matrix dimension for brute-force enumeration.
pub const DEFAULT_BRUTE_LIMIT: usize = 14;

/// Sign vectors `z, y` from the discrete cube `{-1, 1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignPair {
    z: Vec<f64>,
    y: Vec<f64>,
}

impl SignPair {
    pub fn new(z: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(z.len(), y.len(), "sign vectors must have equal length");
        assert!(
            z.iter().chain(&y).all(|&s| s == 1.0 || s == -1.0),
            "sign entries must be exactly +1 or -1"
        );
        Self { z, y }
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Bit string `(x_1..x_n, x_{n+1}..x_{2n})` with `(-1)^{x_i} = z_i` and
    /// `(-1)^{x_{n+i}} = y_i`.
    pub fn bit_string(&self) -> BitString {
        let to_bit = |&s: &f64| u8::from(s < 0.0);
        BitString::new(self.z.iter().chain(&self.y).map(to_bit).collect())
    }
}

/// Binary string of length `2n`; bits `1..n` encode `z`, bits `n+1..2n`
/// encode `y`. Bit 1 is the leftmost character and the most significant bit
/// of the amplitude index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        Self { bits }
    }

    /// Decode index `k` into `m` bits, most significant first.
    pub fn from_index(k: usize, m: usize) -> Self {
        assert!(m > 0 && (m >= usize::BITS as usize || k < 1 << m));
        Self {
            bits: (0..m).map(|t| ((k >> (m - 1 - t)) & 1) as u8).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| 1 - b).collect(),
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidProblem(format!("invalid bit character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { bits })
    }
}

/// Rank-1 factorization `Delta = delta * v^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Delta {
    delta: Vec<f64>,
    v: Vec<f64>,
    residual: f64,
}

impl Rank1Delta {
    pub fn dim(&self) -> usize {
        self.delta.len()
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Frobenius norm of `Delta - delta * v^T` at factorization time.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn reconstruct(&self) -> RealMatrix {
        RealMatrix::from_fn(self.dim(), |i, j| self.delta[i] * self.v[j])
    }
}

/// Factor `Delta` as `delta * v^T` by picking the largest entry `(i*, j*)`
/// as pivot: `delta` is column `j*` and `v` is row `i*` scaled by the pivot.
/// Exact for exactly-rank-1 input; fails with `RankTooHigh` when the
/// reconstruction residual exceeds `tol * fro_norm(Delta)`.
pub fn decompose_rank1(delta: &RealMatrix, tol: f64) -> Result<Rank1Delta> {
    let n = delta.dim();
    let (mut pi, mut pj, mut pmag) = (0, 0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let mag = delta[(i, j)].abs();
            if mag > pmag {
                (pi, pj, pmag) = (i, j, mag);
            }
        }
    }
    if pmag == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let pivot = delta[(pi, pj)];
    let col: Vec<f64> = (0..n).map(|i| delta[(i, pj)]).collect();
    let row: Vec<f64> = (0..n).map(|j| delta[(pi, j)] / pivot).collect();

    let mut sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            let diff = delta[(i, j)] - col[i] * row[j];
            sq += diff * diff;
        }
    }
    let residual = sq.sqrt();
    let bound = tol * delta.norm_fro();
    if residual > bound {
        return Err(Error::RankTooHigh { residual, bound });
    }
    Ok(Rank1Delta {
        delta: col,
        v: row,
        residual,
    })
}

/// Sign vectors from a bit string of length `2n`: `z_i = (-1)^{x_i}`,
/// `y_i = (-1)^{x_{n+i}}`.
pub fn signs_from_bits(x: &BitString) -> SignPair {
    assert!(x.len() % 2 == 0, "bit string length must be even");
    let n = x.len() / 2;
    let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
    SignPair {
        z: x.bits[..n].iter().map(|&b| sign(b)).collect(),
        y: x.bits[n..].iter().map(|&b| sign(b)).collect(),
    }
}

/// Reject perturbation matrices with negative entries.
pub(crate) fn check_nonnegative(delta: &RealMatrix) -> Result<()> {
    for i in 0..delta.dim() {
        for j in 0..delta.dim() {
            if delta[(i, j)] < 0.0 {
                return Err(Error::NegativeDelta { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Coefficient table `c_ij = v_i * ainv_ij * delta_j`.
///
/// Shared by the bilinear cost, the brute-force search, and the problem
/// Hamiltonian so that all three evaluate bit-identical costs.
pub(crate) fn bilinear_coeffs(ainv: &RealMatrix, r1: &Rank1Delta) -> RealMatrix {
    assert_eq!(ainv.dim(), r1.dim(), "dimension mismatch");
    RealMatrix::from_fn(ainv.dim(), |i, j| r1.v[i] * ainv[(i, j)] * r1.delta[j])
}

pub(crate) fn cost_from_coeffs(coeffs: &RealMatrix, z: &[f64], y: &[f64]) -> f64 {
    let n = coeffs.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += coeffs[(i, j)] * (z[i] * y[j]);
        }
    }
    acc
}

/// The cost `v^T T_z A^-1 T_y delta = sum_ij v_i z_i ainv_ij y_j delta_j`.
pub fn cost_bilinear(ainv: &RealMatrix, r1: &Rank1Delta, s: &SignPair) -> f64 {
    assert_eq!(s.z.len(), ainv.dim(), "dimension mismatch");
    cost_from_coeffs(&bilinear_coeffs(ainv, r1), &s.z, &s.y)
}

/// Exact maximum of the bilinear cost over all `2^(2n)` sign pairs.
///
/// Flipping both `z` and `y` leaves the cost unchanged, so only strings with
/// the first bit 0 are enumerated; the complement of any skipped maximizer
/// starts with 1 and is lexicographically larger, hence the first strict
/// maximizer found is the lexicographically smallest argmax overall.
pub fn brute_force_r(
    ainv: &RealMatrix,
    r1: &Rank1Delta,
    limit: usize,
) -> Result<(f64, SignPair)> {
    let n = ainv.dim();
    if n > limit {
        return Err(Error::DimensionTooLarge { dim: n, limit });
    }
    let coeffs = bilinear_coeffs(ainv, r1);
    let mut z = vec![1.0f64; n];
    let mut y = vec![1.0f64; n];
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0usize;

    for k in 0..1usize << (2 * n - 1) {
        for t in 0..n {
            z[t] = if (k >> (2 * n - 1 - t)) & 1 == 0 { 1.0 } else { -1.0 };
            y[t] = if (k >> (n - 1 - t)) & 1 == 0 { 1.0 } else { -1.0 };
        }
        let cost = cost_from_coeffs(&coeffs, &z, &y);
        if cost > best {
            best = cost;
            best_k = k;
        }
    }

    let argmax = signs_from_bits(&BitString::from_index(best_k, 2 * n));
    Ok((best, argmax))
}

/// Singular matrix `A - (1/r) * T_y * Delta * T_z` for `r` equal to the
/// bilinear cost at `s`: by the matrix determinant lemma its determinant is
/// `det(A) * (1 - cost(s)/r) = 0`.
pub fn singular_witness(a: &RealMatrix, delta: &RealMatrix, s: &SignPair, r: f64) -> RealMatrix {
    assert_eq!(a.dim(), delta.dim(), "dimension mismatch");
    assert_eq!(a.dim(), s.z.len(), "dimension mismatch");
    assert!(r != 0.0, "witness requires a nonzero cost");
    RealMatrix::from_fn(a.dim(), |i, j| {
        a[(i, j)] - (s.y[i] * delta[(i, j)] * s.z[j]) / r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{determinant, invert};

    fn ones(n: usize) -> RealMatrix {
        RealMatrix::from_fn(n, |_, _| 1.0)
    }

    fn example1_ainv() -> RealMatrix {
        RealMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
    }

    fn example2_matrix() -> RealMatrix {
        RealMatrix::from_rows(&[
            vec![-2.0, 2.0, 0.0],
            vec![2.0, -5.0, 3.0],
            vec![0.0, 3.0, -7.0],
        ])
        .unwrap()
    }

    fn all_ones_rank1(n: usize) -> Rank1Delta {
        decompose_rank1(&ones(n), 1e-9).unwrap()
    }

    #[test]
    fn decompose_all_ones() {
        let r1 = all_ones_rank1(2);
        assert_eq!(r1.delta(), &[1.0, 1.0]);
        assert_eq!(r1.v(), &[1.0, 1.0]);
        assert_eq!(r1.residual(), 0.0);
    }

    #[test]
    fn decompose_outer_product() {
        let outer = RealMatrix::from_fn(2, |i, j| [1.0, 2.0][i] * [3.0, 4.0][j]);
        let r1 = decompose_rank1(&outer, 1e-9).unwrap();
        assert!(r1.reconstruct().max_diff(&outer) <= 1e-12);
        assert!(r1.residual() <= 1e-12 * outer.norm_fro());
    }

    #[test]
    fn decompose_rejects_rank2_and_zero() {
        assert!(matches!(
            decompose_rank1(&RealMatrix::identity(2), 1e-9),
            Err(Error::RankTooHigh { .. })
        ));
        assert_eq!(
            decompose_rank1(&RealMatrix::zeros(2), 1e-9),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn decompose_nonnegative_input_gives_nonnegative_factors() {
        let delta = RealMatrix::from_fn(3, |i, j| (1.0 + i as f64) * (0.5 + j as f64));
        let r1 = decompose_rank1(&delta, 1e-9).unwrap();
        let outer = r1.reconstruct();
        for i in 0..3 {
            for j in 0..3 {
                assert!(outer[(i, j)] >= -1e-9);
            }
        }
    }

    #[test]
    fn signs_from_bits_examples() {
        let s = signs_from_bits(&"0000".parse().unwrap());
        assert_eq!((s.z(), s.y()), (&[1.0, 1.0][..], &[1.0, 1.0][..]));

        let s = signs_from_bits(&"000111".parse().unwrap());
        assert_eq!(s.z(), &[1.0, 1.0, 1.0]);
        assert_eq!(s.y(), &[-1.0, -1.0, -1.0]);

        let s = signs_from_bits(&"1111".parse().unwrap());
        assert_eq!((s.z(), s.y()), (&[-1.0, -1.0][..], &[-1.0, -1.0][..]));
    }

    #[test]
    fn bit_string_round_trips() {
        let x: BitString = "01101".parse().unwrap();
        assert_eq!(BitString::from_index(x.index(), 5), x);
        assert_eq!(x.to_string(), "01101");
        assert_eq!(x.complement().to_string(), "10010");
        let s = signs_from_bits(&"0110".parse().unwrap());
        assert_eq!(s.bit_string().to_string(), "0110");
        assert!("01x1".parse::<BitString>().is_err());
    }

    #[test]
    fn cost_example1_is_three() {
        let s = SignPair::new(vec![1.0, 1.0], vec![1.0, 1.0]);
        assert_eq!(cost_bilinear(&example1_ainv(), &all_ones_rank1(2), &s), 3.0);
    }

    #[test]
    fn cost_example2_matches_reported_value() {
        let ainv = invert(&example2_matrix()).unwrap();
        let s = SignPair::new(vec![1.0; 3], vec![-1.0; 3]);
        let cost = cost_bilinear(&ainv, &all_ones_rank1(3), &s);
        assert!((cost - 49.0 / 12.0).abs() <= 1e-12, "{cost}");
    }

    #[test]
    fn cost_invariant_under_double_flip() {
        let ainv = invert(&example2_matrix()).unwrap();
        let r1 = all_ones_rank1(3);
        for k in 0..64usize {
            let s = signs_from_bits(&BitString::from_index(k, 6));
            let flipped = SignPair::new(
                s.z().iter().map(|v| -v).collect(),
                s.y().iter().map(|v| -v).collect(),
            );
            assert_eq!(
                cost_bilinear(&ainv, &r1, &s),
                cost_bilinear(&ainv, &r1, &flipped)
            );
        }
    }

    #[test]
    fn brute_force_example1() {
        let (r, argmax) = brute_force_r(&example1_ainv(), &all_ones_rank1(2), 14).unwrap();
        assert_eq!(r, 3.0);
        assert_eq!(argmax.bit_string().to_string(), "0000");
    }

    #[test]
    fn brute_force_example2() {
        let ainv = invert(&example2_matrix()).unwrap();
        let (r, argmax) = brute_force_r(&ainv, &all_ones_rank1(3), 14).unwrap();
        assert!((r - 49.0 / 12.0).abs() <= 1e-9);
        assert_eq!(argmax.bit_string().to_string(), "000111");
    }

    #[test]
    fn brute_force_identity() {
        let (r, _) = brute_force_r(&RealMatrix::identity(2), &all_ones_rank1(2), 14).unwrap();
        assert_eq!(r, 2.0);
    }

    #[test]
    fn brute_force_dimension_cap() {
        let ainv = RealMatrix::identity(3);
        assert_eq!(
            brute_force_r(&ainv, &all_ones_rank1(3), 2),
            Err(Error::DimensionTooLarge { dim: 3, limit: 2 })
        );
    }

    // Independent oracle: direct enumeration of z^T M y over the full cube,
    // no symmetry halving, no lexicographic machinery.
    fn oracle_max_zmy(m: &RealMatrix) -> f64 {
        let n = m.dim();
        let mut best = f64::NEG_INFINITY;
        for zk in 0..1usize << n {
            for yk in 0..1usize << n {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let zi = if (zk >> i) & 1 == 0 { 1.0 } else { -1.0 };
                        let yj = if (yk >> j) & 1 == 0 { 1.0 } else { -1.0 };
                        acc += m[(i, j)] * (zi * yj);
                    }
                }
                best = best.max(acc);
            }
        }
        best
    }

    #[test]
    fn brute_force_matches_double_enumeration_oracle() {
        // delta = v = e specializes the cost to z^T Ainv y
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for n in 2..=4 {
            for _ in 0..5 {
                let m = RealMatrix::from_fn(n, |_, _| next());
                let r1 = all_ones_rank1(n);
                let (r, argmax) = brute_force_r(&m, &r1, 14).unwrap();
                assert_eq!(r, oracle_max_zmy(&m));
                assert_eq!(r, cost_bilinear(&m, &r1, &argmax));
            }
        }
    }

    #[test]
    fn witness_example1() {
        let a = RealMatrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap();
        let s = SignPair::new(vec![1.0, 1.0], vec![1.0, 1.0]);
        let w = singular_witness(&a, &ones(2), &s, 3.0);
        let expected = RealMatrix::from_rows(&[
            vec![2.0 / 3.0, -4.0 / 3.0],
            vec![-1.0 / 3.0, 2.0 / 3.0],
        ])
        .unwrap();
        assert!(w.max_diff(&expected) <= 1e-12);
        assert!(determinant(&w).abs() <= 1e-12);
    }

    #[test]
    fn witness_example2() {
        let a = example2_matrix();
        let ainv = invert(&a).unwrap();
        let r1 = all_ones_rank1(3);
        let (r, argmax) = brute_force_r(&ainv, &r1, 14).unwrap();
        let w = singular_witness(&a, &ones(3), &argmax, r);
        // T_y Delta T_z = -ones here, so the witness is A + (12/49) * ones
        let expected = RealMatrix::from_fn(3, |i, j| a[(i, j)] + 12.0 / 49.0);
        assert!(w.max_diff(&expected) <= 1e-12);
        assert!(determinant(&w).abs() <= 1e-9 * determinant(&a).abs());
    }

    #[test]
    fn witness_singular_at_every_maximizer() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..10 {
            let a = RealMatrix::from_fn(3, |_, _| next() + 0.1);
            let det_a = determinant(&a);
            if det_a.abs() < 0.05 {
                continue;
            }
            let delta = RealMatrix::from_fn(3, |i, j| {
                (1.0 + (i as f64) * 0.3) * (0.5 + (j as f64) * 0.4)
            });
            let ainv = invert(&a).unwrap();
            let r1 = decompose_rank1(&delta, 1e-9).unwrap();
            let (r, argmax) = brute_force_r(&ainv, &r1, 14).unwrap();
            if r <= 0.0 {
                continue;
            }
            let w = singular_witness(&a, &delta, &argmax, r);
            assert!(determinant(&w).abs() <= 1e-9 * det_a.abs());
        }
    }
}
