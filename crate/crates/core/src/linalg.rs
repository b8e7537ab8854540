//! Dense real linear algebra for small square matrices: LU with partial
//! pivoting (inversion, solves, determinants) and cyclic Jacobi for symmetric
//! eigenvalues. Everything here is a pure function of its inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds used across the library, collected in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Pivot magnitudes at or below `pivot_rel * max_norm` declare singularity.
    pub pivot_rel: f64,
    /// Residual bound for inversion and solves: `1e-8 * max(1, scale)`.
    pub residual_rel: f64,
    /// Jacobi stops when all off-diagonal magnitudes are `<= jacobi_off_rel * fro_norm`.
    pub jacobi_off_rel: f64,
    /// Symmetry test: `max |a_ij - a_ji| <= symmetry_rel * max_norm`.
    pub symmetry_rel: f64,
    /// Stability requires every eigenvalue `< -stability_margin`.
    pub stability_margin: f64,
    /// Rank-1 factorization residual bound relative to the Frobenius norm.
    pub rank1_rel: f64,
    /// Absolute width of the undecidable band around `d = epsilon`.
    pub boundary_abs: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        pivot_rel: 1e-12,
        residual_rel: 1e-8,
        jacobi_off_rel: 1e-10,
        symmetry_rel: 1e-9,
        stability_margin: 1e-9,
        rank1_rel: 1e-9,
        boundary_abs: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Square real matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// Zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            dim: n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from nested rows; rejects ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self {
            dim: n,
            data: rows.concat(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|&v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul(&self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        RealMatrix::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, c: f64) -> RealMatrix {
        RealMatrix::from_fn(self.dim, |i, j| c * self[(i, j)])
    }

    pub fn is_symmetric_within(&self, rel_tol: f64) -> bool {
        let bound = rel_tol * self.norm_max();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if (self[(i, j)] - self[(j, i)]).abs() > bound {
                    return false;
                }
            }
        }
        true
    }

    /// `(M + M^T) / 2`.
    pub fn symmetrized(&self) -> RealMatrix {
        RealMatrix::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Largest entrywise difference to `rhs`.
    pub fn max_diff(&self, rhs: &RealMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for RealMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<RealMatrix> for Vec<Vec<f64>> {
    fn from(m: RealMatrix) -> Self {
        m.rows()
    }
}

// ── LU with partial pivoting ────────────────────────────────────────

struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    min_pivot: f64,
}

fn lu_factor(m: &RealMatrix) -> LuFactors {
    let n = m.dim;
    let mut lu = m.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        // pivot search
        let mut p = col;
        let mut best = lu[col * n + col].abs();
        for r in (col + 1)..n {
            let v = lu[r * n + col].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if p != col {
            for c in 0..n {
                lu.swap(col * n + c, p * n + c);
            }
            perm.swap(col, p);
            sign = -sign;
        }
        let piv = lu[col * n + col];
        min_pivot = min_pivot.min(piv.abs());
        if piv != 0.0 {
            for r in (col + 1)..n {
                let f = lu[r * n + col] / piv;
                lu[r * n + col] = f;
                for c in (col + 1)..n {
                    lu[r * n + c] -= f * lu[col * n + c];
                }
            }
        }
    }

    LuFactors {
        n,
        lu,
        perm,
        sign,
        min_pivot,
    }
}

impl LuFactors {
    fn is_singular(&self, norm_max: f64, tol: &Tolerances) -> bool {
        self.min_pivot <= tol.pivot_rel * norm_max
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            for c in 0..r {
                x[r] -= self.lu[r * n + c] * x[c];
            }
        }
        for r in (0..n).rev() {
            for c in (r + 1)..n {
                x[r] -= self.lu[r * n + c] * x[c];
            }
            x[r] /= self.lu[r * n + r];
        }
        x
    }
}

/// Inverse by Gaussian elimination with partial pivoting.
///
/// Declares `SingularMatrix` when any pivot magnitude falls to or below
/// `pivot_rel * max_norm(M)`; otherwise the result satisfies
/// `max_norm(M * inv - I) <= 1e-8 * max(1, max_norm(M))` for condition
/// numbers up to about `1e6`.
pub fn invert(m: &RealMatrix) -> Result<RealMatrix> {
    let tol = Tolerances::DEFAULT;
    let factors = lu_factor(m);
    if factors.is_singular(m.norm_max(), &tol) {
        return Err(Error::SingularMatrix);
    }
    let n = m.dim;
    let mut inv = RealMatrix::zeros(n);
    let mut e = vec![0.0; n];
    for col in 0..n {
        e[col] = 1.0;
        let x = factors.solve(&e);
        e[col] = 0.0;
        for row in 0..n {
            inv[(row, col)] = x[row];
        }
    }
    Ok(inv)
}

/// Solve `M w = b`.
pub fn solve(m: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(m.dim, b.len(), "dimension mismatch");
    let factors = lu_factor(m);
    if factors.is_singular(m.norm_max(), &Tolerances::DEFAULT) {
        return Err(Error::SingularMatrix);
    }
    Ok(factors.solve(b))
}

/// Determinant as the signed product of pivots. Never errors; a singular
/// matrix yields a value near zero.
pub fn determinant(m: &RealMatrix) -> f64 {
    let factors = lu_factor(m);
    let n = m.dim;
    let mut det = factors.sign;
    for i in 0..n {
        det *= factors.lu[i * n + i];
    }
    det
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
///
/// `sym_tol` bounds the accepted asymmetry: `max |m_ij - m_ji|` may not
/// exceed `sym_tol * max_norm(M)`. The iteration runs on `(M + M^T)/2` until
/// every off-diagonal magnitude is at most `jacobi_off_rel * fro_norm(M)`.
pub fn symmetric_eigenvalues(m: &RealMatrix, sym_tol: f64) -> Result<Vec<f64>> {
    if !m.is_symmetric_within(sym_tol) {
        return Err(Error::NotSymmetric);
    }
    let n = m.dim;
    let mut a = m.symmetrized();
    let threshold = Tolerances::DEFAULT.jacobi_off_rel * m.norm_fro();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= threshold {
            let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
            eig.sort_by(f64::total_cmp);
            return Ok(eig);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                // smaller-magnitude root of t^2 + 2*tau*t - 1 = 0
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(p, k)] = a[(k, p)];
                    a[(k, q)] = s * akp + c * akq;
                    a[(q, k)] = a[(k, q)];
                }
            }
        }
    }
    Err(Error::ConvergenceFailure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2() -> RealMatrix {
        RealMatrix::from_rows(&[
            vec![-2.0, 2.0, 0.0],
            vec![2.0, -5.0, 3.0],
            vec![0.0, 3.0, -7.0],
        ])
        .unwrap()
    }

    #[test]
    fn invert_triangular_2x2() {
        let m = RealMatrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap();
        let inv = invert(&m).unwrap();
        let expected = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(inv.max_diff(&expected) <= 1e-12);
    }

    #[test]
    fn invert_identity() {
        let inv = invert(&RealMatrix::identity(3)).unwrap();
        assert!(inv.max_diff(&RealMatrix::identity(3)) <= 1e-15);
    }

    #[test]
    fn invert_zero_matrix_is_singular() {
        let m = RealMatrix::zeros(2);
        assert_eq!(invert(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn invert_residual_bound() {
        let m = example2();
        let inv = invert(&m).unwrap();
        let residual = m.mul(&inv).max_diff(&RealMatrix::identity(3));
        assert!(residual <= 1e-8 * m.norm_max().max(1.0));
    }

    #[test]
    fn solve_example2_all_ones() {
        let w = solve(&example2(), &[1.0, 1.0, 1.0]).unwrap();
        let expected = [-23.0 / 12.0, -17.0 / 12.0, -0.75];
        for (got, want) in w.iter().zip(expected) {
            assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = vec![3.0, -1.0, 0.5];
        assert_eq!(solve(&RealMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn solve_singular_errors() {
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(solve(&m, &[1.0, 1.0]), Err(Error::SingularMatrix));
    }

    #[test]
    fn determinant_of_singular_witness() {
        let m = RealMatrix::from_rows(&[
            vec![2.0 / 3.0, -4.0 / 3.0],
            vec![-1.0 / 3.0, 2.0 / 3.0],
        ])
        .unwrap();
        assert!(determinant(&m).abs() <= 1e-12);
    }

    #[test]
    fn determinant_identity_and_example2() {
        assert_eq!(determinant(&RealMatrix::identity(4)), 1.0);
        assert!((determinant(&example2()) + 24.0).abs() <= 1e-12);
    }

    #[test]
    fn eigenvalues_diagonal() {
        let m = RealMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        assert_eq!(symmetric_eigenvalues(&m, 1e-9).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigenvalues_pauli_x() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = symmetric_eigenvalues(&m, 1e-9).unwrap();
        assert!((eig[0] + 1.0).abs() <= 1e-12);
        assert!((eig[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eigenvalues_example2_all_negative() {
        let eig = symmetric_eigenvalues(&example2(), 1e-9).unwrap();
        assert!(eig.iter().all(|&l| l < 0.0), "{eig:?}");
    }

    #[test]
    fn eigenvalues_reject_asymmetric() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(symmetric_eigenvalues(&m, 1e-9), Err(Error::NotSymmetric));
    }

    #[test]
    fn eigenvalue_reconstruction_trace_and_det() {
        // sum(eig) = trace, prod(eig) = det for a few fixed symmetric matrices
        let cases = [
            example2(),
            RealMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap(),
            RealMatrix::from_rows(&[
                vec![1.0, 2.0, 3.0],
                vec![2.0, 3.0, 2.0],
                vec![3.0, 2.0, 2.0],
            ])
            .unwrap(),
        ];
        for m in cases {
            let eig = symmetric_eigenvalues(&m, 1e-9).unwrap();
            let trace: f64 = (0..m.dim()).map(|i| m[(i, i)]).sum();
            let sum: f64 = eig.iter().sum();
            let prod: f64 = eig.iter().product();
            assert!((sum - trace).abs() <= 1e-8 * m.norm_fro().max(1.0));
            let det = determinant(&m);
            assert!((prod - det).abs() <= 1e-6 * det.abs().max(1.0));
        }
    }

    #[test]
    fn from_rows_rejects_ragged_and_nonfinite() {
        assert_eq!(
            RealMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::NotSquare)
        );
        assert_eq!(
            RealMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        );
    }
}
