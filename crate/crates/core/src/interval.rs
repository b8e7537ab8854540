//! Interval matrices `[center - radius, center + radius]` with elementwise
//! bounds, membership tests, and the single-member stability check used to
//! lift non-singularity to robust stability of symmetric intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix, Tolerances};

/// Interval matrix stored as center plus entrywise-nonnegative radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalMatrix {
    center: RealMatrix,
    radius: RealMatrix,
}

impl IntervalMatrix {
    /// Build from center and radius; the radius must be entrywise `>= 0`.
    pub fn new(center: RealMatrix, radius: RealMatrix) -> Result<Self> {
        assert_eq!(center.dim(), radius.dim(), "dimension mismatch");
        for i in 0..radius.dim() {
            for j in 0..radius.dim() {
                if radius[(i, j)] < 0.0 {
                    return Err(Error::BoundsInverted { row: i, col: j });
                }
            }
        }
        Ok(Self { center, radius })
    }

    /// Build from elementwise lower and upper bound matrices.
    pub fn from_bounds(lower: &RealMatrix, upper: &RealMatrix) -> Result<Self> {
        assert_eq!(lower.dim(), upper.dim(), "dimension mismatch");
        let n = lower.dim();
        for i in 0..n {
            for j in 0..n {
                if lower[(i, j)] > upper[(i, j)] {
                    return Err(Error::BoundsInverted { row: i, col: j });
                }
            }
        }
        let center = RealMatrix::from_fn(n, |i, j| 0.5 * (upper[(i, j)] + lower[(i, j)]));
        let radius = RealMatrix::from_fn(n, |i, j| 0.5 * (upper[(i, j)] - lower[(i, j)]));
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &RealMatrix {
        &self.center
    }

    pub fn radius(&self) -> &RealMatrix {
        &self.radius
    }

    /// Recover `(lower, upper)`.
    pub fn bounds(&self) -> (RealMatrix, RealMatrix) {
        let n = self.dim();
        let lower = RealMatrix::from_fn(n, |i, j| self.center[(i, j)] - self.radius[(i, j)]);
        let upper = RealMatrix::from_fn(n, |i, j| self.center[(i, j)] + self.radius[(i, j)]);
        (lower, upper)
    }

    /// Membership test: `|M - center| <= radius + tol` entrywise.
    pub fn contains(&self, m: &RealMatrix, tol: f64) -> bool {
        assert_eq!(self.dim(), m.dim(), "dimension mismatch");
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if (m[(i, j)] - self.center[(i, j)]).abs() > self.radius[(i, j)] + tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Whether a symmetric matrix is Hurwitz stable: every eigenvalue `< -tol`.
///
/// Rejects matrices that are not symmetric within the default relative
/// symmetry tolerance.
pub fn is_stable_symmetric_member(m: &RealMatrix, tol: f64) -> Result<bool> {
    let eig = linalg::symmetric_eigenvalues(m, Tolerances::DEFAULT.symmetry_rel)?;
    let max = *eig.last().expect("non-empty spectrum");
    Ok(max < -tol)
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
    fn from_bounds_unit_perturbation() {
        let lower = RealMatrix::from_rows(&[vec![0.0, -2.0], vec![-1.0, 0.0]]).unwrap();
        let upper = RealMatrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let im = IntervalMatrix::from_bounds(&lower, &upper).unwrap();
        let center = RealMatrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap();
        let ones = RealMatrix::from_fn(2, |_, _| 1.0);
        assert_eq!(im.center(), &center);
        assert_eq!(im.radius(), &ones);
    }

    #[test]
    fn from_bounds_degenerate_interval() {
        let m = example2();
        let im = IntervalMatrix::from_bounds(&m, &m).unwrap();
        assert_eq!(im.center(), &m);
        assert_eq!(im.radius(), &RealMatrix::zeros(3));
    }

    #[test]
    fn from_bounds_rejects_inverted() {
        let lower = RealMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let upper = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(
            IntervalMatrix::from_bounds(&lower, &upper),
            Err(Error::BoundsInverted { row: 0, col: 1 })
        );
    }

    #[test]
    fn bounds_round_trip() {
        let center = example2();
        let radius = RealMatrix::from_fn(3, |i, j| 0.25 * ((i + 2 * j) as f64));
        let im = IntervalMatrix::new(center, radius).unwrap();
        let (lower, upper) = im.bounds();
        assert_eq!(IntervalMatrix::from_bounds(&lower, &upper).unwrap(), im);
    }

    #[test]
    fn contains_center_boundary_and_outside() {
        let im = IntervalMatrix::new(example2(), RealMatrix::from_fn(3, |_, _| 0.5)).unwrap();
        assert!(im.contains(im.center(), 0.0));
        let (lower, upper) = im.bounds();
        assert!(im.contains(&upper, 0.0));
        assert!(im.contains(&lower, 0.0));
        let mut outside = upper;
        outside[(1, 2)] += 1.0;
        assert!(!im.contains(&outside, 0.0));
    }

    #[test]
    fn contains_every_corner() {
        let im = IntervalMatrix::new(
            RealMatrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap(),
            RealMatrix::from_fn(2, |i, j| 0.1 + (i + j) as f64 * 0.2),
        )
        .unwrap();
        // all 2^(n*n) sign patterns of center + sign .* radius; the tolerance
        // absorbs the rounding of center + radius itself
        for mask in 0..16u32 {
            let corner = RealMatrix::from_fn(2, |i, j| {
                let sign = if mask >> (2 * i + j) & 1 == 1 { 1.0 } else { -1.0 };
                im.center()[(i, j)] + sign * im.radius()[(i, j)]
            });
            assert!(im.contains(&corner, 1e-12), "mask {mask}");
        }
    }

    #[test]
    fn stability_matches_eigenvalue_sign() {
        assert!(is_stable_symmetric_member(&example2(), 1e-9).unwrap());
        assert!(!is_stable_symmetric_member(&RealMatrix::identity(3), 1e-9).unwrap());
        assert!(is_stable_symmetric_member(&RealMatrix::identity(3).scale(-1.0), 1e-9).unwrap());
    }

    #[test]
    fn stability_rejects_asymmetric() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(is_stable_symmetric_member(&m, 1e-9), Err(Error::NotSymmetric));
    }

    #[test]
    fn stability_agrees_with_spectrum() {
        let cases = [example2(), RealMatrix::identity(3).scale(-0.5)];
        for m in cases {
            let eig = linalg::symmetric_eigenvalues(&m, 1e-9).unwrap();
            let expected = *eig.last().unwrap() < -1e-9;
            assert_eq!(is_stable_symmetric_member(&m, 1e-9).unwrap(), expected);
        }
    }
}
