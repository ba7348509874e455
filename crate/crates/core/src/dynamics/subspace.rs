use alloc::vec::Vec;

use crate::linalg::{symmetric_eigen, LinearMap};
use crate::{Error, Point};

/// An affine subspace `base + span(basis)` fitted to a point cloud.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    pub dim: usize,
    /// Centroid of the fitted points.
    pub base: Point,
    /// Orthonormal basis, ordered by decreasing variance.
    pub basis: Vec<Point>,
    /// Largest point-to-subspace distance.
    pub residual: f64,
}

impl AffineSubspace {
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let mut r: Point = p.iter().zip(&self.base).map(|(x, c)| x - c).collect();
        for v in &self.basis {
            let t: f64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
            for (ri, vi) in r.iter_mut().zip(v) {
                *ri -= t * vi;
            }
        }
        crate::norm(&r)
    }
}

/// Smallest-dimensional affine subspace through the centroid whose largest
/// point distance is at most `residual_tol`. Directions are the principal
/// axes of the centered second-moment matrix.
pub fn fit_affine_subspace(points: &[Point], residual_tol: f64) -> Result<AffineSubspace, Error> {
    let first = points.first().ok_or(Error::EmptySet)?;
    let q = first.len();
    if points.iter().any(|p| p.len() != q) {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: points.iter().find(|p| p.len() != q).unwrap().len(),
        });
    }
    if points.iter().all(|p| p == first) {
        return Err(Error::Degenerate);
    }
    let n = points.len() as f64;
    let mut base = alloc::vec![0.0; q];
    for p in points {
        for (b, x) in base.iter_mut().zip(p) {
            *b += x;
        }
    }
    base.iter_mut().for_each(|b| *b /= n);

    let mut moment = alloc::vec![0.0; q * q];
    for p in points {
        for i in 0..q {
            for j in 0..q {
                moment[i * q + j] += (p[i] - base[i]) * (p[j] - base[j]);
            }
        }
    }
    let moment = LinearMap::from_row_major(q, moment.into_iter().map(|m| m / n).collect())?;
    let (_, vectors) = symmetric_eigen(&moment)?;

    let mut fit = AffineSubspace { dim: 0, base, basis: Vec::new(), residual: 0.0 };
    for d in 0..=q {
        fit.dim = d;
        fit.basis = vectors[..d].iter().map(|v| canonical_sign(v)).collect();
        fit.residual = points.iter().map(|p| fit.distance_to(p)).fold(0.0, f64::max);
        if fit.residual <= residual_tol {
            break;
        }
    }
    Ok(fit)
}

/// Flips `v` so that its largest-magnitude entry (first on ties) is positive.
fn canonical_sign(v: &[f64]) -> Point {
    let mut lead = 0;
    for (i, x) in v.iter().enumerate() {
        if libm::fabs(*x) > libm::fabs(v[lead]) + 1e-12 {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        v.iter().map(|x| -x).collect()
    } else {
        v.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn collinear_points_on_the_axis() {
        let points: Vec<Point> = (-5..=5).map(|i| vec![f64::from(i) * 0.3, 0.0]).collect();
        let fit = fit_affine_subspace(&points, 1e-9).unwrap();
        assert_eq!(fit.dim, 1);
        assert_eq!(fit.residual, 0.0);
        assert_eq!(fit.basis, vec![vec![1.0, 0.0]]);
        assert_eq!(fit.base[1], 0.0);
    }

    #[test]
    fn tilted_line_in_space() {
        let points: Vec<Point> = (0..20)
            .map(|i| {
                let t = f64::from(i);
                vec![1.0 + t, 2.0 - 2.0 * t, 0.5 * t]
            })
            .collect();
        let fit = fit_affine_subspace(&points, 1e-9).unwrap();
        assert_eq!(fit.dim, 1);
        let n = libm::sqrt(1.0 + 4.0 + 0.25);
        let expected = [-1.0 / n, 2.0 / n, -0.5 / n];
        for (a, b) in fit.basis[0].iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_square_is_two_dimensional() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let points: Vec<Point> = (0..500).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let fit = fit_affine_subspace(&points, 1e-6).unwrap();
        assert_eq!(fit.dim, 2);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn identical_points_are_degenerate() {
        assert_eq!(fit_affine_subspace(&[vec![1.0, 1.0], vec![1.0, 1.0]], 1e-6), Err(Error::Degenerate));
        assert_eq!(fit_affine_subspace(&[], 1e-6), Err(Error::EmptySet));
    }
}
