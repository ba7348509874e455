//! Dense row-major linear algebra for the small dimensions used by the
//! transversal models (q is expected to be at most 4).

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Point};

/// Iteration cap shared by the iterative eigenvalue routines.
pub const EIGEN_ITERATION_CAP: usize = 10_000;
/// Convergence tolerance of the iterative eigenvalue routines.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

/// A q×q real matrix acting on ℝ^q.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    dim: usize,
    entries: Vec<f64>,
}

impl LinearMap {
    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = s;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = *d;
        }
        m
    }

    /// Counter-clockwise rotation of the plane by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        Self { dim: 2, entries: vec![c, -s, s, c] }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be `dim²`.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self, Error> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// Matrix product `self · rhs`. Both factors must share the dimension.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product of mismatched dimensions");
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Self { dim: n, entries: out }
    }

    /// Matrix-vector product. `x` must have length `dim`.
    pub fn apply(&self, x: &[f64]) -> Point {
        debug_assert_eq!(x.len(), self.dim);
        self.entries
            .chunks(self.dim.max(1))
            .take(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j];
            }
        }
        Self { dim: n, entries: out }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    /// `I − self`.
    pub fn identity_minus(&self) -> Self {
        let mut out = self.scale(-1.0);
        for i in 0..self.dim {
            out.entries[i * self.dim + i] += 1.0;
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| libm::fabs(*a)).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|a| a * a).sum())
    }

    pub fn determinant(&self) -> f64 {
        match Lu::factor(self) {
            Some(lu) => lu.determinant(),
            None => 0.0,
        }
    }

    /// Solves `self · x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Option<Point> {
        Lu::factor(self).map(|lu| lu.solve(b))
    }

    /// Inverse matrix, or `None` when a pivot vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let lu = Lu::factor(self)?;
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = lu.solve(&e);
            for i in 0..n {
                out[i * n + j] = col[i];
            }
        }
        Some(Self { dim: n, entries: out })
    }

    /// Largest singular value.
    ///
    /// Closed form for q ≤ 2; cyclic Jacobi on AᵀA otherwise.
    pub fn operator_norm(&self) -> Result<f64, Error> {
        match self.dim {
            0 => Ok(0.0),
            1 => Ok(libm::fabs(self.entries[0])),
            2 => {
                let [a, b, c, d] = [self.entries[0], self.entries[1], self.entries[2], self.entries[3]];
                let sum_sq = a * a + b * b + c * c + d * d;
                let det = a * d - b * c;
                let disc = libm::sqrt((sum_sq * sum_sq - 4.0 * det * det).max(0.0));
                Ok(libm::sqrt(0.5 * (sum_sq + disc)))
            }
            _ => {
                let gram = self.transpose().mul(self);
                let (values, _) = symmetric_eigen(&gram)?;
                Ok(libm::sqrt(values.first().copied().unwrap_or(0.0).max(0.0)))
            }
        }
    }

    /// Largest eigenvalue modulus.
    ///
    /// Closed form for q ≤ 2; Hessenberg reduction followed by Francis
    /// double-shift QR otherwise.
    pub fn spectral_radius(&self) -> Result<f64, Error> {
        match self.dim {
            0 => Ok(0.0),
            1 => Ok(libm::fabs(self.entries[0])),
            2 => {
                let [a, b, c, d] = [self.entries[0], self.entries[1], self.entries[2], self.entries[3]];
                let half_trace = 0.5 * (a + d);
                let det = a * d - b * c;
                let disc = half_trace * half_trace - det;
                if disc >= 0.0 {
                    let root = libm::sqrt(disc);
                    Ok(libm::fabs(half_trace + root).max(libm::fabs(half_trace - root)))
                } else {
                    Ok(libm::sqrt(det))
                }
            }
            _ => Ok(self.eigenvalues()?.iter().map(|(re, im)| libm::hypot(*re, *im)).fold(0.0, f64::max)),
        }
    }

    /// All eigenvalues as `(re, im)` pairs, in no particular order.
    pub fn eigenvalues(&self) -> Result<Vec<(f64, f64)>, Error> {
        hessenberg_qr_eigenvalues(self)
    }
}

/// LU factorization with partial pivoting.
struct Lu {
    dim: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn factor(m: &LinearMap) -> Option<Self> {
        let n = m.dim;
        let mut lu = m.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let pivot_row = (k..n).max_by(|&i, &j| libm::fabs(lu[i * n + k]).total_cmp(&libm::fabs(lu[j * n + k])))?;
            if lu[pivot_row * n + k] == 0.0 {
                return None;
            }
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }
        Some(Self { dim: n, lu, perm, sign })
    }

    fn determinant(&self) -> f64 {
        (0..self.dim).map(|i| self.lu[i * self.dim + i]).product::<f64>() * self.sign
    }

    fn solve(&self, b: &[f64]) -> Point {
        let n = self.dim;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

/// Outcome of solving a possibly singular square system.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemSolution {
    Unique(Point),
    Infinite,
    Inconsistent,
}

/// Solves `m · x = b`, distinguishing unique, underdetermined and
/// inconsistent systems with a pivot tolerance relative to the matrix scale.
pub fn solve_classified(m: &LinearMap, b: &[f64], rel_tol: f64) -> SystemSolution {
    let n = m.dim;
    let rhs_scale = b.iter().fold(0.0, |acc: f64, v| acc.max(libm::fabs(*v)));
    let tol = rel_tol * m.max_abs();
    let rhs_tol = rel_tol * rhs_scale.max(m.max_abs());
    // Augmented row echelon form with full row pivoting.
    let w = n + 1;
    let mut aug = vec![0.0; n * w];
    for i in 0..n {
        aug[i * w..i * w + n].copy_from_slice(&m.entries[i * n..(i + 1) * n]);
        aug[i * w + n] = b[i];
    }
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let best = (row..n)
            .max_by(|&i, &j| libm::fabs(aug[i * w + col]).total_cmp(&libm::fabs(aug[j * w + col])))
            .unwrap_or(row);
        if libm::fabs(aug[best * w + col]) <= tol {
            continue;
        }
        for j in 0..w {
            aug.swap(row * w + j, best * w + j);
        }
        let pivot = aug[row * w + col];
        for i in 0..n {
            if i != row {
                let factor = aug[i * w + col] / pivot;
                if factor != 0.0 {
                    for j in col..w {
                        aug[i * w + j] -= factor * aug[row * w + j];
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    for i in row..n {
        if libm::fabs(aug[i * w + n]) > rhs_tol {
            return SystemSolution::Inconsistent;
        }
    }
    if row < n {
        return SystemSolution::Infinite;
    }
    let x = (0..n).map(|i| aug[i * w + n] / aug[i * w + pivot_cols[i]]).collect();
    SystemSolution::Unique(x)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching unit
/// eigenvectors (one per entry of the second vector).
pub fn symmetric_eigen(m: &LinearMap) -> Result<(Vec<f64>, Vec<Point>), Error> {
    let n = m.dim;
    let mut a = m.entries.clone();
    let mut v = LinearMap::identity(n).entries;
    let scale = m.frobenius_norm();
    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if libm::sqrt(off) <= EIGEN_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        sweeps += 1;
        if sweeps * n * n > EIGEN_ITERATION_CAP {
            return Err(Error::ConvergenceFailure { iterations: sweeps * n * n });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order.iter().map(|&j| (0..n).map(|k| v[k * n + j]).collect()).collect();
    Ok((values, vectors))
}

/// Eigenvalues via reduction to upper Hessenberg form (Gaussian similarity
/// transforms) and the Francis double-shift QR iteration.
fn hessenberg_qr_eigenvalues(m: &LinearMap) -> Result<Vec<(f64, f64)>, Error> {
    let n = m.dim;
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based storage keeps the classical index arithmetic readable.
    let w = n + 1;
    let mut a = vec![0.0; w * w];
    for i in 0..n {
        for j in 0..n {
            a[(i + 1) * w + j + 1] = m.get(i, j);
        }
    }
    let at = |i: usize, j: usize| i * w + j;

    for mm in 2..n {
        let mut x = 0.0;
        let mut i = mm;
        for j in mm..=n {
            if libm::fabs(a[at(j, mm - 1)]) > libm::fabs(x) {
                x = a[at(j, mm - 1)];
                i = j;
            }
        }
        if i != mm {
            for j in (mm - 1)..=n {
                a.swap(at(i, j), at(mm, j));
            }
            for j in 1..=n {
                a.swap(at(j, i), at(j, mm));
            }
        }
        if x != 0.0 {
            for i in (mm + 1)..=n {
                let mut y = a[at(i, mm - 1)];
                if y != 0.0 {
                    y /= x;
                    a[at(i, mm - 1)] = y;
                    for j in mm..=n {
                        a[at(i, j)] -= y * a[at(mm, j)];
                    }
                    for j in 1..=n {
                        a[at(j, mm)] += y * a[at(j, i)];
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..i.saturating_sub(1) {
            a[at(i, j)] = 0.0;
        }
    }

    let mut wr = vec![0.0; w];
    let mut wi = vec![0.0; w];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += libm::fabs(a[at(i, j)]);
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let mut total_its = 0usize;
    let sign = |a: f64, b: f64| if b >= 0.0 { libm::fabs(a) } else { -libm::fabs(a) };
    while nn >= 1 {
        let mut its = 0usize;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = libm::fabs(a[at(l - 1, l - 1)]) + libm::fabs(a[at(l, l)]);
                if s == 0.0 {
                    s = anorm;
                }
                if libm::fabs(a[at(l, l - 1)]) + s == s {
                    a[at(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[at(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[at(nn - 1, nn - 1)];
            let mut ww = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + ww;
                let mut z = libm::sqrt(libm::fabs(q));
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - ww / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }
            if total_its >= EIGEN_ITERATION_CAP {
                return Err(Error::ConvergenceFailure { iterations: total_its });
            }
            if its > 0 && its.is_multiple_of(10) {
                t += x;
                for i in 1..=nn {
                    a[at(i, i)] -= x;
                }
                let s = libm::fabs(a[at(nn, nn - 1)]) + libm::fabs(a[at(nn - 1, nn - 2)]);
                x = 0.75 * s;
                y = x;
                ww = -0.4375 * s * s;
            }
            its += 1;
            total_its += 1;

            let (mut p, mut q, mut r): (f64, f64, f64);
            let mut mm = nn - 2;
            loop {
                let z = a[at(mm, mm)];
                let rr = x - z;
                let s = y - z;
                p = (rr * s - ww) / a[at(mm + 1, mm)] + a[at(mm, mm + 1)];
                q = a[at(mm + 1, mm + 1)] - z - rr - s;
                r = a[at(mm + 2, mm + 1)];
                let s = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                p /= s;
                q /= s;
                r /= s;
                if mm == l {
                    break;
                }
                let u = libm::fabs(a[at(mm, mm - 1)]) * (libm::fabs(q) + libm::fabs(r));
                let v = libm::fabs(p)
                    * (libm::fabs(a[at(mm - 1, mm - 1)]) + libm::fabs(z) + libm::fabs(a[at(mm + 1, mm + 1)]));
                if u + v == v {
                    break;
                }
                mm -= 1;
            }
            for i in (mm + 2)..=nn {
                a[at(i, i - 2)] = 0.0;
                if i != mm + 2 {
                    a[at(i, i - 3)] = 0.0;
                }
            }
            let mut k = mm;
            while k < nn {
                if k != mm {
                    p = a[at(k, k - 1)];
                    q = a[at(k + 1, k - 1)];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[at(k + 2, k - 1)];
                    }
                    x = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign(libm::sqrt(p * p + q * q + r * r), p);
                if s != 0.0 {
                    if k == mm {
                        if l != mm {
                            a[at(k, k - 1)] = -a[at(k, k - 1)];
                        }
                    } else {
                        a[at(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[at(k, j)] + q * a[at(k + 1, j)];
                        if k != nn - 1 {
                            pp += r * a[at(k + 2, j)];
                            a[at(k + 2, j)] -= pp * z;
                        }
                        a[at(k + 1, j)] -= pp * y;
                        a[at(k, j)] -= pp * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[at(i, k)] + y * a[at(i, k + 1)];
                        if k != nn - 1 {
                            pp += z * a[at(i, k + 2)];
                            a[at(i, k + 2)] -= pp * r;
                        }
                        a[at(i, k + 1)] -= pp * q;
                        a[at(i, k)] -= pp;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn power_iteration_norm(m: &LinearMap, steps: usize) -> f64 {
        let gram = m.transpose().mul(m);
        let mut x = vec![1.0, 0.3];
        let mut lambda = 0.0;
        for _ in 0..steps {
            let y = gram.apply(&x);
            let n = crate::norm(&y);
            if n == 0.0 {
                return 0.0;
            }
            lambda = n / crate::norm(&x);
            x = y.iter().map(|v| v / n).collect();
        }
        libm::sqrt(lambda)
    }

    #[test]
    fn diagonal_norm_and_radius() {
        let m = LinearMap::diagonal(&[0.5, 2.0]);
        assert_eq!(m.operator_norm().unwrap(), 2.0);
        assert_eq!(m.spectral_radius().unwrap(), 2.0);
    }

    #[test]
    fn rotation_times_scalar_has_norm_half() {
        for k in 0..16 {
            let theta = k as f64 * 0.41;
            let m = LinearMap::rotation(theta).mul(&LinearMap::scalar(2, 0.5));
            assert!((m.operator_norm().unwrap() - 0.5).abs() < 1e-15);
            assert!((m.spectral_radius().unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn norm_matches_power_iteration_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let m = LinearMap::from_row_major(2, entries).unwrap();
            let oracle = power_iteration_norm(&m, 100_000);
            assert!((m.operator_norm().unwrap() - oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn radius_matches_power_iteration_for_real_dominant_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 30 {
            let entries: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let m = LinearMap::from_row_major(2, entries).unwrap();
            let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            let disc = (a - d) * (a - d) / 4.0 + b * c;
            // Power iteration needs a well separated real dominant eigenvalue.
            if disc < 0.05 || ((a + d) / 2.0).abs() < 0.05 {
                continue;
            }
            let mut x = vec![0.6, 0.8];
            let mut ratio = 0.0;
            for _ in 0..100_000 {
                let y = m.apply(&x);
                let n = crate::norm(&y);
                ratio = n;
                x = y.iter().map(|v| v / n).collect();
            }
            assert!((m.spectral_radius().unwrap() - ratio).abs() < 1e-8, "{m:?}");
            checked += 1;
        }
    }

    #[test]
    fn qr_eigenvalues_of_known_matrices() {
        let m = LinearMap::diagonal(&[0.5, -3.0, 2.0]);
        assert!((m.spectral_radius().unwrap() - 3.0).abs() < 1e-12);

        // Block rotation with modulus 0.9 plus a real 0.2.
        let mut rows = vec![vec![0.0; 3]; 3];
        let r = LinearMap::rotation(1.1).scale(0.9);
        rows[0][0] = r.get(0, 0);
        rows[0][1] = r.get(0, 1);
        rows[1][0] = r.get(1, 0);
        rows[1][1] = r.get(1, 1);
        rows[2][2] = 0.2;
        let m = LinearMap::from_rows(&rows).unwrap();
        assert!((m.spectral_radius().unwrap() - 0.9).abs() < 1e-12);
        assert!((m.operator_norm().unwrap() - 0.9).abs() < 1e-12);

        // Companion matrix of (x-1)(x-2)(x-3)(x+4).
        let m = LinearMap::from_rows(&[
            vec![2.0, 13.0, -38.0, 24.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let mut eig: Vec<f64> = m.eigenvalues().unwrap().iter().map(|e| e.0).collect();
        eig.sort_by(f64::total_cmp);
        for (got, want) in eig.iter().zip([-4.0, 1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-9, "{eig:?}");
        }
    }

    #[test]
    fn repeated_eigenvalues_converge() {
        let m = LinearMap::scalar(4, 0.5);
        assert!((m.spectral_radius().unwrap() - 0.5).abs() < 1e-15);
        let jordan = LinearMap::from_rows(&[vec![0.5, 1.0, 0.0], vec![0.0, 0.5, 1.0], vec![0.0, 0.0, 0.5]]).unwrap();
        assert!((jordan.spectral_radius().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn norm_dominates_radius_in_higher_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in 3..=4 {
            for _ in 0..100 {
                let entries: Vec<f64> = (0..q * q).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let m = LinearMap::from_row_major(q, entries).unwrap();
                let norm = m.operator_norm().unwrap();
                let radius = m.spectral_radius().unwrap();
                assert!(norm + 1e-12 >= radius);
                // |det| is the product of eigenvalue moduli, bounded by radius^q.
                assert!(m.determinant().abs() <= radius.powi(q as i32) * (1.0 + 1e-9) + 1e-12);
            }
        }
    }

    #[test]
    fn classified_solve() {
        let id = LinearMap::identity(2);
        assert_eq!(solve_classified(&id.identity_minus(), &[0.0, 0.0], 1e-12), SystemSolution::Infinite);
        assert_eq!(solve_classified(&id.identity_minus(), &[1.0, 0.0], 1e-12), SystemSolution::Inconsistent);
        let m = LinearMap::diagonal(&[0.5, 0.5]);
        assert_eq!(solve_classified(&m, &[1.0, 0.0], 1e-12), SystemSolution::Unique(vec![2.0, 0.0]));
    }

    #[test]
    fn symmetric_eigen_orders_descending() {
        let m = LinearMap::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]]).unwrap();
        let (values, vectors) = symmetric_eigen(&m).unwrap();
        for (got, want) in values.iter().zip([5.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (value, vector) in values.iter().zip(&vectors) {
            let image = m.apply(vector);
            for (a, b) in image.iter().zip(vector) {
                assert!((a - value * b).abs() < 1e-10);
            }
        }
    }
}
