//! Small dense linear-algebra helpers.
//!
//! The kernel recursions only ever touch square matrices that grow by one
//! row and column at a time, so a flat row-major buffer is all we need.

use crate::error::{Error, Result};

/// Square matrix stored row-major with a row stride of `cap`, so that it
/// can grow by one row and column without reallocating every time.
#[derive(Debug, Clone)]
pub struct Matrix {
    n: usize,
    cap: usize,
    data: Vec<f64>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && (0..self.n).all(|i| self.row(i) == other.row(i))
    }
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            cap: n,
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

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// 1×1 matrix holding `v`.
    pub fn scalar(v: f64) -> Self {
        Self {
            n: 1,
            cap: 1,
            data: vec![v],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cap..i * self.cap + self.n]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.data[i * n..(i + 1) * n].iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Largest |a_ij − a_ji|.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Rank-one bordered inverse update.
    ///
    /// Given `self = A⁻¹`, returns the inverse of `[[A, h], [hᵀ, c]]` where
    /// `z = A⁻¹h` and `schur = c − hᵀz`:
    /// `schur⁻¹ · [[schur·A⁻¹ + z zᵀ, −z], [−zᵀ, 1]]`.
    pub fn bordered_inverse(&self, z: &[f64], schur: f64) -> Matrix {
        let mut out = self.clone();
        out.border_in_place(z, schur);
        out
    }

    /// In-place form of [`Matrix::bordered_inverse`].
    pub fn border_in_place(&mut self, z: &[f64], schur: f64) {
        let n = self.n;
        debug_assert_eq!(z.len(), n);
        if n + 1 > self.cap {
            self.reserve((2 * self.cap).max(n + 1));
        }
        let cap = self.cap;
        let inv = 1.0 / schur;
        for i in 0..n {
            let zi = z[i] * inv;
            let row = &mut self.data[i * cap..i * cap + n];
            for (a, zj) in row.iter_mut().zip(z) {
                *a += zi * zj;
            }
            self.data[i * cap + n] = -zi;
            self.data[n * cap + i] = -zi;
        }
        self.data[n * cap + n] = inv;
        self.n = n + 1;
    }

    fn reserve(&mut self, cap: usize) {
        let mut data = vec![0.0; cap * cap];
        for i in 0..self.n {
            data[i * cap..i * cap + self.n].copy_from_slice(self.row(i));
        }
        self.data = data;
        self.cap = cap;
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n && j < self.n);
        &self.data[i * self.cap + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.data[i * self.cap + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// Sweeps until the off-diagonal Frobenius norm drops below `tol` times the
/// matrix norm, or the sweep budget runs out.
pub fn symmetric_eigenvalues(m: &Matrix, tol: f64) -> Result<Vec<f64>> {
    let n = m.dim();
    if m.max_asymmetry() > 1e-9 * (1.0 + frobenius(m)) {
        return Err(Error::Argument("matrix is not symmetric".into()));
    }
    let mut a = m.clone();
    let scale = frobenius(&a).max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= tol * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

fn frobenius(m: &Matrix) -> f64 {
    (0..m.n).flat_map(|i| m.row(i)).map(|v| v * v).sum::<f64>().sqrt()
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    s.sqrt()
}
