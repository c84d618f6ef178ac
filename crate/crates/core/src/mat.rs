//! Minimal dense square-matrix storage shared by the numeric modules.

use crate::Real;

/// Dense square matrix in column-major order.
///
/// Column-major keeps eigenvector columns contiguous, which is what the
/// nodal-count inner loops and the QL rotation updates iterate over.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Mat::zeros(n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.n..(j + 1) * self.n]
    }

    /// Mutable access to two distinct columns at once (needed by plane
    /// rotations).
    pub fn two_cols_mut(&mut self, a: usize, b: usize) -> (&mut [T], &mut [T]) {
        assert!(a != b);
        let n = self.n;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (left, right) = self.data.split_at_mut(hi * n);
        let lo_col = &mut left[lo * n..(lo + 1) * n];
        let hi_col = &mut right[..n];
        if a < b { (lo_col, hi_col) } else { (hi_col, lo_col) }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// `self * v` for a vector `v` of length `n`.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![T::zero(); self.n];
        for j in 0..self.n {
            let c = self.col(j);
            let vj = v[j];
            for i in 0..self.n {
                out[i] += c[i] * vj;
            }
        }
        out
    }

    /// Largest absolute deviation of `selfᵀ self` from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for a in 0..self.n {
            for b in a..self.n {
                let dot = dot(self.col(a), self.col(b));
                let target = if a == b { T::one() } else { T::zero() };
                let dev = (dot - target).abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[j * self.n + i]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[j * self.n + i]
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

#[inline]
pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
