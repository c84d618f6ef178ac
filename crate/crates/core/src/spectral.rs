//! Symmetric eigendecomposition with deterministic ordering and sign
//! conventions, plus spectrum normalization and the spectral growth check.

use crate::mat::Mat;
use crate::sampling::OrthoMatrix;
use crate::{Error, Real, Result};

/// Threshold below which an eigenvector entry is ignored when fixing the
/// column sign.
const SIGN_TOL: f64 = 1e-12;

/// Dense real symmetric matrix. The upper triangle is authoritative and the
/// lower triangle mirrors it bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    mat: Mat<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { mat: Mat::zeros(n) }
    }

    /// Build from a function on the upper triangle (`i <= j`); the lower
    /// triangle is mirrored.
    pub fn from_fn_upper(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Mat::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymMatrix { mat: m }
    }

    /// Build from full rows; entries must already be symmetric.
    pub fn from_rows(rows: &[&[T]]) -> Self {
        let n = rows.len();
        SymMatrix::from_fn_upper(n, |i, j| {
            debug_assert!(rows[i][j] == rows[j][i], "input rows not symmetric");
            rows[i][j]
        })
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.mat[(i, j)]
    }

    /// Set `A_ij` and `A_ji` together.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.mat[(i, j)] = v;
        self.mat[(j, i)] = v;
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn trace(&self) -> T {
        (0..self.n()).map(|i| self.get(i, i)).sum()
    }

    pub fn norm_max(&self) -> T {
        self.mat.as_slice().iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.mat.as_slice().iter().all(|x| x.is_finite())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        self.mat.mul_vec(v)
    }
}

/// Ascending eigenvalues and the matching orthonormal eigenvector columns.
///
/// Conventions: `lambdas` ascending (ties keep the solver's stable order);
/// the first entry of each eigenvector column larger than `1e-12` in
/// magnitude is positive.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    pub lambdas: Vec<T>,
    pub vectors: OrthoMatrix<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Eigenvector column for 0-based index `idx`.
    pub fn vector(&self, idx: usize) -> &[T] {
        self.vectors.col(idx)
    }

    /// Smallest gap between consecutive (sorted) eigenvalues.
    pub fn min_gap(&self) -> T {
        let mut gap = T::infinity();
        for w in self.lambdas.windows(2) {
            let g = w[1] - w[0];
            if g < gap {
                gap = g;
            }
        }
        gap
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Householder reduction to tridiagonal form followed by the implicitly
/// shifted QL iteration, then deterministic ascending sort and sign fixing.
/// Output is a pure function of the input bits.
pub fn symmetric_eigen<T: Real>(a: &SymMatrix<T>) -> Result<Spectrum<T>> {
    if !a.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let n = a.n();
    if n == 0 {
        return Err(Error::InvalidDimension { n, reason: "eigendecomposition needs n >= 1" });
    }
    let mut v = a.mat.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e, true);
    tql2(&mut d, &mut e, Some(&mut v))?;
    let (lambdas, vectors) = sort_and_fix_signs(d, v);
    Ok(Spectrum { lambdas, vectors: OrthoMatrix::from_mat_unchecked(vectors) })
}

/// Eigenvalues only, sorted ascending. Skips all eigenvector work, so it is
/// several times faster than [`symmetric_eigen`].
pub fn symmetric_eigenvalues<T: Real>(a: &SymMatrix<T>) -> Result<Vec<T>> {
    if !a.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let n = a.n();
    if n == 0 {
        return Err(Error::InvalidDimension { n, reason: "eigendecomposition needs n >= 1" });
    }
    let mut v = a.mat.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e, false);
    tql2(&mut d, &mut e, None)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(d)
}

/// Householder reduction of the symmetric matrix in `v` to tridiagonal form
/// (diagonal in `d`, subdiagonal in `e[1..]`). With `accumulate`, `v` is
/// overwritten with the accumulated orthogonal transformation.
fn tred2<T: Real>(v: &mut Mat<T>, d: &mut [T], e: &mut [T], accumulate: bool) {
    let n = v.n();
    if n == 1 {
        d[0] = v[(0, 0)];
        e[0] = T::zero();
        if accumulate {
            v[(0, 0)] = T::one();
        }
        return;
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        // Scale to avoid under/overflow.
        let mut scale = T::zero();
        let mut h = T::zero();
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
                v[(j, i)] = T::zero();
            }
        } else {
            // Generate the Householder vector.
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }

            // Apply the similarity transformation to the remaining rows.
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let delta = f * e[k] + g * d[k];
                    v[(k, j)] -= delta;
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }

    if accumulate {
        // Accumulate the Householder transformations.
        for i in 0..n - 1 {
            v[(n - 1, i)] = v[(i, i)];
            v[(i, i)] = T::one();
            let h = d[i + 1];
            if h != T::zero() {
                for k in 0..=i {
                    d[k] = v[(k, i + 1)] / h;
                }
                for j in 0..=i {
                    let mut g = T::zero();
                    for k in 0..=i {
                        g += v[(k, i + 1)] * v[(k, j)];
                    }
                    for k in 0..=i {
                        let delta = g * d[k];
                        v[(k, j)] -= delta;
                    }
                }
            }
            for k in 0..=i {
                v[(k, i + 1)] = T::zero();
            }
        }
        for j in 0..n {
            d[j] = v[(n - 1, j)];
            v[(n - 1, j)] = T::zero();
        }
        v[(n - 1, n - 1)] = T::one();
    } else {
        for j in 0..n {
            d[j] = v[(n - 1, j)];
        }
    }
    e[0] = T::zero();
}

/// Implicitly shifted QL iteration on the tridiagonal form. Eigenvalues land
/// in `d`; when `v` is given, its columns are rotated into eigenvectors.
fn tql2<T: Real>(d: &mut [T], e: &mut [T], mut v: Option<&mut Mat<T>>) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m >= n {
            m = n - 1;
        }

        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > 50 {
                    return Err(Error::NoConvergence(50));
                }

                // Implicit shift from the 2x2 leading block.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (T::of_f64(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL sweep from m down to l.
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(v) = v.as_deref_mut() {
                        let (ci, ci1) = v.two_cols_mut(i, i + 1);
                        for k in 0..n {
                            let h = ci1[k];
                            ci1[k] = s * ci[k] + c * h;
                            ci[k] = c * ci[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Stable ascending sort of eigenpairs plus the sign convention: the first
/// entry of each column whose magnitude exceeds `1e-12` is made positive.
fn sort_and_fix_signs<T: Real>(d: Vec<T>, v: Mat<T>) -> (Vec<T>, Mat<T>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("eigenvalues are finite"));

    let lambdas: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let tol = T::of_f64(SIGN_TOL);
    let mut out = Mat::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        let col = v.col(src);
        let flip = match col.iter().find(|x| x.abs() > tol) {
            Some(x) => *x < T::zero(),
            None => false,
        };
        let target = out.col_mut(dst);
        if flip {
            for (o, &x) in target.iter_mut().zip(col) {
                *o = -x;
            }
        } else {
            target.copy_from_slice(col);
        }
    }
    (lambdas, out)
}

/// Affine map `x ↦ (x − shift) / scale` recorded by [`normalize_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap<T> {
    pub shift: T,
    pub scale: T,
}

/// Population mean and standard deviation (divisor `n`).
pub fn mean_std<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::of_usize(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n;
    (mean, var.sqrt())
}

/// Center and scale to population mean 0 and std 1, returning the affine map
/// that was applied.
pub fn normalize_spectrum<T: Real>(lambdas: &[T]) -> Result<(Vec<T>, AffineMap<T>)> {
    if lambdas.is_empty() {
        return Err(Error::InvalidDimension { n: 0, reason: "cannot normalize an empty spectrum" });
    }
    let (mean, std) = mean_std(lambdas);
    if !(std > T::zero()) {
        return Err(Error::ZeroVariance);
    }
    let out = lambdas.iter().map(|&x| (x - mean) / std).collect();
    Ok((out, AffineMap { shift: mean, scale: std }))
}

/// Check the spectral growth bound: `max |(λ − avg)/std| ≤ C · log10(n)^c`.
pub fn check_spectral_growth<T: Real>(lambdas: &[T], big_c: T, small_c: T) -> Result<bool> {
    let (normalized, _) = normalize_spectrum(lambdas)?;
    let sup = normalized.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let n = T::of_usize(lambdas.len());
    let bound = big_c * n.log10().powf(small_c);
    Ok(sup <= bound)
}
