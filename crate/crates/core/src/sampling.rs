//! Reproducible random streams and the primitive samplers built on them:
//! standard Gaussian vectors, Haar-distributed orthogonal matrices, and the
//! projection construction of the first two Haar columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::mat::{dot, norm2, Mat};
use crate::{Error, Real, Result};

/// Master seed plus the derivation rule mapping `(master_seed, stream_id)`
/// to an independent stream.
///
/// ChaCha is counter-based, so any stream can be derived directly without
/// walking the generator: workers sample concurrently from distinct stream
/// ids and still reproduce a single-threaded run bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPlan {
    pub master_seed: u64,
}

impl SeedPlan {
    pub fn new(master_seed: u64) -> Self {
        SeedPlan { master_seed }
    }

    /// Derive the deterministic stream for `stream_id`.
    pub fn stream(&self, stream_id: u64) -> RngStream {
        derive_stream(self, stream_id)
    }
}

/// A single random stream. Single-threaded by design; use one stream per
/// worker or replicate.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

/// Derive an independent stream from `(plan.master_seed, stream_id)`.
///
/// The 256-bit ChaCha key is expanded from the master seed with SplitMix64
/// (pinned here rather than borrowed from `SeedableRng::seed_from_u64` so
/// golden files do not depend on `rand` internals); the stream id selects
/// the ChaCha stream.
pub fn derive_stream(plan: &SeedPlan, stream_id: u64) -> RngStream {
    let mut key = [0u8; 32];
    let mut state = plan.master_seed;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream_id);
    RngStream { rng }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    /// One standard normal draw.
    #[inline]
    pub fn standard_normal<T: Real>(&mut self) -> T {
        let z: f64 = self.rng.sample(StandardNormal);
        T::of_f64(z)
    }

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn uniform<T: Real>(&mut self) -> T {
        T::of_f64(self.rng.random::<f64>())
    }

    /// Uniform sign in `{-1, +1}`.
    #[inline]
    pub fn sign<T: Real>(&mut self) -> T {
        if self.rng.random::<bool>() {
            T::one()
        } else {
            -T::one()
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }
}

/// Vector of i.i.d. standard normal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianVector<T> {
    entries: Vec<T>,
}

impl<T: Real> GaussianVector<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<T> {
        self.entries
    }
}

/// Square matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoMatrix<T> {
    mat: Mat<T>,
}

impl<T: Real> OrthoMatrix<T> {
    /// Wrap a matrix that is already orthonormal by construction.
    pub(crate) fn from_mat_unchecked(mat: Mat<T>) -> Self {
        OrthoMatrix { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    /// k-th column (0-based).
    pub fn col(&self, j: usize) -> &[T] {
        self.mat.col(j)
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub(crate) fn as_mat_mut(&mut self) -> &mut Mat<T> {
        &mut self.mat
    }

    /// Largest absolute entry of `QᵀQ − I`.
    pub fn orthonormality_defect(&self) -> T {
        self.mat.orthonormality_defect()
    }
}

/// Sample `n` i.i.d. standard normals from the stream.
pub fn sample_gaussian_vector<T: Real>(n: usize, stream: &mut RngStream) -> Result<GaussianVector<T>> {
    if n == 0 {
        return Err(Error::InvalidDimension { n, reason: "gaussian vector needs n >= 1" });
    }
    let entries = (0..n).map(|_| stream.standard_normal()).collect();
    Ok(GaussianVector { entries })
}

/// Sample a Haar-distributed orthogonal matrix.
///
/// QR of an i.i.d. standard Gaussian matrix, with every column of `Q`
/// multiplied by the sign of the matching diagonal entry of `R`
/// (`sgn(0) = +1`). The positive-diagonal factor is the unique QR
/// representative, which makes `Q` exactly Haar.
pub fn sample_haar_orthogonal<T: Real>(n: usize, stream: &mut RngStream) -> Result<OrthoMatrix<T>> {
    if n == 0 {
        return Err(Error::InvalidDimension { n, reason: "orthogonal matrix needs n >= 1" });
    }
    let mut a = Mat::from_fn(n, |_, _| stream.standard_normal());
    let q = householder_qr_q(&mut a);
    Ok(OrthoMatrix::from_mat_unchecked(q))
}

/// Householder QR of `a` (destroyed), returning `Q` with the diagonal of
/// `R` forced nonnegative.
fn householder_qr_q<T: Real>(a: &mut Mat<T>) -> Mat<T> {
    let n = a.n();
    let mut q = Mat::identity(n);
    let mut r_diag_sign = vec![T::one(); n];

    for j in 0..n {
        // Build the reflector for column j below the diagonal.
        let norm = norm2(&a.col(j)[j..]);
        if norm == T::zero() {
            // Zero column: R_jj = 0, sgn(0) = +1, nothing to reflect.
            continue;
        }
        let x0 = a.col(j)[j];
        let alpha = if x0 >= T::zero() { -norm } else { norm };
        r_diag_sign[j] = if alpha >= T::zero() { T::one() } else { -T::one() };

        let mut v = a.col(j)[j..].to_vec();
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 == T::zero() {
            continue;
        }
        let two = T::of_f64(2.0);

        // Apply I - 2vvᵀ/|v|² to the trailing columns of a.
        for c in j..n {
            let col = &mut a.col_mut(c)[j..];
            let proj = dot(&v, col) / vnorm2;
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= two * proj * *vi;
            }
        }
        // Accumulate the same reflection into Q (on the right: Q ← Q·H).
        for c in 0..n {
            let col = &mut q.col_mut(c)[j..];
            let proj = dot(&v, col) / vnorm2;
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= two * proj * *vi;
            }
        }
    }

    // Q accumulated as H_{n-1}···H_1 acting on I equals Qᵀ of the
    // factorization; transpose in place to get Q itself.
    let mut qt = Mat::zeros(n);
    for j in 0..n {
        for i in 0..n {
            qt[(i, j)] = q[(j, i)];
        }
    }
    for j in 0..n {
        if r_diag_sign[j] < T::zero() {
            for x in qt.col_mut(j) {
                *x = -*x;
            }
        }
    }
    qt
}

/// Build the first two Haar columns from two independent standard Gaussian
/// vectors: `u = g/|g|` and `û = Qĝ/|Qĝ|` with `Q = I − ggᵀ/|g|²`.
pub fn haar_pair_from_gaussians<T: Real>(
    g: &GaussianVector<T>,
    g_hat: &GaussianVector<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    if g.len() != g_hat.len() || g.is_empty() {
        return Err(Error::DegenerateInput("haar pair needs two equal-length nonempty vectors"));
    }
    let g = g.as_slice();
    let g_hat = g_hat.as_slice();

    let gg = dot(g, g);
    if gg == T::zero() {
        return Err(Error::DegenerateInput("first gaussian vector has zero norm"));
    }
    let gnorm = gg.sqrt();
    let u: Vec<T> = g.iter().map(|&x| x / gnorm).collect();

    // Qĝ = ĝ − g⟨g,ĝ⟩/⟨g,g⟩, then normalize.
    let coef = dot(g, g_hat) / gg;
    let mut w: Vec<T> = g_hat.iter().zip(g).map(|(&y, &x)| y - coef * x).collect();
    let wnorm = norm2(&w);
    if wnorm == T::zero() {
        return Err(Error::DegenerateInput("projected second vector has zero norm"));
    }
    for x in &mut w {
        *x /= wnorm;
    }
    Ok((u, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> SeedPlan {
        SeedPlan::new(7)
    }

    #[test]
    fn same_seed_and_id_reproduce_the_sequence() {
        let mut a = derive_stream(&plan(), 3);
        let mut b = derive_stream(&plan(), 3);
        for _ in 0..100 {
            assert_eq!(a.standard_normal::<f64>(), b.standard_normal::<f64>());
        }
    }

    #[test]
    fn distinct_ids_diverge() {
        let mut a = derive_stream(&plan(), 3);
        let mut b = derive_stream(&plan(), 4);
        let xs: Vec<f64> = (0..100).map(|_| a.standard_normal()).collect();
        let ys: Vec<f64> = (0..100).map(|_| b.standard_normal()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn distinct_masters_diverge() {
        let mut a = SeedPlan::new(1).stream(0);
        let mut b = SeedPlan::new(2).stream(0);
        let xs: Vec<u64> = (0..32).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..32).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn pooled_normal_mean_within_clt_band() {
        // 4σ/√N ≈ 0.004 at N = 10^6; bound from the spec is 0.005.
        let mut s = derive_stream(&plan(), 0);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| s.standard_normal::<f64>()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.005, "mean = {mean}");
    }

    #[test]
    fn streams_are_pairwise_uncorrelated() {
        let mut a = derive_stream(&plan(), 0);
        let mut b = derive_stream(&plan(), 1);
        let n = 100_000;
        let mut sum_ab = 0.0;
        for _ in 0..n {
            sum_ab += a.standard_normal::<f64>() * b.standard_normal::<f64>();
        }
        let corr = sum_ab / n as f64;
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr = {corr}");
    }

    #[test]
    fn gaussian_vector_rejects_n_zero() {
        let mut s = plan().stream(0);
        assert!(matches!(
            sample_gaussian_vector::<f64>(0, &mut s),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn gaussian_vector_single_draw_deterministic() {
        let v1 = sample_gaussian_vector::<f64>(1, &mut plan().stream(9)).unwrap();
        let v2 = sample_gaussian_vector::<f64>(1, &mut plan().stream(9)).unwrap();
        assert_eq!(v1.as_slice(), v2.as_slice());
    }

    #[test]
    fn gaussian_vector_moments() {
        let mut s = plan().stream(1);
        let v = sample_gaussian_vector::<f64>(100_000, &mut s).unwrap();
        let xs = v.as_slice();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        assert!((0.98..=1.02).contains(&var), "var = {var}");
        let pos = xs.iter().filter(|&&x| x > 0.0).count() as f64 / n;
        assert!((0.494..=0.506).contains(&pos), "positive fraction = {pos}");
    }

    #[test]
    fn haar_n1_is_uniform_sign() {
        let mut s = plan().stream(2);
        let mut plus = 0usize;
        for _ in 0..10_000 {
            let q = sample_haar_orthogonal::<f64>(1, &mut s).unwrap();
            let e = q.entry(0, 0);
            assert!(e == 1.0 || e == -1.0, "entry = {e}");
            if e > 0.0 {
                plus += 1;
            }
        }
        let freq = plus as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.02, "freq = {freq}");
    }

    #[test]
    fn haar_columns_orthonormal() {
        let mut s = plan().stream(3);
        let q = sample_haar_orthogonal::<f64>(64, &mut s).unwrap();
        assert!(q.orthonormality_defect() <= 1e-10);
    }

    #[test]
    fn haar_entry_second_moment_matches_sphere() {
        // E[Q_11²] = 1/n for a Haar column; Var(Q_11²) ≈ 2/n², so the
        // 4σ band at 10^4 draws is ±4·(√2/n)/100.
        let n = 64;
        let draws = 10_000;
        let mut s = plan().stream(4);
        let mut acc = 0.0;
        for _ in 0..draws {
            let q = sample_haar_orthogonal::<f64>(n, &mut s).unwrap();
            acc += q.entry(0, 0).powi(2);
        }
        let mean = acc / draws as f64;
        let band = 4.0 * (2.0f64.sqrt() / n as f64) / (draws as f64).sqrt();
        assert!((mean - 1.0 / n as f64).abs() <= band, "mean = {mean}, band = {band}");
    }

    #[test]
    fn haar_law_invariant_under_permutation() {
        // Permuting rows of a Haar matrix leaves the law unchanged; compare
        // first/second moments of the first column entry by entry.
        let n = 8;
        let draws = 20_000;
        let mut s = plan().stream(5);
        let mut mean = vec![0.0f64; n];
        let mut mean_perm = vec![0.0f64; n];
        let mut sq = vec![0.0f64; n];
        let mut sq_perm = vec![0.0f64; n];
        for _ in 0..draws {
            let q = sample_haar_orthogonal::<f64>(n, &mut s).unwrap();
            let col = q.col(0);
            for i in 0..n {
                mean[i] += col[i];
                sq[i] += col[i] * col[i];
                // cyclic shift as the fixed permutation
                let p = (i + 1) % n;
                mean_perm[i] += col[p];
                sq_perm[i] += col[p] * col[p];
            }
        }
        let band = 4.0 / (draws as f64).sqrt();
        for i in 0..n {
            assert!((mean[i] - mean_perm[i]).abs() / draws as f64 <= band);
            assert!((sq[i] - sq_perm[i]).abs() / draws as f64 <= band);
        }
    }

    #[test]
    fn haar_pair_orthogonal_unit() {
        let mut s = plan().stream(6);
        let g = sample_gaussian_vector::<f64>(50, &mut s).unwrap();
        let gh = sample_gaussian_vector::<f64>(50, &mut s).unwrap();
        let (u, uh) = haar_pair_from_gaussians(&g, &gh).unwrap();
        assert!(dot(&u, &uh).abs() <= 1e-12);
        assert!((norm2(&u) - 1.0).abs() <= 1e-12);
        assert!((norm2(&uh) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn haar_pair_fixes_orthogonal_inputs() {
        let g = GaussianVector { entries: vec![3.0f64, 0.0] };
        let gh = GaussianVector { entries: vec![0.0f64, -2.0] };
        let (u, uh) = haar_pair_from_gaussians(&g, &gh).unwrap();
        assert_eq!(u, vec![1.0, 0.0]);
        assert_eq!(uh, vec![0.0, -1.0]);
    }

    #[test]
    fn haar_pair_rejects_zero_norm() {
        let g = GaussianVector { entries: vec![0.0f64, 0.0] };
        let gh = GaussianVector { entries: vec![1.0f64, 1.0] };
        assert!(matches!(haar_pair_from_gaussians(&g, &gh), Err(Error::DegenerateInput(_))));
        // ĝ parallel to g makes the projection vanish
        let g = GaussianVector { entries: vec![1.0f64, 1.0] };
        let gh = GaussianVector { entries: vec![2.0f64, 2.0] };
        assert!(matches!(haar_pair_from_gaussians(&g, &gh), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn haar_pair_coordinate_moments_match_haar_matrix() {
        // Per-coordinate second moments of u and û equal 1/n; compare the
        // pair construction against 1/n directly at 4σ.
        let n = 128;
        let draws = 10_000;
        let mut s = plan().stream(7);
        let mut sq_u = 0.0f64;
        let mut sq_uh = 0.0f64;
        for _ in 0..draws {
            let g = sample_gaussian_vector::<f64>(n, &mut s).unwrap();
            let gh = sample_gaussian_vector::<f64>(n, &mut s).unwrap();
            let (u, uh) = haar_pair_from_gaussians(&g, &gh).unwrap();
            sq_u += u[0] * u[0];
            sq_uh += uh[0] * uh[0];
        }
        let band = 4.0 * (2.0f64.sqrt() / n as f64) / (draws as f64).sqrt();
        assert!((sq_u / draws as f64 - 1.0 / n as f64).abs() <= band);
        assert!((sq_uh / draws as f64 - 1.0 / n as f64).abs() <= band);
    }

    #[test]
    fn haar_pair_and_haar_matrix_agree_in_distribution() {
        // KS distance between ⟨u, e₁⟩ sampled via the pair construction and
        // via the first column of a sampled Haar matrix, 10^4 draws each.
        let n = 16;
        let draws = 10_000;
        let mut s1 = plan().stream(8);
        let mut s2 = plan().stream(9);
        let mut xs: Vec<f64> = (0..draws)
            .map(|_| {
                let g = sample_gaussian_vector::<f64>(n, &mut s1).unwrap();
                let gh = sample_gaussian_vector::<f64>(n, &mut s1).unwrap();
                let (u, _) = haar_pair_from_gaussians(&g, &gh).unwrap();
                u[0]
            })
            .collect();
        let mut ys: Vec<f64> = (0..draws)
            .map(|_| sample_haar_orthogonal::<f64>(n, &mut s2).unwrap().entry(0, 0))
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = two_sample_ks(&xs, &ys);
        assert!(d <= 0.02, "ks = {d}");
    }

    fn two_sample_ks(xs: &[f64], ys: &[f64]) -> f64 {
        let mut d: f64 = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < xs.len() && j < ys.len() {
            if xs[i] <= ys[j] {
                i += 1;
            } else {
                j += 1;
            }
            let fx = i as f64 / xs.len() as f64;
            let fy = j as f64 / ys.len() as f64;
            d = d.max((fx - fy).abs());
        }
        d
    }

    #[test]
    fn works_in_f32_too() {
        let mut s = plan().stream(10);
        let q = sample_haar_orthogonal::<f32>(16, &mut s).unwrap();
        assert!(q.orthonormality_defect() <= 1e-5);
    }
}
