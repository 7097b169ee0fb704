//! Small dense helpers: trace inner products, orthonormal spans, null spaces
//! and ranks by singular-value thresholding.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{cr, CMat, Real, C};

/// `tr(x* y)`.
pub fn inner<T: Real>(x: &CMat<T>, y: &CMat<T>) -> C<T> {
    x.iter()
        .zip(y.iter())
        .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}

pub fn frobenius<T: Real>(x: &CMat<T>) -> T {
    x.iter()
        .fold(T::zero(), |acc, a| acc + a.norm_sqr())
        .sqrt()
}

pub fn adjoint<T: Real>(x: &CMat<T>) -> CMat<T> {
    x.adjoint()
}

pub fn commutator<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a * b - b * a
}

pub fn identity<T: Real>(d: usize) -> CMat<T> {
    CMat::identity(d, d)
}

/// Matrix unit `e_{ij}`.
pub fn unit<T: Real>(d: usize, i: usize, j: usize) -> CMat<T> {
    let mut m = CMat::zeros(d, d);
    m[(i, j)] = cr(T::one());
    m
}

/// Incrementally built orthonormal basis (trace inner product) of a span of
/// matrices, using modified Gram-Schmidt with one re-orthogonalisation pass.
#[derive(Clone, Debug)]
pub struct OrthoSpan<T: Real> {
    d: usize,
    tol: T,
    basis: Vec<CMat<T>>,
}

impl<T: Real> OrthoSpan<T> {
    pub fn new(d: usize) -> Self {
        Self::with_tol(d, T::lit(T::RANK_TOL))
    }

    pub fn with_tol(d: usize, tol: T) -> Self {
        Self {
            d,
            tol,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat<T>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<CMat<T>> {
        self.basis
    }

    /// Residual of `m` after projecting out the current span (two MGS sweeps).
    pub fn residual(&self, m: &CMat<T>) -> CMat<T> {
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coef = inner(b, &r);
                r -= b * coef;
            }
        }
        r
    }

    /// Adds `m` if it is not (numerically) in the span. Returns whether the
    /// span grew. A candidate counts as new when its residual exceeds `tol`
    /// times its own norm.
    pub fn push(&mut self, m: &CMat<T>) -> bool {
        debug_assert_eq!(m.nrows(), self.d);
        if self.basis.len() >= self.d * self.d {
            return false;
        }
        let norm = frobenius(m);
        if norm == T::zero() {
            return false;
        }
        let r = self.residual(m);
        let rn = frobenius(&r);
        if rn <= self.tol * norm {
            return false;
        }
        self.basis.push(r.unscale(rn));
        true
    }

    pub fn contains(&self, m: &CMat<T>) -> bool {
        let norm = frobenius(m);
        norm == T::zero() || frobenius(&self.residual(m)) <= self.tol * norm
    }
}

/// Singular values of a complex matrix.
fn singular_values_complex<T: Real>(a: &DMatrix<C<T>>) -> DVector<T> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return DVector::zeros(0);
    }
    a.clone().svd(false, false).singular_values
}

fn threshold<T: Real>(sv: &DVector<T>, tol: T, scale: T) -> T {
    let smax = sv.iter().fold(T::zero(), |m, &s| m.max(s));
    tol * smax.max(scale)
}

/// Numerical rank: singular values above `tol * max(sigma_max, scale)`.
pub fn rank_complex<T: Real>(a: &DMatrix<C<T>>, tol: T, scale: T) -> usize {
    let sv = singular_values_complex(a);
    let thr = threshold(&sv, tol, scale);
    sv.iter().filter(|&&s| s > thr).count()
}

pub fn rank_real<T: Real>(a: &DMatrix<T>, tol: T, scale: T) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let thr = threshold(&sv, tol, scale);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis of the null space of `a`, same threshold convention as
/// [`rank_complex`].
pub fn null_space_complex<T: Real>(a: &DMatrix<C<T>>, tol: T, scale: T) -> Vec<DVector<C<T>>> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    if a.nrows() == 0 {
        return (0..n)
            .map(|i| {
                let mut v = DVector::zeros(n);
                v[i] = cr(T::one());
                v
            })
            .collect();
    }
    // thin SVD only yields a full V when rows >= cols
    let padded = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let thr = threshold(&svd.singular_values, tol, scale);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thr)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

/// Sorted eigen-decomposition of a hermitian matrix: ascending eigenvalues and
/// matching eigenvector columns.
pub fn hermitian_eigen<T: Real>(h: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Real basis of the traceless skew-hermitian matrices (the Lie algebra of
/// the projective unitary group), `d^2 - 1` elements.
pub fn skew_traceless_basis<T: Real>(d: usize) -> Vec<CMat<T>> {
    let i_unit = C::new(T::zero(), T::one());
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in (a + 1)..d {
            out.push(unit::<T>(d, a, b) - unit::<T>(d, b, a));
            out.push((unit::<T>(d, a, b) + unit::<T>(d, b, a)) * i_unit);
        }
    }
    for a in 0..d.saturating_sub(1) {
        out.push((unit::<T>(d, a, a) - unit::<T>(d, a + 1, a + 1)) * i_unit);
    }
    out
}

/// Real basis of the hermitian matrices, `d^2` elements.
pub fn hermitian_basis<T: Real>(d: usize) -> Vec<CMat<T>> {
    let i_unit = C::new(T::zero(), T::one());
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        out.push(unit::<T>(d, a, a));
        for b in (a + 1)..d {
            out.push(unit::<T>(d, a, b) + unit::<T>(d, b, a));
            out.push((unit::<T>(d, a, b) - unit::<T>(d, b, a)) * i_unit);
        }
    }
    out
}

/// Matrix whose columns are the real coordinates (real parts, then imaginary
/// parts) of the given complex vectors. Used to compute ranks of real-linear
/// maps with complex values.
pub fn real_columns<T: Real>(columns: &[Vec<C<T>>]) -> DMatrix<T> {
    let len = columns.first().map_or(0, Vec::len);
    DMatrix::from_fn(2 * len, columns.len(), |r, c| {
        let z = columns[c][r % len];
        if r < len {
            z.re
        } else {
            z.im
        }
    })
}
