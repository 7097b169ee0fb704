//! Finite-dimensional *-algebra computations inside `M_d`: generated
//! algebras, commutants, centres and orbit-type classification.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, frobenius, hermitian_eigen, identity, null_space_complex, rank_complex,
    real_columns, skew_traceless_basis, unit, OrthoSpan,
};
use crate::scalar::{cr, CMat, Real, C};

/// Seed of the generic-central-element sampler used by [`orbit_type`].
pub const DEFAULT_CENTER_SEED: u64 = 0x6F72_6269_7474_7970;

/// Retries for the generic central element before giving up.
pub const CENTER_MAX_RETRIES: usize = 16;

/// Relative eigenvalue gap (times spectral diameter) separating central
/// projections.
pub const CENTER_GAP_TOL: f64 = 1e-6;

/// A tuple of hermitian `d x d` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple<T: Real> {
    d: usize,
    entries: Vec<CMat<T>>,
}

impl<T: Real> MatrixTuple<T> {
    /// Validates and symmetrises `raw`. Each entry must be square, of a common
    /// size, and hermitian up to `T::HERM_TOL * max(1, |a|_F)`.
    pub fn new(raw: Vec<CMat<T>>) -> Result<Self> {
        let first = raw.first().ok_or(Error::EmptyTuple)?;
        let d = first.nrows();
        let tol = T::lit(T::HERM_TOL);
        let mut entries = Vec::with_capacity(raw.len());
        for (index, a) in raw.into_iter().enumerate() {
            if a.nrows() != a.ncols() {
                return Err(Error::NotSquare {
                    index,
                    rows: a.nrows(),
                    cols: a.ncols(),
                });
            }
            if a.nrows() != d {
                return Err(Error::SizeMismatch {
                    expected: d,
                    found: a.nrows(),
                });
            }
            let adj = a.adjoint();
            let dev = frobenius(&(&a - &adj));
            let scale = frobenius(&a).max(T::one());
            if dev > tol * scale {
                return Err(Error::NotHermitian {
                    index,
                    deviation: (dev / scale).as_f64(),
                });
            }
            entries.push((a + adj).unscale(T::lit(2.0)));
        }
        if d == 0 {
            return Err(Error::SizeMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { d, entries })
    }

    /// Builds a tuple from entries already known to be hermitian.
    pub(crate) fn from_hermitian(d: usize, entries: Vec<CMat<T>>) -> Self {
        debug_assert!(entries.iter().all(|a| a.nrows() == d));
        Self { d, entries }
    }

    pub fn zeros(d: usize, len: usize) -> Self {
        Self::from_hermitian(d, vec![CMat::zeros(d, d); len])
    }

    /// Tuple of real scalar multiples of the identity.
    pub fn scalars(d: usize, values: &[f64]) -> Self {
        Self::from_hermitian(
            d,
            values
                .iter()
                .map(|&v| identity::<T>(d) * cr(T::lit(v)))
                .collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Tuple length `n + 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CMat<T>] {
        &self.entries
    }

    /// `(u a_0 u*, ..., u a_n u*)`.
    pub fn conjugated(&self, u: &CMat<T>) -> Self {
        let ua = u.adjoint();
        Self::from_hermitian(self.d, self.entries.iter().map(|a| u * a * &ua).collect())
    }

    /// Same tuple with the identity appended; generating with this tuple is
    /// unital generation with the original one.
    pub fn with_identity(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.push(identity(self.d));
        Self::from_hermitian(self.d, entries)
    }

    /// Entrywise `self + s * dir`.
    pub fn add_scaled(&self, dir: &Self, s: T) -> Self {
        assert_eq!(self.d, dir.d);
        assert_eq!(self.len(), dir.len());
        Self::from_hermitian(
            self.d,
            self.entries
                .iter()
                .zip(&dir.entries)
                .map(|(a, b)| a + b * cr(s))
                .collect(),
        )
    }

    /// Euclidean norm of the tuple, `sqrt(sum |a_i|_F^2)`.
    pub fn norm(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, a| {
                let f = frobenius(a);
                acc + f * f
            })
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        self.add_scaled(other, -T::one()).norm()
    }

    fn scale(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |m, a| m.max(frobenius(a)))
    }
}

pub fn validate_tuple<T: Real>(raw: Vec<CMat<T>>) -> Result<MatrixTuple<T>> {
    MatrixTuple::new(raw)
}

/// A *-subalgebra of `M_d` given by a trace-orthonormal basis.
#[derive(Clone, Debug)]
pub struct StarAlgebra<T: Real> {
    d: usize,
    basis: Vec<CMat<T>>,
    contains_unit: bool,
}

impl<T: Real> StarAlgebra<T> {
    fn from_span(d: usize, span: OrthoSpan<T>) -> Self {
        let contains_unit = span.contains(&identity(d));
        Self {
            d,
            basis: span.into_basis(),
            contains_unit,
        }
    }

    pub fn full(d: usize) -> Self {
        let mut span = OrthoSpan::new(d);
        for i in 0..d {
            for j in 0..d {
                span.push(&unit(d, i, j));
            }
        }
        Self::from_span(d, span)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat<T>] {
        &self.basis
    }

    pub fn contains_unit(&self) -> bool {
        self.contains_unit
    }

    pub fn contains(&self, m: &CMat<T>) -> bool {
        let mut span = OrthoSpan::new(self.d);
        for b in &self.basis {
            span.push(b);
        }
        span.contains(m)
    }

    /// Gram matrix of the basis under the trace inner product.
    pub fn gram(&self) -> DMatrix<C<T>> {
        let k = self.dim();
        DMatrix::from_fn(k, k, |i, j| crate::linalg::inner(&self.basis[i], &self.basis[j]))
    }

    /// Whether all pairwise products and adjoints of basis elements stay in
    /// the span.
    pub fn is_closed(&self) -> bool {
        let mut span = OrthoSpan::new(self.d);
        for b in &self.basis {
            span.push(b);
        }
        self.basis.iter().all(|a| {
            span.contains(&a.adjoint()) && self.basis.iter().all(|b| span.contains(&(a * b)))
        })
    }
}

/// The *-algebra generated by the entries of `t` (and the unit when
/// `unital`), by span saturation under products.
pub fn generated_algebra<T: Real>(t: &MatrixTuple<T>, unital: bool) -> StarAlgebra<T> {
    let d = t.d();
    let mut span = OrthoSpan::new(d);
    if unital {
        span.push(&identity(d));
    }
    for a in t.entries() {
        span.push(a);
    }
    // products among the first `done` basis elements are already in the span
    let mut done = 0;
    for _round in 0..=d * d {
        let n = span.dim();
        if n == done || n == d * d {
            break;
        }
        let snapshot: Vec<CMat<T>> = span.basis().to_vec();
        for i in 0..n {
            for j in 0..n {
                if i >= done || j >= done {
                    span.push(&(&snapshot[i] * &snapshot[j]));
                }
            }
        }
        done = n;
    }
    StarAlgebra::from_span(d, span)
}

/// `{c : c m = m c for all m in mats}` inside `M_d`.
pub fn commutant_of<T: Real>(d: usize, mats: &[CMat<T>]) -> StarAlgebra<T> {
    let dd = d * d;
    let mut a = DMatrix::<C<T>>::zeros(mats.len() * dd, dd);
    // column-major vec: index(r, c) = r + c d
    for (k, m) in mats.iter().enumerate() {
        let off = k * dd;
        for r in 0..d {
            for c in 0..d {
                let row = off + r + c * d;
                for q in 0..d {
                    // (m C)_{rc} = sum_q m_{rq} C_{qc}
                    a[(row, q + c * d)] += m[(r, q)];
                    // (C m)_{rc} = sum_q C_{rq} m_{qc}
                    a[(row, r + q * d)] -= m[(q, c)];
                }
            }
        }
    }
    let scale = mats.iter().fold(T::zero(), |s, m| s.max(frobenius(m)));
    let ns = null_space_complex(&a, T::lit(T::RANK_TOL), scale);
    let mut span = OrthoSpan::new(d);
    for v in ns {
        span.push(&CMat::from_column_slice(d, d, v.as_slice()));
    }
    StarAlgebra::from_span(d, span)
}

pub fn commutant<T: Real>(s: &StarAlgebra<T>) -> StarAlgebra<T> {
    commutant_of(s.d(), s.basis())
}

/// Whether the tuple generates `M_d` as a (non-unital) C*-algebra.
///
/// For `d >= 2` this is irreducibility: the commutant of the entries is
/// `C 1`. For `d = 1` the tuple must additionally be nonzero.
pub fn is_generating<T: Real>(t: &MatrixTuple<T>) -> bool {
    if t.d() == 1 {
        return generated_algebra(t, false).dim() == 1;
    }
    commutant_of(t.d(), t.entries()).dim() == 1
}

/// Whether the tuple together with the unit generates `M_d`.
pub fn is_generating_unital<T: Real>(t: &MatrixTuple<T>) -> bool {
    commutant_of(t.d(), t.entries()).dim() == 1
}

/// Dimension of `{x skew-hermitian, tr x = 0 : [x, a_i] = 0}`, the Lie
/// algebra of the stabiliser of `t` in the projective unitary group.
pub fn stabilizer_dim<T: Real>(t: &MatrixTuple<T>) -> usize {
    let d = t.d();
    let xs = skew_traceless_basis::<T>(d);
    if xs.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<C<T>>> = xs
        .iter()
        .map(|x| {
            t.entries()
                .iter()
                .flat_map(|a| commutator(x, a).iter().copied().collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let m = real_columns(&cols);
    xs.len() - crate::linalg::rank_real(&m, T::lit(T::RANK_TOL), t.scale())
}

/// Isomorphism-and-multiplicity class of a unital *-subalgebra of `M_d`:
/// a multiset of `(block size, multiplicity)` pairs with `sum d_j m_j = d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct OrbitType {
    pairs: Vec<(usize, usize)>,
}

impl OrbitType {
    /// Canonicalises `pairs` (sorted descending). Rejects empty lists and
    /// zero entries.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidOrbitType("no blocks".into()));
        }
        if pairs.iter().any(|&(d, m)| d == 0 || m == 0) {
            return Err(Error::InvalidOrbitType(
                "block sizes and multiplicities must be >= 1".into(),
            ));
        }
        pairs.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { pairs })
    }

    /// `[(d, 1)]`, the type of `M_d` itself.
    pub fn trivial(d: usize) -> Self {
        Self { pairs: vec![(d, 1)] }
    }

    /// `[(1, d)]`, the scalars.
    pub fn scalar(d: usize) -> Self {
        Self { pairs: vec![(1, d)] }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of blocks `L` (the dimension of the centre).
    pub fn num_blocks(&self) -> usize {
        self.pairs.len()
    }

    /// `sum d_j m_j`.
    pub fn size(&self) -> usize {
        self.pairs.iter().map(|&(d, m)| d * m).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].1 == 1
    }

    /// `sum d_j^2`, the dimension of the model algebra.
    pub fn algebra_dim(&self) -> usize {
        self.pairs.iter().map(|&(d, _)| d * d).sum()
    }

    /// `sum m_j^2`, the dimension of its commutant.
    pub fn commutant_dim(&self) -> usize {
        self.pairs.iter().map(|&(_, m)| m * m).sum()
    }

    fn check_size(&self, d: usize) -> Result<()> {
        if self.size() != d {
            return Err(Error::SizeMismatch {
                expected: d,
                found: self.size(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<(usize, usize)>> for OrbitType {
    type Error = Error;
    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(pairs)
    }
}

impl From<OrbitType> for Vec<(usize, usize)> {
    fn from(ot: OrbitType) -> Self {
        ot.pairs
    }
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (d, m)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({d},{m})")?;
        }
        f.write_str("]")
    }
}

/// Parses `[(2,1),(1,1)]`, `(2,1),(1,1)` or `2x1,1x1`.
impl FromStr for OrbitType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOrbitType(s.to_string());
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && !matches!(c, '[' | ']'))
            .collect();
        let nums: Vec<usize> = if cleaned.contains('x') {
            cleaned
                .split(',')
                .flat_map(|p| p.split('x'))
                .map(|n| n.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            cleaned
                .split(|c| matches!(c, '(' | ')' | ','))
                .filter(|p| !p.is_empty())
                .map(|n| n.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        if nums.is_empty() || nums.len() % 2 != 0 {
            return Err(bad());
        }
        Self::new(nums.chunks(2).map(|c| (c[0], c[1])).collect())
    }
}

/// `sum_{copies} e_{off + c*size + a, off + c*size + b} / sqrt(m)` for every
/// block: an orthonormal basis of the block-diagonal model.
fn model_units<T: Real>(ot: &OrbitType, d: usize) -> Vec<(usize, usize, usize, CMat<T>)> {
    let mut out = Vec::new();
    let mut off = 0;
    for (j, &(size, mult)) in ot.pairs().iter().enumerate() {
        let w = cr(T::one() / T::lit(mult as f64).sqrt());
        for a in 0..size {
            for b in 0..size {
                let mut m = CMat::zeros(d, d);
                for copy in 0..mult {
                    let base = off + copy * size;
                    m[(base + a, base + b)] = w;
                }
                out.push((j, a, b, m));
            }
        }
        off += size * mult;
    }
    out
}

/// Block-diagonal model algebra `B(d, m)`: `m_1` equal blocks of size `d_1`,
/// then `m_2` equal blocks of size `d_2`, and so on.
pub fn canonical_model<T: Real>(ot: &OrbitType, d: usize) -> Result<StarAlgebra<T>> {
    ot.check_size(d)?;
    let basis = model_units::<T>(ot, d)
        .into_iter()
        .map(|(_, _, _, m)| m)
        .collect();
    Ok(StarAlgebra {
        d,
        basis,
        contains_unit: true,
    })
}

/// Real basis of the hermitian part of the model algebra, `sum d_j^2`
/// elements.
pub fn canonical_model_hermitian_basis<T: Real>(ot: &OrbitType, d: usize) -> Result<Vec<CMat<T>>> {
    ot.check_size(d)?;
    let units = model_units::<T>(ot, d);
    let find = |j: usize, a: usize, b: usize| {
        &units
            .iter()
            .find(|(jj, aa, bb, _)| *jj == j && *aa == a && *bb == b)
            .expect("unit present")
            .3
    };
    let i_unit = C::new(T::zero(), T::one());
    let mut out = Vec::new();
    for (j, &(size, _)) in ot.pairs().iter().enumerate() {
        for a in 0..size {
            out.push(find(j, a, a).clone());
            for b in (a + 1)..size {
                out.push(find(j, a, b) + find(j, b, a));
                out.push((find(j, a, b) - find(j, b, a)) * i_unit);
            }
        }
    }
    Ok(out)
}

/// Orthonormal basis of the centre `B ∩ B'` of a *-algebra.
pub fn center<T: Real>(b: &StarAlgebra<T>) -> StarAlgebra<T> {
    let d = b.d();
    let k = b.dim();
    let dd = d * d;
    // coefficients c with sum_i c_i [beta_i, beta_l] = 0 for every l
    let mut a = DMatrix::<C<T>>::zeros(k * dd, k);
    for (i, bi) in b.basis().iter().enumerate() {
        for (l, bl) in b.basis().iter().enumerate() {
            let comm = commutator(bi, bl);
            for (p, z) in comm.iter().enumerate() {
                a[(l * dd + p, i)] = *z;
            }
        }
    }
    let ns = null_space_complex(&a, T::lit(T::RANK_TOL), T::one());
    let mut span = OrthoSpan::new(d);
    for v in ns {
        let mut z = CMat::zeros(d, d);
        for (ci, bi) in v.iter().zip(b.basis()) {
            z += bi * *ci;
        }
        span.push(&z);
    }
    StarAlgebra::from_span(d, span)
}

/// Orbit type of a unital *-subalgebra of `M_d`, using a seeded generic
/// central element to split the centre.
pub fn algebra_orbit_type<T: Real>(b: &StarAlgebra<T>, seed: u64) -> Result<OrbitType> {
    let d = b.d();
    if b.dim() == d * d {
        return Ok(OrbitType::trivial(d));
    }
    let z = center(b);
    let l = z.dim();
    if l <= 1 {
        let size = isqrt(b.dim());
        if size * size != b.dim() || d % size != 0 {
            return Err(Error::DegenerateCenter { retries: 0 });
        }
        return OrbitType::new(vec![(size, d / size)]);
    }
    let half = T::lit(0.5);
    let i_unit = C::new(T::zero(), T::one());
    let herm: Vec<CMat<T>> = z
        .basis()
        .iter()
        .flat_map(|x| {
            let xa = x.adjoint();
            [(x + &xa) * cr(half), (x - &xa) * (-i_unit * cr(half))]
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CENTER_MAX_RETRIES {
        let mut h = CMat::<T>::zeros(d, d);
        for e in &herm {
            let g: f64 = StandardNormal.sample(&mut rng);
            h += e * cr(T::lit(g));
        }
        let h = (&h + h.adjoint()) * cr(half);
        let (vals, vecs) = hermitian_eigen(&h);
        let diameter = vals[d - 1] - vals[0];
        let gap = T::lit(CENTER_GAP_TOL) * diameter;
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        for i in 1..d {
            if vals[i] - vals[i - 1] > gap {
                groups.push(vec![i]);
            } else {
                groups.last_mut().expect("nonempty").push(i);
            }
        }
        if groups.len() != l || diameter <= T::zero() {
            continue;
        }
        let mut pairs = Vec::with_capacity(l);
        let mut ok = true;
        for g in &groups {
            let mut p = CMat::<T>::zeros(d, d);
            for &i in g {
                let v = vecs.column(i);
                p += &v * v.adjoint();
            }
            let cols: Vec<C<T>> = b
                .basis()
                .iter()
                .flat_map(|beta| (beta * &p).iter().copied().collect::<Vec<_>>())
                .collect();
            let m = DMatrix::from_column_slice(d * d, b.dim(), &cols);
            let block_dim = rank_complex(&m, T::lit(T::RANK_TOL), T::one());
            let size = isqrt(block_dim);
            if size == 0 || size * size != block_dim || g.len() % size != 0 {
                ok = false;
                break;
            }
            pairs.push((size, g.len() / size));
        }
        if ok {
            return OrbitType::new(pairs);
        }
    }
    Err(Error::DegenerateCenter {
        retries: CENTER_MAX_RETRIES,
    })
}

/// Orbit type of `C*_1(t)`.
pub fn orbit_type<T: Real>(t: &MatrixTuple<T>) -> Result<OrbitType> {
    orbit_type_seeded(t, DEFAULT_CENTER_SEED)
}

pub fn orbit_type_seeded<T: Real>(t: &MatrixTuple<T>, seed: u64) -> Result<OrbitType> {
    algebra_orbit_type(&generated_algebra(t, true), seed)
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `diag(1, 2, ..., d)`.
pub fn diag_ramp<T: Real>(d: usize) -> CMat<T> {
    CMat::from_fn(d, d, |i, j| {
        if i == j {
            cr(T::lit((i + 1) as f64))
        } else {
            cr(T::zero())
        }
    })
}

/// The all-ones matrix.
pub fn all_ones<T: Real>(d: usize) -> CMat<T> {
    CMat::from_element(d, d, cr(T::one()))
}

/// The pair `(all-ones, diag(1, ..., d))`, which generates `M_d`.
pub fn standard_generating_pair<T: Real>(d: usize) -> MatrixTuple<T> {
    MatrixTuple::from_hermitian(d, vec![diag_ramp(d), all_ones(d)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn real(d: usize, rows: &[f64]) -> CMat<f64> {
        CMat::from_row_slice(d, d, &rows.iter().map(|&x| cr(x)).collect::<Vec<_>>())
    }

    fn diag(vals: &[f64]) -> CMat<f64> {
        let d = vals.len();
        CMat::from_fn(d, d, |i, j| if i == j { cr(vals[i]) } else { cr(0.0) })
    }

    #[test]
    fn validate_accepts_symmetric() {
        let t = MatrixTuple::new(vec![real(2, &[0.0, 1.0, 1.0, 0.0])]).unwrap();
        assert_eq!((t.d(), t.len()), (2, 1));
    }

    #[test]
    fn validate_rejects_upper_triangular() {
        let e = MatrixTuple::new(vec![real(2, &[0.0, 1.0, 0.0, 0.0])]).unwrap_err();
        assert!(matches!(e, Error::NotHermitian { index: 0, .. }));
    }

    #[test]
    fn validate_rejects_mixed_sizes() {
        let e = MatrixTuple::new(vec![CMat::<f64>::zeros(2, 2), CMat::zeros(3, 3)]).unwrap_err();
        assert_eq!(e, Error::SizeMismatch { expected: 2, found: 3 });
        assert_eq!(MatrixTuple::<f64>::new(vec![]).unwrap_err(), Error::EmptyTuple);
    }

    #[test]
    fn validate_symmetrises_small_deviation() {
        let mut a = real(2, &[1.0, 2.0, 2.0, 3.0]);
        a[(0, 1)] += c(1e-14, 0.0);
        let t = MatrixTuple::new(vec![a]).unwrap();
        let e = &t.entries()[0];
        assert_eq!(e[(0, 1)], e[(1, 0)].conj());
    }

    #[test]
    fn ramp_and_ones_generate_full_algebra() {
        for d in 1..=6 {
            let t = standard_generating_pair::<f64>(d);
            assert_eq!(generated_algebra(&t, true).dim(), d * d);
            assert!(is_generating(&t));
        }
    }

    #[test]
    fn zero_tuple_generates_scalars() {
        let t = MatrixTuple::<f64>::zeros(3, 1);
        let b = generated_algebra(&t, true);
        assert_eq!(b.dim(), 1);
        assert!(b.contains_unit());
        assert_eq!(generated_algebra(&t, false).dim(), 0);
    }

    #[test]
    fn repeated_eigenvalue_gives_two_dimensional_algebra() {
        let t = MatrixTuple::new(vec![diag(&[1.0, 1.0, 2.0])]).unwrap();
        let b = generated_algebra(&t, true);
        assert_eq!(b.dim(), 2);
        assert!(b.contains(&diag(&[1.0, 1.0, 0.0])));
        assert!(b.contains(&diag(&[0.0, 0.0, 1.0])));
        assert!(!b.contains(&diag(&[1.0, 0.0, 0.0])));
        assert!(b.is_closed());
    }

    #[test]
    fn commutant_examples() {
        for d in 1..=4 {
            let scalars = canonical_model::<f64>(&OrbitType::scalar(d), d).unwrap();
            assert_eq!(commutant(&scalars).dim(), d * d);
            let full = StarAlgebra::<f64>::full(d);
            assert_eq!(commutant(&full).dim(), 1);
        }
        let diag3 = canonical_model::<f64>(&OrbitType::new(vec![(1, 1); 3]).unwrap(), 3).unwrap();
        let c = commutant(&diag3);
        assert_eq!(c.dim(), 3);
        assert!(c.contains(&diag(&[1.0, 2.0, 3.0])));
    }

    #[test]
    fn scalars_and_reducible_tuples_do_not_generate() {
        let t = MatrixTuple::<f64>::scalars(3, &[1.5, -2.0]);
        assert!(!is_generating(&t));
        let mut e13 = CMat::zeros(3, 3);
        e13[(0, 2)] = cr(1.0);
        e13[(2, 0)] = cr(1.0);
        let t = MatrixTuple::new(vec![diag(&[1.0, 1.0, 2.0]), e13]).unwrap();
        assert!(!is_generating(&t));
        assert!(generated_algebra(&t, true).dim() < 9);
    }

    #[test]
    fn one_by_one_generation_needs_a_nonzero_entry() {
        assert!(is_generating(&MatrixTuple::<f64>::scalars(1, &[0.0, 2.0])));
        assert!(!is_generating(&MatrixTuple::<f64>::zeros(1, 2)));
        assert!(is_generating_unital(&MatrixTuple::<f64>::zeros(1, 2)));
    }

    #[test]
    fn orbit_type_examples() {
        let t = standard_generating_pair::<f64>(4);
        assert_eq!(orbit_type(&t).unwrap(), OrbitType::trivial(4));
        let z = MatrixTuple::<f64>::zeros(3, 2);
        assert_eq!(orbit_type(&z).unwrap(), OrbitType::scalar(3));
        let t = MatrixTuple::new(vec![diag(&[1.0, 1.0, 2.0])]).unwrap();
        assert_eq!(
            orbit_type(&t).unwrap(),
            OrbitType::new(vec![(1, 2), (1, 1)]).unwrap()
        );
    }

    #[test]
    fn orbit_type_of_block_tuple_with_multiplicity() {
        // x ⊕ x ⊕ y with x generating M_2 and y a scalar: type [(2,2),(1,1)]
        let g = standard_generating_pair::<f64>(2);
        let d = 5;
        let entries = g
            .entries()
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let mut m = CMat::zeros(d, d);
                m.view_mut((0, 0), (2, 2)).copy_from(x);
                m.view_mut((2, 2), (2, 2)).copy_from(x);
                m[(4, 4)] = cr(7.0 + k as f64);
                m
            })
            .collect();
        let t = MatrixTuple::new(entries).unwrap();
        assert_eq!(
            orbit_type(&t).unwrap(),
            OrbitType::new(vec![(1, 1), (2, 2)]).unwrap()
        );
        assert_eq!(stabilizer_dim(&t), 4 + 1 - 1);
    }

    #[test]
    fn canonical_model_examples() {
        let full = canonical_model::<f64>(&OrbitType::trivial(3), 3).unwrap();
        assert_eq!(full.dim(), 9);
        let sc = canonical_model::<f64>(&OrbitType::scalar(3), 3).unwrap();
        assert_eq!(sc.dim(), 1);
        assert!(sc.contains(&identity(3)));
        let dg = canonical_model::<f64>(&OrbitType::new(vec![(1, 1); 4]).unwrap(), 4).unwrap();
        assert_eq!(dg.dim(), 4);
        assert!(dg.contains(&diag(&[1.0, -2.0, 3.0, 0.5])));
        let m = canonical_model::<f64>(&OrbitType::new(vec![(2, 2), (1, 1)]).unwrap(), 5).unwrap();
        assert_eq!(m.dim(), 5);
        assert!(m.is_closed());
        let g = m.gram();
        assert!((g - DMatrix::identity(5, 5)).norm() < 1e-12);
        assert_eq!(
            canonical_model::<f64>(&OrbitType::trivial(2), 3).unwrap_err(),
            Error::SizeMismatch { expected: 3, found: 2 }
        );
        let hb = canonical_model_hermitian_basis::<f64>(&OrbitType::new(vec![(2, 2), (1, 1)]).unwrap(), 5)
            .unwrap();
        assert_eq!(hb.len(), 5);
    }

    #[test]
    fn orbit_type_parsing_and_display() {
        let ot: OrbitType = "[(1,1),(2,1)]".parse().unwrap();
        assert_eq!(ot.to_string(), "[(2,1),(1,1)]");
        assert_eq!("2x1,1x1".parse::<OrbitType>().unwrap(), ot);
        assert!("(1,2,3)".parse::<OrbitType>().is_err());
        assert!("(0,1)".parse::<OrbitType>().is_err());
        let json = serde_json::to_string(&ot).unwrap();
        assert_eq!(json, "[[2,1],[1,1]]");
        assert_eq!(serde_json::from_str::<OrbitType>(&json).unwrap(), ot);
    }

    #[test]
    fn single_precision_smoke() {
        let t = standard_generating_pair::<f32>(3);
        assert!(is_generating(&t));
        let z = MatrixTuple::<f32>::scalars(3, &[1.0, 2.0]);
        assert_eq!(orbit_type(&z).unwrap(), OrbitType::scalar(3));
    }
}
