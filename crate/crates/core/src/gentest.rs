//! Generation test for self-adjoint tuples in a finite direct sum of full
//! matrix algebras, `A = ⊕_x M_{d_x}`.
//!
//! A tuple generates `A` iff it generates every summand and no two summands
//! of equal size carry unitarily conjugate tuples. The brute-force oracle
//! instead saturates the span of the block-diagonal embedding.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frobenius, null_space_complex};
use crate::matalg::{generated_algebra, is_generating, MatrixTuple};
use crate::scalar::{cr, CMat, Real, C};

/// Largest ambient size `sum d_x` accepted by [`brute_force_generates`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// `⊕_x M_{d_x}` over a finite discrete base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteFiberAlgebra {
    fibers: Vec<usize>,
}

impl FiniteFiberAlgebra {
    pub fn new(fibers: Vec<usize>) -> Result<Self> {
        if fibers.is_empty() {
            return Err(Error::ShapeMismatch("no fibers".into()));
        }
        if fibers.contains(&0) {
            return Err(Error::ShapeMismatch("fiber sizes must be >= 1".into()));
        }
        Ok(Self { fibers })
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn ambient_size(&self) -> usize {
        self.fibers.iter().sum()
    }

    /// `sum d_x^2`.
    pub fn dim(&self) -> usize {
        self.fibers.iter().map(|d| d * d).sum()
    }
}

/// One matrix tuple per fiber, all of the same length.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberedTuple<T: Real> {
    fibers: Vec<MatrixTuple<T>>,
}

impl<T: Real> FiberedTuple<T> {
    pub fn new(fibers: Vec<MatrixTuple<T>>) -> Result<Self> {
        let len = fibers
            .first()
            .ok_or_else(|| Error::ShapeMismatch("no fibers".into()))?
            .len();
        if let Some((x, t)) = fibers.iter().enumerate().find(|(_, t)| t.len() != len) {
            return Err(Error::ShapeMismatch(format!(
                "fiber {x} has tuple length {}, expected {len}",
                t.len()
            )));
        }
        Ok(Self { fibers })
    }

    pub fn fibers(&self) -> &[MatrixTuple<T>] {
        &self.fibers
    }

    pub fn tuple_len(&self) -> usize {
        self.fibers[0].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.fibers.iter().map(MatrixTuple::d).collect()
    }

    /// Restriction to the listed fibers (a quotient of the direct sum).
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self {
            fibers: indices.iter().map(|&i| self.fibers[i].clone()).collect(),
        }
    }

    pub fn with_identity(&self) -> Self {
        Self {
            fibers: self.fibers.iter().map(MatrixTuple::with_identity).collect(),
        }
    }

    pub fn add_scaled(&self, dir: &Self, s: T) -> Self {
        Self {
            fibers: self
                .fibers
                .iter()
                .zip(&dir.fibers)
                .map(|(a, b)| a.add_scaled(b, s))
                .collect(),
        }
    }

    pub fn norm(&self) -> T {
        self.fibers
            .iter()
            .fold(T::zero(), |acc, t| {
                let n = t.norm();
                acc + n * n
            })
            .sqrt()
    }

    /// Block-diagonal embedding into `M_{sum d_x}`.
    pub fn block_diagonal(&self) -> MatrixTuple<T> {
        let total: usize = self.sizes().iter().sum();
        let entries = (0..self.tuple_len())
            .map(|i| {
                let mut m = CMat::zeros(total, total);
                let mut off = 0;
                for t in &self.fibers {
                    let d = t.d();
                    m.view_mut((off, off), (d, d)).copy_from(&t.entries()[i]);
                    off += d;
                }
                m
            })
            .collect();
        MatrixTuple::from_hermitian(total, entries)
    }

    fn check_shape(&self, alg: &FiniteFiberAlgebra) -> Result<()> {
        if self.sizes() != alg.fibers() {
            return Err(Error::ShapeMismatch(format!(
                "tuple fiber sizes {:?} do not match algebra {:?}",
                self.sizes(),
                alg.fibers()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub generates: bool,
    pub fiber_ok: Vec<bool>,
    /// Pairs `(x, y)`, `x < y`, of fibers carrying conjugate tuples.
    pub conflict_pairs: Vec<(usize, usize)>,
}

/// Per-fiber generation verdicts.
pub fn fiberwise_generates<T: Real>(t: &FiberedTuple<T>) -> Vec<bool> {
    t.fibers().iter().map(is_generating).collect()
}

/// Intertwiners `{S : S a_i = b_i S}` as an orthonormal list of matrices.
fn intertwiners<T: Real>(tx: &MatrixTuple<T>, ty: &MatrixTuple<T>) -> Vec<CMat<T>> {
    let d = tx.d();
    let dd = d * d;
    let mut a = DMatrix::<C<T>>::zeros(tx.len() * dd, dd);
    for (k, (x, y)) in tx.entries().iter().zip(ty.entries()).enumerate() {
        let off = k * dd;
        for r in 0..d {
            for c in 0..d {
                let row = off + r + c * d;
                for q in 0..d {
                    // (S x)_{rc} = sum_q S_{rq} x_{qc}
                    a[(row, r + q * d)] += x[(q, c)];
                    // (y S)_{rc} = sum_q y_{rq} S_{qc}
                    a[(row, q + c * d)] -= y[(r, q)];
                }
            }
        }
    }
    let scale = tx
        .entries()
        .iter()
        .chain(ty.entries())
        .fold(T::zero(), |m, e| m.max(frobenius(e)));
    null_space_complex(&a, T::lit(T::RANK_TOL), scale)
        .into_iter()
        .map(|v| CMat::from_column_slice(d, d, v.as_slice()))
        .collect()
}

/// Whether some unitary `u` satisfies `u tx_i u* = ty_i` for all `i`.
/// Both tuples must generate their (equal-size) fibers.
pub fn fibers_conjugate<T: Real>(tx: &MatrixTuple<T>, ty: &MatrixTuple<T>) -> Result<bool> {
    if tx.d() != ty.d() {
        return Err(Error::PreconditionViolated(format!(
            "fiber sizes differ: {} vs {}",
            tx.d(),
            ty.d()
        )));
    }
    if tx.len() != ty.len() {
        return Err(Error::ShapeMismatch("tuple lengths differ".into()));
    }
    if !is_generating(tx) || !is_generating(ty) {
        return Err(Error::PreconditionViolated(
            "conjugacy test requires generating (irreducible) fibers".into(),
        ));
    }
    let space = intertwiners(tx, ty);
    // irreducibility forces dimension 0 or 1
    if space.len() != 1 {
        return Ok(false);
    }
    let s = &space[0];
    let d = tx.d();
    let sts = s.adjoint() * s;
    let tr = sts.trace().re;
    let defect = frobenius(&(&sts - CMat::identity(d, d) * cr(tr / T::lit(d as f64))));
    let s_norm = frobenius(s);
    Ok(defect <= T::lit(T::UNITARY_TOL) * s_norm * s_norm)
}

/// Schur/intertwiner decision of whether `t` generates `alg`.
pub fn generates_direct_sum<T: Real>(
    alg: &FiniteFiberAlgebra,
    t: &FiberedTuple<T>,
) -> Result<GenerationReport> {
    t.check_shape(alg)?;
    let fiber_ok = fiberwise_generates(t);
    let mut conflict_pairs = Vec::new();
    let fibers = t.fibers();
    for x in 0..fibers.len() {
        for y in (x + 1)..fibers.len() {
            // different sizes admit no isomorphism
            if !fiber_ok[x] || !fiber_ok[y] || fibers[x].d() != fibers[y].d() {
                continue;
            }
            if fibers_conjugate(&fibers[x], &fibers[y])? {
                conflict_pairs.push((x, y));
            }
        }
    }
    Ok(GenerationReport {
        generates: fiber_ok.iter().all(|&b| b) && conflict_pairs.is_empty(),
        fiber_ok,
        conflict_pairs,
    })
}

/// Unital variant: generation of `alg` by the tuple together with the unit.
pub fn generates_direct_sum_unital<T: Real>(
    alg: &FiniteFiberAlgebra,
    t: &FiberedTuple<T>,
) -> Result<GenerationReport> {
    generates_direct_sum(alg, &t.with_identity())
}

/// Oracle: saturate the span generated by the block-diagonal embedding and
/// compare its dimension with `sum d_x^2`.
pub fn brute_force_generates<T: Real>(alg: &FiniteFiberAlgebra, t: &FiberedTuple<T>) -> Result<bool> {
    t.check_shape(alg)?;
    let total = alg.ambient_size();
    if total > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            total,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(generated_algebra(&t.block_diagonal(), false).dim() == alg.dim())
}

pub fn brute_force_generates_unital<T: Real>(
    alg: &FiniteFiberAlgebra,
    t: &FiberedTuple<T>,
) -> Result<bool> {
    brute_force_generates(alg, &t.with_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matalg::{all_ones, diag_ramp, standard_generating_pair};

    fn pair(diag: &[f64]) -> MatrixTuple<f64> {
        let d = diag.len();
        let dm = CMat::from_fn(d, d, |i, j| if i == j { cr(diag[i]) } else { cr(0.0) });
        MatrixTuple::new(vec![dm, all_ones(d)]).unwrap()
    }

    #[test]
    fn fiberwise_examples() {
        let g = standard_generating_pair::<f64>(2);
        let t = FiberedTuple::new(vec![g.clone(), g.clone()]).unwrap();
        assert_eq!(fiberwise_generates(&t), vec![true, true]);
        let t = FiberedTuple::new(vec![g, MatrixTuple::scalars(2, &[1.0, 2.0])]).unwrap();
        assert_eq!(fiberwise_generates(&t), vec![true, false]);
        let t = FiberedTuple::new(vec![MatrixTuple::<f64>::scalars(1, &[0.0, 3.0])]).unwrap();
        assert_eq!(fiberwise_generates(&t), vec![true]);
    }

    #[test]
    fn conjugacy_examples() {
        let a = pair(&[1.0, 2.0]);
        assert!(fibers_conjugate(&a, &a).unwrap());
        let b = pair(&[2.0, 1.0]);
        assert!(fibers_conjugate(&a, &b).unwrap());
        // the swap witness, checked directly
        let swap = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        assert_eq!(a.conjugated(&swap), b);
        assert!(!fibers_conjugate(&a, &pair(&[1.0, 3.0])).unwrap());
        assert!(matches!(
            fibers_conjugate(&a, &MatrixTuple::scalars(2, &[1.0, 1.0])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn direct_sum_examples() {
        let g2 = standard_generating_pair::<f64>(2);
        let g3 = standard_generating_pair::<f64>(3);
        let alg = FiniteFiberAlgebra::new(vec![2, 2]).unwrap();
        let t = FiberedTuple::new(vec![g2.clone(), g2.clone()]).unwrap();
        let r = generates_direct_sum(&alg, &t).unwrap();
        assert!(!r.generates);
        assert_eq!(r.conflict_pairs, vec![(0, 1)]);
        assert!(!brute_force_generates(&alg, &t).unwrap());

        let alg23 = FiniteFiberAlgebra::new(vec![2, 3]).unwrap();
        let t = FiberedTuple::new(vec![g2.clone(), g3]).unwrap();
        assert!(generates_direct_sum(&alg23, &t).unwrap().generates);
        assert!(brute_force_generates(&alg23, &t).unwrap());

        let t = FiberedTuple::new(vec![pair(&[1.0, 2.0]), pair(&[1.0, 3.0])]).unwrap();
        assert!(generates_direct_sum(&alg, &t).unwrap().generates);
        assert!(brute_force_generates(&alg, &t).unwrap());

        assert!(matches!(
            generates_direct_sum(&alg23, &FiberedTuple::new(vec![g2.clone(), g2]).unwrap()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        let alg = FiniteFiberAlgebra::new(vec![2]).unwrap();
        let t = FiberedTuple::new(vec![MatrixTuple::<f64>::new(vec![diag_ramp(2), all_ones(2)]).unwrap()]).unwrap();
        assert!(brute_force_generates(&alg, &t).unwrap());
        let z = FiberedTuple::new(vec![MatrixTuple::<f64>::zeros(2, 2)]).unwrap();
        assert!(!brute_force_generates(&alg, &z).unwrap());
        let big = FiniteFiberAlgebra::new(vec![13, 12]).unwrap();
        let t = FiberedTuple::new(vec![
            MatrixTuple::<f64>::zeros(13, 1),
            MatrixTuple::zeros(12, 1),
        ])
        .unwrap();
        assert!(matches!(brute_force_generates(&big, &t), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn one_dimensional_fibers_need_distinct_values() {
        let alg = FiniteFiberAlgebra::new(vec![1, 1]).unwrap();
        let same = FiberedTuple::new(vec![
            MatrixTuple::<f64>::scalars(1, &[1.0, 2.0]),
            MatrixTuple::scalars(1, &[1.0, 2.0]),
        ])
        .unwrap();
        assert!(!generates_direct_sum(&alg, &same).unwrap().generates);
        assert!(!brute_force_generates(&alg, &same).unwrap());
        let diff = FiberedTuple::new(vec![
            MatrixTuple::<f64>::scalars(1, &[1.0, 2.0]),
            MatrixTuple::scalars(1, &[1.0, 2.5]),
        ])
        .unwrap();
        assert!(generates_direct_sum(&alg, &diff).unwrap().generates);
        assert!(brute_force_generates(&alg, &diff).unwrap());
        // with the unit adjoined, a zero fiber next to a nonzero one still generates
        let zero_and_one = FiberedTuple::new(vec![
            MatrixTuple::<f64>::scalars(1, &[0.0]),
            MatrixTuple::scalars(1, &[1.0]),
        ])
        .unwrap();
        assert!(!generates_direct_sum(&alg, &zero_and_one).unwrap().generates);
        assert!(generates_direct_sum_unital(&alg, &zero_and_one).unwrap().generates);
        assert!(brute_force_generates_unital(&alg, &zero_and_one).unwrap());
    }

    #[test]
    fn shape_errors() {
        assert!(FiniteFiberAlgebra::new(vec![]).is_err());
        assert!(FiniteFiberAlgebra::new(vec![2, 0]).is_err());
        assert!(FiberedTuple::new(vec![
            MatrixTuple::<f64>::zeros(2, 2),
            MatrixTuple::zeros(2, 3)
        ])
        .is_err());
    }
}
