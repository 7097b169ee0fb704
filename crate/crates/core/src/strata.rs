//! Orbit types of the projective unitary action on hermitian tuples, their
//! stratum dimensions in closed form, and two numerical oracles for them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, inner, rank_real, real_columns, skew_traceless_basis};
use crate::matalg::{
    canonical_model, canonical_model_hermitian_basis, generated_algebra, MatrixTuple, OrbitType,
};
use crate::sampling::{rng_from_seed, trial_seed, SeededRng};
use crate::scalar::{cr, CMat, Real, C};

/// Rejection-sampling budget for points of a stratum.
pub const STRATUM_SAMPLE_RETRIES: usize = 64;

/// Dimension data of one stratum of `(n+1)`-tuples in `M_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumInfo {
    pub orbit_type: OrbitType,
    pub d: usize,
    pub n: usize,
    /// `(n+1) sum d_j^2`: tuples inside the model algebra.
    pub dim_f: usize,
    /// Normaliser of the model algebra in `PU_d`.
    pub dim_n: usize,
    /// Stabiliser of a point, `sum m_j^2 - 1`.
    pub dim_k: usize,
    pub dim_stratum: usize,
    pub is_trivial_type: bool,
}

/// All orbit types for ambient size `d`, each in canonical form, in
/// descending lexicographic order (so `[(d,1)]` comes first).
pub fn enumerate_orbit_types(d: usize) -> Vec<OrbitType> {
    let mut candidates: Vec<(usize, usize)> = (1..=d)
        .flat_map(|a| (1..=d / a).map(move |b| (a, b)))
        .collect();
    candidates.sort_unstable_by(|x, y| y.cmp(x));

    fn rec(
        cands: &[(usize, usize)],
        start: usize,
        remaining: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<OrbitType>,
    ) {
        if remaining == 0 {
            out.push(OrbitType::new(cur.clone()).expect("nonempty pairs"));
            return;
        }
        for (i, &(a, b)) in cands.iter().enumerate().skip(start) {
            if a * b <= remaining {
                cur.push((a, b));
                rec(cands, i, remaining - a * b, cur, out);
                cur.pop();
            }
        }
    }

    let mut out = Vec::new();
    if d > 0 {
        rec(&candidates, 0, d, &mut Vec::new(), &mut out);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// Closed-form stratum dimensions. The normaliser dimension is
/// `sum d_j^2 + sum m_j^2 - L - 1`: its identity component is generated by the
/// unitaries of the model algebra and of its commutant, which meet in the
/// unitaries of the `L`-dimensional centre.
pub fn stratum_dim(ot: &OrbitType, d: usize, n: usize) -> Result<StratumInfo> {
    if ot.size() != d {
        return Err(Error::SizeMismatch {
            expected: d,
            found: ot.size(),
        });
    }
    let sum_d2 = ot.algebra_dim();
    let sum_m2 = ot.commutant_dim();
    let dim_f = (n + 1) * sum_d2;
    let dim_n = sum_d2 + sum_m2 - ot.num_blocks() - 1;
    let dim_k = sum_m2 - 1;
    let dim_stratum = dim_f + (d * d - 1) - dim_n;
    Ok(StratumInfo {
        orbit_type: ot.clone(),
        d,
        n,
        dim_f,
        dim_n,
        dim_k,
        dim_stratum,
        is_trivial_type: ot.is_trivial(),
    })
}

fn require_nontrivial_range(d: usize, n: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::PreconditionViolated(format!("d = {d}, need d >= 2")));
    }
    if n < 1 {
        return Err(Error::PreconditionViolated(format!("n = {n}, need n >= 1")));
    }
    Ok(())
}

/// Non-trivial orbit types attaining the largest stratum dimension.
pub fn nontrivial_maximizers(d: usize, n: usize) -> Result<(usize, Vec<OrbitType>)> {
    require_nontrivial_range(d, n)?;
    let mut best = 0;
    let mut witnesses = Vec::new();
    for ot in enumerate_orbit_types(d).into_iter().filter(|o| !o.is_trivial()) {
        let dim = stratum_dim(&ot, d, n)?.dim_stratum;
        if dim > best {
            best = dim;
            witnesses.clear();
        }
        if dim == best {
            witnesses.push(ot);
        }
    }
    Ok((best, witnesses))
}

/// Largest dimension of a non-generating stratum, with the first witness in
/// enumeration order.
pub fn max_nontrivial_stratum_dim(d: usize, n: usize) -> Result<(usize, OrbitType)> {
    let (best, mut witnesses) = nontrivial_maximizers(d, n)?;
    Ok((best, witnesses.swap_remove(0)))
}

/// `2n(d-1)`: fiberwise generating tuples over a base of dimension `k` are
/// dense exactly when `k` is below this value.
pub fn density_threshold(d: usize, n: usize) -> Result<usize> {
    require_nontrivial_range(d, n)?;
    Ok(2 * n * (d - 1))
}

/// Dimension of `{x in su(d) : [x, B] ⊆ B}` for the model algebra `B` of
/// `ot`, computed as a kernel dimension.
pub fn normalizer_dim_numeric<T: Real>(ot: &OrbitType, d: usize) -> Result<usize> {
    let b = canonical_model::<T>(ot, d)?;
    let xs = skew_traceless_basis::<T>(d);
    if xs.is_empty() {
        return Ok(0);
    }
    let cols: Vec<Vec<C<T>>> = xs
        .iter()
        .map(|x| {
            let mut col = Vec::with_capacity(b.dim() * d * d);
            for beta in b.basis() {
                let mut r = commutator(x, beta);
                for gamma in b.basis() {
                    let coef = inner(gamma, &r);
                    r -= gamma * coef;
                }
                col.extend(r.iter().copied());
            }
            col
        })
        .collect();
    let m = real_columns(&cols);
    Ok(xs.len() - rank_real(&m, T::lit(T::RANK_TOL * 10.0), T::one()))
}

/// A random tuple whose unital generated algebra is exactly the model
/// algebra of `ot` (a point of `F`).
pub fn sample_model_point<T: Real>(
    ot: &OrbitType,
    d: usize,
    n: usize,
    rng: &mut SeededRng,
) -> Result<MatrixTuple<T>> {
    let herm = canonical_model_hermitian_basis::<T>(ot, d)?;
    let target = ot.algebra_dim();
    for _ in 0..STRATUM_SAMPLE_RETRIES {
        let entries: Vec<CMat<T>> = (0..=n)
            .map(|_| {
                let mut a = CMat::zeros(d, d);
                for h in &herm {
                    let g: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng);
                    a += h * cr(T::lit(g));
                }
                a
            })
            .collect();
        let t = MatrixTuple::from_hermitian(d, entries);
        if generated_algebra(&t, true).dim() == target {
            return Ok(t);
        }
    }
    Err(Error::SamplingFailure {
        orbit_type: ot.to_string(),
        attempts: STRATUM_SAMPLE_RETRIES,
    })
}

fn tangent_rank_at<T: Real>(herm: &[CMat<T>], t: &MatrixTuple<T>) -> usize {
    let d = t.d();
    let len = t.len();
    let dd = d * d;
    let mut cols: Vec<Vec<C<T>>> = Vec::new();
    for x in skew_traceless_basis::<T>(d) {
        cols.push(
            t.entries()
                .iter()
                .flat_map(|a| commutator(&x, a).iter().copied().collect::<Vec<_>>())
                .collect(),
        );
    }
    for slot in 0..len {
        for h in herm {
            let mut v = vec![cr(T::zero()); len * dd];
            v[slot * dd..(slot + 1) * dd].copy_from_slice(h.as_slice());
            cols.push(v);
        }
    }
    rank_real(&real_columns(&cols), T::lit(T::RANK_TOL), T::one())
}

/// Generic rank of the tangent space of the stratum: the span of orbit
/// directions `([x, b_0], ..., [x, b_n])` plus the directions inside the
/// model algebra, maximised over `samples` seeded points of `F`.
pub fn tangent_rank_dim<T: Real>(
    ot: &OrbitType,
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<usize> {
    if samples == 0 {
        return Err(Error::PreconditionViolated("samples must be >= 1".into()));
    }
    let herm = canonical_model_hermitian_basis::<T>(ot, d)?;
    let ranks = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = rng_from_seed(trial_seed(seed, s));
            let t = sample_model_point::<T>(ot, d, n, &mut rng)?;
            Ok(tangent_rank_at(&herm, &t))
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(ranks.into_iter().max().unwrap_or(0))
}

/// One row of the strata table: closed forms next to their oracles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrataRow {
    pub orbit_type: OrbitType,
    pub dim_f: usize,
    pub dim_n_formula: usize,
    pub dim_n_numeric: usize,
    pub dim_stratum_formula: usize,
    pub dim_stratum_tangent: usize,
    pub n_match: bool,
    pub stratum_match: bool,
}

impl StrataRow {
    pub fn matches(&self) -> bool {
        self.n_match && self.stratum_match
    }
}

pub fn strata_table<T: Real>(d: usize, n: usize, samples: usize, seed: u64) -> Result<Vec<StrataRow>> {
    enumerate_orbit_types(d)
        .into_iter()
        .map(|ot| {
            let info = stratum_dim(&ot, d, n)?;
            let dim_n_numeric = normalizer_dim_numeric::<T>(&ot, d)?;
            let tangent = tangent_rank_dim::<T>(&ot, d, n, samples, seed)?;
            Ok(StrataRow {
                orbit_type: ot,
                dim_f: info.dim_f,
                dim_n_formula: info.dim_n,
                dim_n_numeric,
                dim_stratum_formula: info.dim_stratum,
                dim_stratum_tangent: tangent,
                n_match: info.dim_n == dim_n_numeric,
                stratum_match: info.dim_stratum == tangent,
            })
        })
        .collect()
}
