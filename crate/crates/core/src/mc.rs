//! Seeded Monte Carlo experiments: genericity of generating tuples, repair
//! of non-generating tuples by small perturbations, the frontier of the
//! generic stratum, and a survey of stratum dimensions.
//!
//! Every trial draws from its own generator seeded by
//! [`trial_seed`]`(master, index)`, so reports do not depend on how trials are
//! scheduled across threads.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentest::{generates_direct_sum, FiberedTuple, FiniteFiberAlgebra};
use crate::matalg::{is_generating, orbit_type_seeded, MatrixTuple, OrbitType};
use crate::sampling::{gue, gue_direction, gue_tuple, haar_unitary, rng_from_seed, trial_seed, SeededRng};
use crate::scalar::{CMat, Real};
use crate::strata::{enumerate_orbit_types, sample_model_point, strata_table, StrataRow};

pub const REPAIR_MAX_ATTEMPTS: usize = 64;

/// Radii tried by the finite-dimensional repair experiment.
pub const REPAIR_SCHEDULE: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Tangent-rank samples per orbit type in the survey.
pub const SURVEY_SAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Noise {
    #[default]
    #[serde(rename = "GUE")]
    Gue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    #[serde(default)]
    pub noise: Noise,
}

impl ExperimentConfig {
    pub fn new(d: usize, n: usize, trials: usize, seed: u64, epsilon: f64) -> Self {
        Self {
            d,
            n,
            trials,
            seed,
            epsilon,
            noise: Noise::Gue,
        }
    }

    fn require_trials(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::PreconditionViolated("trials must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRate {
    pub epsilon: f64,
    pub success_count: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub success: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub success_count: usize,
    pub trials: usize,
    pub empirical_rate: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tallies: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelRate>,
    /// Per-trial records, exported separately as CSV.
    #[serde(skip)]
    pub outcomes: Vec<TrialOutcome>,
}

impl ExperimentReport {
    fn from_outcomes(name: &str, cfg: &ExperimentConfig, outcomes: Vec<TrialOutcome>) -> Self {
        let success_count = outcomes.iter().filter(|o| o.success).count();
        let trials = outcomes.len();
        Self {
            experiment: name.to_string(),
            config: cfg.clone(),
            success_count,
            trials,
            empirical_rate: success_count as f64 / trials as f64,
            tallies: BTreeMap::new(),
            levels: Vec::new(),
            outcomes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }
}

fn run_trials<F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<TrialOutcome>>
where
    F: Fn(usize, &mut SeededRng) -> Result<(bool, String)> + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(trial_seed(cfg.seed, i as u64));
            let (success, detail) = f(i, &mut rng)?;
            Ok(TrialOutcome {
                trial: i,
                success,
                detail,
            })
        })
        .collect()
}

/// Fraction of GUE `(n+1)`-tuples that generate `M_d`.
pub fn genericity_experiment<T: Real>(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.require_trials()?;
    if cfg.d == 0 {
        return Err(Error::PreconditionViolated("d must be >= 1".into()));
    }
    if cfg.n == 0 && cfg.d > 1 {
        return Err(Error::PreconditionViolated(
            "a single self-adjoint matrix never generates M_d for d >= 2; need n >= 1".into(),
        ));
    }
    let outcomes = run_trials(cfg, |_, rng| {
        let t = gue_tuple::<T, _>(cfg.d, cfg.n + 1, rng);
        let ok = is_generating(&t);
        Ok((ok, if ok { "generating" } else { "non-generating" }.into()))
    })?;
    Ok(ExperimentReport::from_outcomes("genericity", cfg, outcomes))
}

/// A generating tuple near a starting tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct Repair<S, T> {
    pub tuple: S,
    pub distance: T,
    pub attempts: usize,
}

fn repair_search<S, T, P, D, A>(
    start: &S,
    epsilon: f64,
    seed: u64,
    perturb: P,
    distance: D,
    accept: A,
) -> Result<Repair<S, T>>
where
    S: Clone,
    T: Real,
    P: Fn(&S, T, &mut SeededRng) -> S,
    D: Fn(&S, &S) -> T,
    A: Fn(&S) -> Result<bool>,
{
    if !(epsilon > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    if accept(start)? {
        return Ok(Repair {
            tuple: start.clone(),
            distance: T::zero(),
            attempts: 0,
        });
    }
    let eps = T::lit(epsilon);
    let mut rng = rng_from_seed(seed);
    for k in 0..REPAIR_MAX_ATTEMPTS {
        // multiplicative schedule eps/2, eps/4, eps/8, repeated
        let radius = eps * T::lit(0.5f64.powi(1 + (k % 3) as i32));
        let cand = perturb(start, radius, &mut rng);
        let dist = distance(&cand, start);
        if dist <= eps && accept(&cand)? {
            return Ok(Repair {
                tuple: cand,
                distance: dist,
                attempts: k + 1,
            });
        }
    }
    Err(Error::RepairFailed {
        epsilon,
        attempts: REPAIR_MAX_ATTEMPTS,
    })
}

/// Random search for a generating tuple within `cfg.epsilon` of `t`. A
/// generating `t` is returned unchanged at distance zero.
pub fn perturbation_repair<T: Real>(
    t: &MatrixTuple<T>,
    cfg: &ExperimentConfig,
) -> Result<Repair<MatrixTuple<T>, T>> {
    repair_search(
        t,
        cfg.epsilon,
        cfg.seed,
        |s, r, rng| s.add_scaled(&gue_direction(s.d(), s.len(), r, rng), T::one()),
        |a, b| a.distance(b),
        |s| Ok(is_generating(s)),
    )
}

/// Same search for a tuple over a finite direct sum of matrix algebras.
pub fn perturbation_repair_fibered<T: Real>(
    alg: &FiniteFiberAlgebra,
    t: &FiberedTuple<T>,
    epsilon: f64,
    seed: u64,
) -> Result<Repair<FiberedTuple<T>, T>> {
    repair_search(
        t,
        epsilon,
        seed,
        |s, r, rng| {
            let raw: Vec<MatrixTuple<T>> = s
                .fibers()
                .iter()
                .map(|f| gue_tuple::<T, _>(f.d(), f.len(), rng))
                .collect();
            let dir = FiberedTuple::new(raw).expect("same shape");
            let scale = r / dir.norm();
            s.add_scaled(&dir, scale)
        },
        |a, b| a.add_scaled(b, -T::one()).norm(),
        |s| Ok(generates_direct_sum(alg, s)?.generates),
    )
}

/// Constructions of non-generating tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantedKind {
    Zero,
    Scalar,
    BlockDiagonal,
}

impl PlantedKind {
    pub const ALL: [PlantedKind; 3] = [PlantedKind::Zero, PlantedKind::Scalar, PlantedKind::BlockDiagonal];
}

/// A non-generating `len`-tuple in `M_d` of the given construction
/// (`d >= 2`). Block-diagonal tuples split `C^d` into two invariant pieces.
pub fn planted_tuple<T: Real>(kind: PlantedKind, d: usize, len: usize, rng: &mut SeededRng) -> MatrixTuple<T> {
    match kind {
        PlantedKind::Zero => MatrixTuple::zeros(d, len),
        PlantedKind::Scalar => {
            let vals: Vec<f64> = (0..len).map(|_| rng.random_range(-2.0..2.0)).collect();
            MatrixTuple::scalars(d, &vals)
        }
        PlantedKind::BlockDiagonal => {
            let k = rng.random_range(1..d.max(2));
            let entries = (0..len)
                .map(|_| {
                    let mut m = CMat::zeros(d, d);
                    m.view_mut((0, 0), (k, k)).copy_from(&gue::<T, _>(k, rng));
                    m.view_mut((k, k), (d - k, d - k))
                        .copy_from(&gue::<T, _>(d - k, rng));
                    m
                })
                .collect();
            MatrixTuple::from_hermitian(d, entries)
        }
    }
}

/// Samples points of the stratum of `ot` (randomly conjugated), perturbs
/// them by GUE noise of norm `cfg.epsilon`, and counts how often the result
/// lands in the generic stratum. `epsilon = 0` is the control: nothing moves.
pub fn frontier_probe<T: Real>(ot: &OrbitType, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.require_trials()?;
    if ot.is_trivial() {
        return Err(Error::PreconditionViolated(
            "frontier probe needs a non-trivial orbit type".into(),
        ));
    }
    if ot.size() != cfg.d {
        return Err(Error::SizeMismatch {
            expected: cfg.d,
            found: ot.size(),
        });
    }
    if !(cfg.epsilon >= 0.0) {
        return Err(Error::PreconditionViolated("epsilon must be >= 0".into()));
    }
    let outcomes = run_trials(cfg, |i, rng| {
        let base = sample_model_point::<T>(ot, cfg.d, cfg.n, rng)?;
        let u = haar_unitary::<T, _>(cfg.d, rng);
        let mut p = base.conjugated(&u);
        if cfg.epsilon > 0.0 {
            let noise = gue_direction::<T, _>(cfg.d, cfg.n + 1, T::lit(cfg.epsilon), rng);
            p = p.add_scaled(&noise, T::one());
        }
        Ok(match orbit_type_seeded(&p, trial_seed(cfg.seed ^ 0xC0FFEE, i as u64)) {
            Ok(found) => (found.is_trivial(), found.to_string()),
            Err(_) => (false, "unclassified".into()),
        })
    })?;
    let mut report = ExperimentReport::from_outcomes("frontier", cfg, outcomes);
    for o in &report.outcomes {
        *report.tallies.entry(o.detail.clone()).or_default() += 1;
    }
    Ok(report)
}

fn sample_fibered<T: Real>(
    alg: &FiniteFiberAlgebra,
    len: usize,
    trial: usize,
    rng: &mut SeededRng,
) -> (FiberedTuple<T>, &'static str) {
    let sizes = alg.fibers();
    let (fibers, label): (Vec<MatrixTuple<T>>, _) = match trial % 4 {
        0 => (
            sizes.iter().map(|&d| gue_tuple(d, len, rng)).collect(),
            "gue",
        ),
        1 => (
            sizes.iter().map(|&d| MatrixTuple::zeros(d, len)).collect(),
            "zero",
        ),
        2 => (
            sizes
                .iter()
                .map(|&d| {
                    let vals: Vec<f64> = (0..len).map(|_| rng.random_range(-2.0..2.0)).collect();
                    MatrixTuple::scalars(d, &vals)
                })
                .collect(),
            "scalar",
        ),
        _ => {
            // later fibers copy a conjugate of the first fiber of equal size
            let mut out: Vec<MatrixTuple<T>> = Vec::with_capacity(sizes.len());
            for (x, &d) in sizes.iter().enumerate() {
                let earlier = sizes[..x].iter().position(|&e| e == d);
                let t = match earlier {
                    Some(y) => out[y].conjugated(&haar_unitary::<T, _>(d, rng)),
                    None => gue_tuple(d, len, rng),
                };
                out.push(t);
            }
            (out, "duplicated")
        }
    };
    (FiberedTuple::new(fibers).expect("uniform length"), label)
}

/// Repairability of tuples over `alg` at each radius of
/// [`REPAIR_SCHEDULE`]. Starting tuples cycle through GUE samples, zero
/// tuples, scalar tuples, and tuples repeating a conjugate across equal-size
/// fibers. A trial succeeds when it is repaired at every radius.
pub fn finite_dim_gr_experiment<T: Real>(
    alg: &FiniteFiberAlgebra,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    cfg.require_trials()?;
    if cfg.n == 0 {
        return Err(Error::PreconditionViolated("need n >= 1".into()));
    }
    let per_trial: Vec<(TrialOutcome, Vec<bool>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let tseed = trial_seed(cfg.seed, i as u64);
            let mut rng = rng_from_seed(tseed);
            let (t, label) = sample_fibered::<T>(alg, cfg.n + 1, i, &mut rng);
            let levels: Vec<bool> = REPAIR_SCHEDULE
                .iter()
                .enumerate()
                .map(|(k, &eps)| {
                    match perturbation_repair_fibered(alg, &t, eps, trial_seed(tseed, k as u64)) {
                        Ok(_) => Ok(true),
                        Err(Error::RepairFailed { .. }) => Ok(false),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<_>>()?;
            let outcome = TrialOutcome {
                trial: i,
                success: levels.iter().all(|&b| b),
                detail: label.into(),
            };
            Ok((outcome, levels))
        })
        .collect::<Result<_>>()?;
    let levels = REPAIR_SCHEDULE
        .iter()
        .enumerate()
        .map(|(k, &epsilon)| {
            let success_count = per_trial.iter().filter(|(_, l)| l[k]).count();
            LevelRate {
                epsilon,
                success_count,
                rate: success_count as f64 / cfg.trials as f64,
            }
        })
        .collect();
    let outcomes = per_trial.into_iter().map(|(o, _)| o).collect();
    let mut report = ExperimentReport::from_outcomes("finite-gr", cfg, outcomes);
    report.levels = levels;
    for o in &report.outcomes {
        *report.tallies.entry(o.detail.clone()).or_default() += 1;
    }
    Ok(report)
}

/// Repair of planted non-generating tuples (zero, scalar, block-diagonal
/// constructions in rotation), one per trial.
pub fn planted_repair_experiment<T: Real>(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.require_trials()?;
    if cfg.d < 2 || cfg.n == 0 {
        return Err(Error::PreconditionViolated("need d >= 2 and n >= 1".into()));
    }
    let outcomes = run_trials(cfg, |i, rng| {
        let kind = PlantedKind::ALL[i % PlantedKind::ALL.len()];
        let t = planted_tuple::<T>(kind, cfg.d, cfg.n + 1, rng);
        if is_generating(&t) {
            return Err(Error::OracleMismatch(format!("planted {kind:?} tuple generates")));
        }
        let trial_cfg = ExperimentConfig {
            seed: rng.random(),
            ..cfg.clone()
        };
        Ok(match perturbation_repair(&t, &trial_cfg) {
            Ok(r) => (
                r.distance.as_f64() <= cfg.epsilon && is_generating(&r.tuple),
                format!("{kind:?}: distance {:.3e}", r.distance.as_f64()),
            ),
            Err(Error::RepairFailed { .. }) => (false, format!("{kind:?}: failed")),
            Err(e) => return Err(e),
        })
    })?;
    Ok(ExperimentReport::from_outcomes("repair", cfg, outcomes))
}

/// Closed-form versus tangent-rank dimensions for every orbit type.
/// Fails with [`Error::OracleMismatch`] on any disagreement.
pub fn stratum_dim_survey<T: Real>(d: usize, n: usize, cfg: &ExperimentConfig) -> Result<Vec<StrataRow>> {
    if d == 0 || d > 4 || n > 3 {
        return Err(Error::PreconditionViolated(format!(
            "survey bounded to 1 <= d <= 4, n <= 3; got d = {d}, n = {n}"
        )));
    }
    let rows = strata_table::<T>(d, n, SURVEY_SAMPLES, cfg.seed)?;
    if let Some(bad) = rows.iter().find(|r| !r.matches()) {
        return Err(Error::OracleMismatch(format!(
            "orbit type {}: formula ({}, {}) vs numeric ({}, {})",
            bad.orbit_type,
            bad.dim_n_formula,
            bad.dim_stratum_formula,
            bad.dim_n_numeric,
            bad.dim_stratum_tangent
        )));
    }
    debug_assert_eq!(rows.len(), enumerate_orbit_types(d).len());
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matalg::standard_generating_pair;

    #[test]
    fn genericity_small_cases() {
        let r = genericity_experiment::<f64>(&ExperimentConfig::new(2, 1, 200, 1, 0.0)).unwrap();
        assert_eq!(r.success_count, 200);
        let r = genericity_experiment::<f64>(&ExperimentConfig::new(1, 0, 50, 1, 0.0)).unwrap();
        assert_eq!(r.empirical_rate, 1.0);
        assert!(genericity_experiment::<f64>(&ExperimentConfig::new(3, 0, 5, 1, 0.0)).is_err());
        assert!(genericity_experiment::<f64>(&ExperimentConfig::new(3, 1, 0, 1, 0.0)).is_err());
    }

    #[test]
    fn repair_examples() {
        let cfg = ExperimentConfig::new(2, 1, 1, 9, 1e-3);
        let r = perturbation_repair(&MatrixTuple::<f64>::zeros(2, 2), &cfg).unwrap();
        assert!(r.distance <= 1e-3);
        assert!(is_generating(&r.tuple));

        let g = standard_generating_pair::<f64>(3);
        let r = perturbation_repair(&g, &cfg).unwrap();
        assert_eq!((r.distance, r.attempts), (0.0, 0));
        assert_eq!(r.tuple, g);

        let s = MatrixTuple::<f64>::scalars(4, &[1.0, -1.0]);
        let r = perturbation_repair(&s, &cfg).unwrap();
        assert!(r.distance <= 1e-3 && is_generating(&r.tuple));

        let bad = ExperimentConfig::new(2, 1, 1, 9, 0.0);
        assert!(perturbation_repair(&s, &bad).is_err());
    }

    #[test]
    fn frontier_control_and_probe() {
        let ot: OrbitType = "[(1,2)]".parse().unwrap();
        let r = frontier_probe::<f64>(&ot, &ExperimentConfig::new(2, 1, 50, 3, 0.0)).unwrap();
        assert_eq!(r.success_count, 0);
        assert_eq!(r.tallies.get("[(1,2)]"), Some(&50));
        let r = frontier_probe::<f64>(&ot, &ExperimentConfig::new(2, 1, 50, 3, 1e-6)).unwrap();
        assert_eq!(r.success_count, 50);
        assert!(frontier_probe::<f64>(&OrbitType::trivial(2), &ExperimentConfig::new(2, 1, 5, 3, 1e-6)).is_err());
    }

    #[test]
    fn finite_dim_levels() {
        let alg = FiniteFiberAlgebra::new(vec![1, 1]).unwrap();
        let r = finite_dim_gr_experiment::<f64>(&alg, &ExperimentConfig::new(2, 1, 20, 4, 0.0)).unwrap();
        assert_eq!(r.levels.len(), 3);
        assert!(r.levels.iter().all(|l| l.success_count == 20));
    }

    #[test]
    fn planted_tuples_do_not_generate() {
        let mut rng = rng_from_seed(11);
        for d in 2..5 {
            for kind in PlantedKind::ALL {
                assert!(!is_generating(&planted_tuple::<f64>(kind, d, 2, &mut rng)));
            }
        }
    }

    #[test]
    fn survey_bounds() {
        let cfg = ExperimentConfig::new(2, 1, 1, 1, 0.0);
        let rows = stratum_dim_survey::<f64>(2, 1, &cfg).unwrap();
        let dims: Vec<usize> = rows.iter().map(|r| r.dim_stratum_formula).collect();
        assert_eq!(dims, vec![8, 2, 6]);
        assert!(stratum_dim_survey::<f64>(5, 1, &cfg).is_err());
    }
}
