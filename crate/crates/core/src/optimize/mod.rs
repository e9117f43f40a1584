//! Constrained angle optimization for conditional gates.
//!
//! Every problem has the same shape: some branch map (possibly composed
//! with earlier branches) must be proportional to a target such as
//! `(1, 1, −1)`, and its worst-input probability is maximized. The
//! constraint enters as a quadratic penalty whose weight escalates over a
//! fixed schedule; each stage is a Nelder–Mead run warm-started from the
//! previous one. Starts are seeded and independent, so they run in
//! parallel and the merge is order-independent.

mod chain;
mod gates;
mod nelder_mead;
mod scan;

use std::cmp::Ordering;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::C64;

pub use chain::{optimize_chain, stage_failure, ChainConfig, ChainResult, SecondRound};
pub use gates::{
    correction_patterns, optimize_correction, optimize_single, CorrectionResult, OptimizationProblem,
    PatternAttempt, ADDING_CORRECTION_WARM_START, PRESERVING_CORRECTION_WARM_START,
};
pub use nelder_mead::{Minimum, NelderMead};
pub use scan::{tradeoff_scan, TradeoffRow, TradeoffScan};

const POLISH_RESTARTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub seed: u64,
    pub penalty_schedule: Vec<f64>,
    /// Function evaluations per penalty stage, per three angles.
    pub max_evals: usize,
    pub x_tol: f64,
    pub feasibility_tol: f64,
    pub grid_step: f64,
    pub parallel: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0,
            penalty_schedule: vec![1e2, 1e4, 1e6, 1e8],
            max_evals: 3000,
            x_tol: 1e-11,
            feasibility_tol: 1e-8,
            grid_step: 1e-3,
            parallel: true,
        }
    }
}

impl OptimizerConfig {
    /// Sets one option from a `key=value` style pair.
    ///
    /// Keys: `restarts`, `seed`, `penalty` (comma-separated weights),
    /// `max_evals`, `x_tol`, `tol`, `grid_step`, `parallel`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Config(format!("invalid value '{value}' for '{key}'"));
        match key {
            "restarts" => self.restarts = value.parse().map_err(|_| bad())?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            "penalty" | "penalty_schedule" => {
                let schedule = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if schedule.is_empty() || schedule.iter().any(|&w| !(w > 0.0)) {
                    return Err(bad());
                }
                self.penalty_schedule = schedule;
            }
            "max_evals" => self.max_evals = value.parse().map_err(|_| bad())?,
            "x_tol" => self.x_tol = value.parse().map_err(|_| bad())?,
            "tol" | "feasibility_tol" => self.feasibility_tol = value.parse().map_err(|_| bad())?,
            "grid_step" => {
                self.grid_step = value.parse().map_err(|_| bad())?;
                if !(self.grid_step > 0.0) {
                    return Err(bad());
                }
            }
            "parallel" => self.parallel = value.parse().map_err(|_| bad())?,
            _ => return Err(Error::Config(format!("unknown optimizer option '{key}'"))),
        }
        Ok(())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut config = Self::default();
        for (k, v) in pairs {
            config.set(k, v)?;
        }
        Ok(config)
    }

    /// Local solver for a `dim`-dimensional problem; the evaluation budget
    /// grows with the dimension beyond three angles.
    fn local(&self, dim: usize) -> NelderMead {
        let scale = dim.div_ceil(3).max(1);
        NelderMead { max_evals: self.max_evals * scale, x_tol: self.x_tol, ..NelderMead::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationResult {
    /// Radians, wrapped into `[0, 2π)`.
    pub angles: Vec<f64>,
    pub objective_value: f64,
    pub constraint_residual: f64,
    pub restarts_used: usize,
    pub feasible_starts: usize,
    pub seed: u64,
}

/// Distance of a branch from proportionality with `target`:
/// `1 − |⟨t̂, â⟩|²`, i.e. `min_s Σ_n |a_n/|a| − s·t_n/|t||²`.
///
/// Invariant under scaling and global phase of either argument; the
/// zero map is maximally non-proportional.
pub fn proportionality_residual(amplitudes: &[C64], target: &[C64]) -> Result<f64> {
    if amplitudes.len() != target.len() {
        return Err(Error::InvalidTarget(format!(
            "target has {} entries, map has {}",
            target.len(),
            amplitudes.len()
        )));
    }
    let na: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let nt: f64 = target.iter().map(|t| t.norm_sqr()).sum();
    if nt == 0.0 {
        return Err(Error::InvalidTarget("zero target".into()));
    }
    if na == 0.0 {
        return Ok(1.0);
    }
    let overlap: C64 = target.iter().zip(amplitudes).map(|(t, a)| t.conj() * a).sum();
    Ok((1.0 - overlap.norm_sqr() / (na * nt)).max(0.0))
}

/// Squared magnitude of the best scale `s` in `a ≈ s·t` when `|t_n| = 1`.
pub(crate) fn projected_probability(amplitudes: &[C64], target: &[C64]) -> f64 {
    let nt: f64 = target.iter().map(|t| t.norm_sqr()).sum();
    let overlap: C64 = target.iter().zip(amplitudes).map(|(t, a)| t.conj() * a).sum();
    (overlap / nt).norm_sqr()
}

pub(crate) fn validate_target(target: &[C64]) -> Result<()> {
    if target.is_empty() {
        return Err(Error::InvalidTarget("empty target".into()));
    }
    if target.iter().any(|t| t.norm() < 1e-12) {
        return Err(Error::InvalidTarget("target has a zero entry".into()));
    }
    Ok(())
}

/// One evaluated point: objective to maximize and constraint residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Evaluation {
    pub objective: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
struct Candidate {
    angles: Vec<f64>,
    eval: Evaluation,
}

fn wrap(angles: &[f64]) -> Vec<f64> {
    angles.iter().map(|a| a.rem_euclid(TAU)).collect()
}

/// Better objective first; exact ties go to the lexicographically smaller
/// angle vector.
fn compare(a: &Candidate, b: &Candidate) -> Ordering {
    b.eval
        .objective
        .total_cmp(&a.eval.objective)
        .then_with(|| {
            a.angles
                .iter()
                .zip(&b.angles)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Multi-start penalty optimization.
///
/// `smooth` returns the smooth surrogate (objective, residual) used inside
/// the penalty; `exact` returns the reported figures for a final point.
pub(crate) fn multistart<S, E>(
    dim: usize,
    config: &OptimizerConfig,
    warm_starts: &[Vec<f64>],
    smooth: S,
    exact: E,
) -> Result<OptimizationResult>
where
    S: Fn(&[f64]) -> Evaluation + Sync,
    E: Fn(&[f64]) -> Evaluation + Sync,
{
    if config.penalty_schedule.is_empty() {
        return Err(Error::Config("empty penalty schedule".into()));
    }
    let mut starts: Vec<Vec<f64>> = warm_starts.iter().filter(|w| w.len() == dim).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        starts.push((0..dim).map(|_| rng.random_range(0.0..TAU)).collect());
    }
    if starts.is_empty() {
        return Err(Error::Config("no starting points (restarts = 0 and no warm starts)".into()));
    }

    let local = config.local(dim);
    let run = |x0: &Vec<f64>| {
        let mut x = x0.clone();
        let mut value = f64::INFINITY;
        for &weight in &config.penalty_schedule {
            let penalized = |p: &[f64]| {
                let e = smooth(p);
                -e.objective + weight * e.residual
            };
            let m = local.minimize(penalized, &x);
            (x, value) = (m.x, m.value);
        }
        // Restarting the simplex at the last weight frees it from collapse
        // along poorly scaled directions.
        let weight = *config.penalty_schedule.last().expect("checked non-empty");
        let penalized = |p: &[f64]| {
            let e = smooth(p);
            -e.objective + weight * e.residual
        };
        for _ in 0..POLISH_RESTARTS {
            let m = local.minimize(penalized, &x);
            if !(m.value < value - 1e-15) {
                break;
            }
            (x, value) = (m.x, m.value);
        }
        let angles = wrap(&x);
        Candidate { eval: exact(&angles), angles }
    };
    let candidates: Vec<Candidate> = if config.parallel {
        starts.par_iter().map(run).collect()
    } else {
        starts.iter().map(run).collect()
    };

    let feasible: Vec<&Candidate> =
        candidates.iter().filter(|c| c.eval.residual <= config.feasibility_tol).collect();
    let best = feasible
        .iter()
        .copied()
        .min_by(|a, b| compare(a, b))
        .ok_or_else(|| Error::Infeasible(format!("no feasible point after {} starts", starts.len())))?;
    Ok(OptimizationResult {
        angles: best.angles.clone(),
        objective_value: best.eval.objective,
        constraint_residual: best.eval.residual,
        restarts_used: starts.len(),
        feasible_starts: feasible.len(),
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn residual_examples() {
        let t = r(&[1.0, 1.0, -1.0]);
        assert!(proportionality_residual(&r(&[0.5, 0.5, -0.5]), &t).unwrap() < 1e-15);
        assert!(proportionality_residual(&r(&[0.5, 0.5, 0.5]), &t).unwrap() > 0.1);
        assert!(proportionality_residual(&r(&[0.3, 0.3, -0.3]), &t).unwrap() < 1e-15);
        let phased: Vec<C64> = r(&[0.3, 0.3, -0.3]).iter().map(|a| a * C64::from_polar(1.0, 0.7)).collect();
        assert!(proportionality_residual(&phased, &t).unwrap() < 1e-15);
        assert_eq!(proportionality_residual(&r(&[0.0, 0.0, 0.0]), &t).unwrap(), 1.0);
        assert!(proportionality_residual(&r(&[1.0]), &t).is_err());
    }

    #[test]
    fn config_pairs() {
        let c = OptimizerConfig::from_pairs([("restarts", "8"), ("seed", "7"), ("penalty", "1e1,1e3")]).unwrap();
        assert_eq!((c.restarts, c.seed), (8, 7));
        assert_eq!(c.penalty_schedule, vec![10.0, 1000.0]);
        assert!(OptimizerConfig::from_pairs([("bogus", "1")]).is_err());
        assert!(OptimizerConfig::from_pairs([("penalty", "-1")]).is_err());
        assert!(OptimizerConfig::from_pairs([("grid_step", "0")]).is_err());
    }

    #[test]
    fn multistart_finds_constrained_maximum() {
        // maximize sin(x) subject to cos(y) = 1
        let eval = |p: &[f64]| Evaluation { objective: p[0].sin(), residual: (1.0 - p[1].cos()).powi(2) };
        let config = OptimizerConfig { restarts: 8, ..Default::default() };
        let res = multistart(2, &config, &[], eval, eval).unwrap();
        assert!((res.objective_value - 1.0).abs() < 1e-9);
        assert!(res.constraint_residual <= 1e-8);
    }

    #[test]
    fn multistart_reports_infeasibility() {
        let eval = |p: &[f64]| Evaluation { objective: p[0], residual: 1.0 };
        let config = OptimizerConfig { restarts: 2, ..Default::default() };
        assert!(matches!(multistart(1, &config, &[], eval, eval), Err(Error::Infeasible(_))));
    }
}
