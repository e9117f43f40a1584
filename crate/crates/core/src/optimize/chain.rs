//! Gate followed by correction networks on its correctable syndromes.
//!
//! The first network runs the gate. If it heralds the number-preserving
//! syndrome, a second network (fresh ancilla) tries again on the already
//! distorted signal; if it heralds the photon-adding syndrome and
//! `correct_adding` is set, a third network removes the extra photon. All
//! angles are optimized jointly so the first network may trade some direct
//! success for better-correctable syndromes.

use serde::Serialize;

use super::gates::{correction_patterns, optimize_correction, stage_branch, CorrectionResult};
use super::{
    multistart, projected_probability, proportionality_residual, validate_target, Evaluation,
    OptimizationResult, OptimizerConfig,
};
use crate::analysis::{conditional_map, ns_target};
use crate::error::{Error, Result};
use crate::fock::{ConditionalMap, FockState, C64};
use crate::network::{ns_canonical, NetworkSpec, NetworkTemplate};

#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    pub template: NetworkTemplate,
    pub ancilla: FockState,
    pub success_pattern: FockState,
    /// First-network outcome handed to the second network.
    pub preserving_pattern: FockState,
    /// First-network outcome handed to the adding correction.
    pub adding_pattern: FockState,
    /// Detection that heralds a successful adding correction.
    pub adding_success_pattern: FockState,
    /// With the second network off the chain is the bare gate.
    pub second_enabled: bool,
    pub correct_adding: bool,
    /// `2` additionally corrects the second network's preserving syndrome.
    pub rounds: usize,
    pub target: Vec<C64>,
    pub optimizer: OptimizerConfig,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            template: NetworkTemplate::su3(),
            ancilla: FockState::from([1, 0]),
            success_pattern: FockState::from([1, 0]),
            preserving_pattern: FockState::from([0, 1]),
            adding_pattern: FockState::from([0, 0]),
            adding_success_pattern: FockState::from([2, 0]),
            second_enabled: true,
            correct_adding: true,
            rounds: 1,
            target: ns_target(),
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecondRound {
    /// Concatenated first- and second-network syndrome patterns.
    pub syndrome_pattern: FockState,
    pub correction: CorrectionResult,
    pub added_probability: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainResult {
    pub first_angles: Vec<f64>,
    pub second_angles: Option<Vec<f64>>,
    pub adding_angles: Option<Vec<f64>>,
    /// Worst-input success probability of the first network alone.
    pub direct_success: f64,
    /// Worst-input probability of preserving syndrome then second success.
    pub retry_success: f64,
    /// Worst-input probability of adding syndrome then its correction.
    pub adding_success: Option<f64>,
    /// `direct_success + retry_success`.
    pub formula_total: f64,
    pub total: f64,
    /// Irrecoverable probability per input over the first two networks.
    pub per_input_failure: Vec<f64>,
    pub max_failure: f64,
    pub argmax_input: usize,
    /// Same, also counting failures of the adding correction.
    pub max_failure_with_adding: Option<f64>,
    pub optimization: OptimizationResult,
    pub second_round: Option<SecondRound>,
}

/// Probability, per signal input `0..=n_max`, of detecting more photons
/// than `success_pattern` holds.
pub fn stage_failure(
    network: &NetworkSpec,
    ancilla: &FockState,
    success_pattern: &FockState,
    n_max: usize,
) -> Result<Vec<f64>> {
    let threshold = success_pattern.total_photons();
    let mut q = vec![0.0; n_max + 1];
    for pattern in FockState::enumerate(ancilla.modes(), n_max + ancilla.total_photons()) {
        if pattern.total_photons() <= threshold {
            continue;
        }
        let map = conditional_map(network, ancilla, &pattern, n_max)?;
        for (qn, p) in q.iter_mut().zip(map.populations()) {
            *qn += p;
        }
    }
    Ok(q)
}

struct Branches {
    direct: ConditionalMap,
    retry: Option<ConditionalMap>,
    adding: Option<ConditionalMap>,
}

impl ChainConfig {
    fn validate(&self) -> Result<()> {
        validate_target(&self.target)?;
        if !self.second_enabled && self.rounds == 2 {
            return Err(Error::Config("a second round needs the second network".into()));
        }
        if !(1..=2).contains(&self.rounds) {
            return Err(Error::Config(format!("rounds must be 1 or 2, got {}", self.rounds)));
        }
        let modes = self.template.num_modes - 1;
        for p in [&self.ancilla, &self.success_pattern, &self.preserving_pattern, &self.adding_pattern] {
            if p.modes() != modes {
                return Err(Error::ModeCountMismatch { expected: modes, found: p.modes() });
            }
        }
        if self.correct_adding && self.adding_success_pattern.modes() != modes {
            return Err(Error::ModeCountMismatch { expected: modes, found: self.adding_success_pattern.modes() });
        }
        Ok(())
    }

    fn num_angles(&self) -> usize {
        self.template.num_angles() * self.stages()
    }

    fn stages(&self) -> usize {
        match (self.second_enabled, self.correct_adding) {
            (false, _) => 1,
            (true, false) => 2,
            (true, true) => 3,
        }
    }

    fn networks(&self, angles: &[f64]) -> Result<Vec<NetworkSpec>> {
        angles.chunks(self.template.num_angles()).map(|a| self.template.instantiate(a)).collect()
    }

    fn branches(&self, angles: &[f64]) -> Result<Branches> {
        let n_max = self.target.len() - 1;
        let nets = self.networks(angles)?;
        let first = nets[0].compose();
        let direct = stage_branch(first.matrix(), &self.ancilla, &self.success_pattern, None, n_max)?;
        let syndrome = stage_branch(first.matrix(), &self.ancilla, &self.preserving_pattern, None, n_max)?;
        let retry = match nets.get(1) {
            Some(second) => Some(stage_branch(
                second.compose().matrix(),
                &self.ancilla,
                &self.success_pattern,
                Some(&syndrome),
                n_max,
            )?),
            None => None,
        };
        let adding = match nets.get(2) {
            Some(third) => {
                let syndrome = stage_branch(first.matrix(), &self.ancilla, &self.adding_pattern, None, n_max)?;
                Some(stage_branch(
                    third.compose().matrix(),
                    &self.ancilla,
                    &self.adding_success_pattern,
                    Some(&syndrome),
                    n_max,
                )?)
            }
            None => None,
        };
        Ok(Branches { direct, retry, adding })
    }

    fn maps(branches: &Branches) -> impl Iterator<Item = &ConditionalMap> {
        std::iter::once(&branches.direct).chain(branches.retry.as_ref()).chain(branches.adding.as_ref())
    }

    fn score(&self, angles: &[f64], value: impl Fn(&ConditionalMap) -> f64) -> Evaluation {
        let Ok(b) = self.branches(angles) else {
            return Evaluation { objective: 0.0, residual: f64::INFINITY };
        };
        let mut eval = Evaluation { objective: 0.0, residual: 0.0 };
        for map in Self::maps(&b) {
            eval.objective += value(map);
            eval.residual += proportionality_residual(map.amplitudes(), &self.target).unwrap_or(1.0);
        }
        eval
    }

    fn warm_starts(&self) -> Vec<Vec<f64>> {
        if self.template != NetworkTemplate::su3() {
            return Vec::new();
        }
        let mut start = ns_canonical().angles();
        if self.second_enabled {
            start.extend(super::PRESERVING_CORRECTION_WARM_START);
        }
        if self.stages() == 3 {
            start.extend(super::ADDING_CORRECTION_WARM_START);
        }
        vec![start]
    }
}

/// Jointly optimizes the gate and its correction networks for the largest
/// worst-input total success probability.
pub fn optimize_chain(config: &ChainConfig) -> Result<ChainResult> {
    config.validate()?;
    let optimization = multistart(
        config.num_angles(),
        &config.optimizer,
        &config.warm_starts(),
        |x| config.score(x, |m| projected_probability(m.amplitudes(), &config.target)),
        |x| config.score(x, ConditionalMap::worst_case_probability),
    )?;
    let angles = &optimization.angles;
    let k = config.template.num_angles();
    let branches = config.branches(angles)?;
    let nets = config.networks(angles)?;
    let n_max = config.target.len() - 1;

    let direct_success = branches.direct.worst_case_probability();
    let retry_success = branches.retry.as_ref().map_or(0.0, ConditionalMap::worst_case_probability);
    let adding_success = branches.adding.as_ref().map(ConditionalMap::worst_case_probability);
    let formula_total = direct_success + retry_success;
    let total = formula_total + adding_success.unwrap_or(0.0);

    let q1 = stage_failure(&nets[0], &config.ancilla, &config.success_pattern, n_max)?;
    let per_input_failure: Vec<f64> = match nets.get(1) {
        Some(second) => {
            let q2 = stage_failure(second, &config.ancilla, &config.success_pattern, n_max)?;
            let preserving = conditional_map(&nets[0], &config.ancilla, &config.preserving_pattern, n_max)?;
            (0..=n_max).map(|n| q1[n] + preserving.populations()[n] * q2[n]).collect()
        }
        None => q1,
    };
    let (argmax_input, max_failure) = argmax(&per_input_failure);

    let max_failure_with_adding = match nets.get(2) {
        Some(third) => {
            let adding = conditional_map(&nets[0], &config.ancilla, &config.adding_pattern, n_max)?;
            let shift = adding.delta().max(0) as usize;
            let q3 = stage_failure(third, &config.ancilla, &config.adding_success_pattern, n_max + shift)?;
            let with: Vec<f64> = (0..=n_max)
                .map(|n| {
                    let mid = n as i64 + adding.delta();
                    let extra = if mid < 0 { 0.0 } else { adding.populations()[n] * q3[mid as usize] };
                    per_input_failure[n] + extra
                })
                .collect();
            Some(argmax(&with).1)
        }
        None => None,
    };

    let second_round = if config.rounds == 2 {
        let syndrome = conditional_map(&nets[0], &config.ancilla, &config.preserving_pattern, n_max)?
            .then(&conditional_map(&nets[1], &config.ancilla, &config.preserving_pattern, n_max)?)?;
        let candidates = correction_patterns(&config.ancilla, syndrome.delta());
        let correction = optimize_correction(
            &syndrome,
            &config.template,
            &config.ancilla,
            &candidates,
            &config.target,
            &config.optimizer,
            &[],
        )?;
        let added_probability = correction.result.objective_value;
        Some(SecondRound {
            syndrome_pattern: syndrome.pattern().clone(),
            correction,
            added_probability,
            total: total + added_probability,
        })
    } else {
        None
    };

    Ok(ChainResult {
        first_angles: angles[..k].to_vec(),
        second_angles: (nets.len() > 1).then(|| angles[k..2 * k].to_vec()),
        adding_angles: (nets.len() > 2).then(|| angles[2 * k..].to_vec()),
        direct_success,
        retry_success,
        adding_success,
        formula_total,
        total,
        per_input_failure,
        max_failure,
        argmax_input,
        max_failure_with_adding,
        optimization,
        second_round,
    })
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (n, v)| if v > best.1 { (n, v) } else { best })
}
