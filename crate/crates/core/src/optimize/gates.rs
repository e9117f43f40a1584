use serde::Serialize;

use super::{
    multistart, projected_probability, proportionality_residual, validate_target, Evaluation,
    OptimizationResult, OptimizerConfig,
};
use crate::analysis::{conditional_map_for_unitary, ZERO_AMPLITUDE};
use crate::error::{Error, Result};
use crate::fock::{ConditionalMap, FockState, C64};
use crate::network::NetworkTemplate;
use crate::permanent::ComplexMatrix;

/// Published correction angles for the photon-adding syndrome, used only
/// as an extra warm start.
pub const ADDING_CORRECTION_WARM_START: [f64; 3] = [0.489377, 1.07621, 0.489377];

/// Published correction angles for the number-preserving syndrome, used
/// only as an extra warm start.
pub const PRESERVING_CORRECTION_WARM_START: [f64; 3] = [2.53787, 2.26111, 2.53787];

/// Pattern objectives closer than this count as tied; the earlier
/// pattern wins.
const PATTERN_TIE_TOL: f64 = 1e-9;

/// One heralded stage whose branch (optionally composed after `prior`)
/// must be proportional to `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationProblem {
    pub template: NetworkTemplate,
    pub ancilla_in: FockState,
    pub success_pattern: FockState,
    pub target: Vec<C64>,
    /// Earlier branch the signal went through before this network.
    pub prior: Option<ConditionalMap>,
    pub warm_starts: Vec<Vec<f64>>,
}

impl OptimizationProblem {
    pub fn gate(template: NetworkTemplate, ancilla_in: FockState, success_pattern: FockState, target: Vec<C64>) -> Self {
        Self { template, ancilla_in, success_pattern, target, prior: None, warm_starts: Vec::new() }
    }

    pub fn correction(
        prior: ConditionalMap,
        template: NetworkTemplate,
        ancilla_in: FockState,
        success_pattern: FockState,
        target: Vec<C64>,
    ) -> Self {
        Self { template, ancilla_in, success_pattern, target, prior: Some(prior), warm_starts: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        validate_target(&self.target)?;
        if self.ancilla_in.modes() + 1 != self.template.num_modes
            || self.success_pattern.modes() != self.ancilla_in.modes()
        {
            return Err(Error::ModeCountMismatch {
                expected: self.template.num_modes - 1,
                found: self.success_pattern.modes(),
            });
        }
        if let Some(prior) = &self.prior {
            if prior.n_max() + 1 < self.target.len() {
                return Err(Error::InvalidTarget("prior map shorter than target".into()));
            }
        }
        Ok(())
    }

    /// The (composed) branch map for the given angles, restricted to the
    /// target's input range.
    pub fn branch(&self, angles: &[f64]) -> Result<ConditionalMap> {
        let network = self.template.instantiate(angles)?;
        stage_branch(
            network.compose().matrix(),
            &self.ancilla_in,
            &self.success_pattern,
            self.prior.as_ref(),
            self.target.len() - 1,
        )
    }

    /// Worst-input branch probability and proportionality residual.
    pub fn evaluate(&self, angles: &[f64]) -> Result<(f64, f64)> {
        let map = self.branch(angles)?;
        Ok((map.worst_case_probability(), proportionality_residual(map.amplitudes(), &self.target)?))
    }

    fn smooth(&self, angles: &[f64]) -> Evaluation {
        match self.branch(angles) {
            Ok(map) => Evaluation {
                objective: projected_probability(map.amplitudes(), &self.target),
                residual: proportionality_residual(map.amplitudes(), &self.target).unwrap_or(1.0),
            },
            Err(_) => Evaluation { objective: 0.0, residual: 1.0 },
        }
    }

    fn exact(&self, angles: &[f64]) -> Evaluation {
        match self.evaluate(angles) {
            Ok((objective, residual)) => Evaluation { objective, residual },
            Err(_) => Evaluation { objective: 0.0, residual: 1.0 },
        }
    }
}

/// Branch of one stage for signal inputs `0..=n_max`, composed after
/// `prior` when given.
pub(crate) fn stage_branch(
    lambda: &ComplexMatrix,
    ancilla_in: &FockState,
    pattern: &FockState,
    prior: Option<&ConditionalMap>,
    n_max: usize,
) -> Result<ConditionalMap> {
    match prior {
        None => conditional_map_for_unitary(lambda, ancilla_in, pattern, n_max),
        Some(prior) => {
            let prior = prior.truncated(n_max);
            let stage_n_max = (n_max as i64 + prior.delta()).max(0) as usize;
            prior.then(&conditional_map_for_unitary(lambda, ancilla_in, pattern, stage_n_max)?)
        }
    }
}

/// Maximizes the worst-input probability of the problem's branch subject
/// to proportionality with the target.
pub fn optimize_single(problem: &OptimizationProblem, config: &OptimizerConfig) -> Result<OptimizationResult> {
    problem.validate()?;
    multistart(
        problem.template.num_angles(),
        config,
        &problem.warm_starts,
        |x| problem.smooth(x),
        |x| problem.exact(x),
    )
}

/// Detection patterns that return the signal to its original photon
/// number after a syndrome with shift `syndrome_delta`.
pub fn correction_patterns(ancilla_in: &FockState, syndrome_delta: i64) -> Vec<FockState> {
    let total = ancilla_in.total_photons() as i64 + syndrome_delta;
    if total < 0 {
        return Vec::new();
    }
    let total = total as usize;
    FockState::enumerate(ancilla_in.modes(), total)
        .into_iter()
        .filter(|p| p.total_photons() == total)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternAttempt {
    pub pattern: FockState,
    pub objective: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectionResult {
    pub pattern: FockState,
    pub result: OptimizationResult,
    pub attempts: Vec<PatternAttempt>,
}

/// Optimizes a correction network applied after `syndrome`, trying every
/// candidate detection pattern and keeping the best.
///
/// The objective is the worst-input probability of the composed branch,
/// i.e. the probability the correction adds to the overall gate.
pub fn optimize_correction(
    syndrome: &ConditionalMap,
    template: &NetworkTemplate,
    ancilla_in: &FockState,
    candidate_patterns: &[FockState],
    target: &[C64],
    config: &OptimizerConfig,
    warm_starts: &[Vec<f64>],
) -> Result<CorrectionResult> {
    validate_target(target)?;
    let syndrome = syndrome.truncated(target.len() - 1);
    if syndrome.amplitudes().iter().any(|a| a.norm() < ZERO_AMPLITUDE) {
        return Err(Error::Infeasible("syndrome has annihilated an input amplitude".into()));
    }
    let mut attempts = Vec::with_capacity(candidate_patterns.len());
    let mut best: Option<(FockState, OptimizationResult)> = None;
    for pattern in candidate_patterns {
        let mut problem = OptimizationProblem::correction(
            syndrome.clone(),
            template.clone(),
            ancilla_in.clone(),
            pattern.clone(),
            target.to_vec(),
        );
        problem.warm_starts = warm_starts.to_vec();
        match optimize_single(&problem, config) {
            Ok(res) => {
                attempts.push(PatternAttempt { pattern: pattern.clone(), objective: Some(res.objective_value) });
                let better = best
                    .as_ref()
                    .is_none_or(|(_, b)| res.objective_value > b.objective_value + PATTERN_TIE_TOL);
                if better {
                    best = Some((pattern.clone(), res));
                }
            }
            Err(Error::Infeasible(_)) => attempts.push(PatternAttempt { pattern: pattern.clone(), objective: None }),
            Err(e) => return Err(e),
        }
    }
    let (pattern, result) = best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no feasible correction among {} candidate pattern(s)",
            candidate_patterns.len()
        ))
    })?;
    Ok(CorrectionResult { pattern, result, attempts })
}
