//! Post-selection, outcome classification and failure statistics.
//!
//! A detection pattern on the ancilla modes is classified by the photon
//! shift it induces on the signal:
//!
//! * the designated pattern is [`Classification::Success`];
//! * more photons detected than the ancilla supplied (`delta < 0`) means
//!   photons were taken from the signal, which is irrecoverable;
//! * `delta == 0` is a number-preserving syndrome;
//! * `delta > 0` leaves extra photons in the signal mode.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{ConditionalMap, FockState, C64};
use crate::network::NetworkSpec;
use crate::permanent::{matrix_element, ComplexMatrix};

/// Amplitudes below this magnitude count as annihilated.
pub const ZERO_AMPLITUDE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Success,
    CorrectablePreserving,
    CorrectableAdding,
    Irrecoverable,
}

impl Classification {
    pub fn is_correctable(self) -> bool {
        matches!(self, Self::CorrectablePreserving | Self::CorrectableAdding)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Success => "SUCCESS",
            Self::CorrectablePreserving => "CORRECTABLE_PRESERVING",
            Self::CorrectableAdding => "CORRECTABLE_ADDING",
            Self::Irrecoverable => "IRRECOVERABLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    pub pattern: FockState,
    pub map: ConditionalMap,
    pub classification: Classification,
    /// `p_n = |a_n|²` for signal input `|n⟩`.
    pub per_fock_probability: Vec<f64>,
    /// A correctable branch that zeroes some amplitude cannot be undone.
    pub information_destroying: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureStats {
    pub per_input_failure: Vec<f64>,
    pub average_failure: f64,
    pub max_failure: f64,
    pub argmax_input: usize,
}

fn check_ancilla(modes: usize, state: &FockState) -> Result<()> {
    if state.modes() + 1 != modes {
        return Err(Error::ModeCountMismatch { expected: modes - 1, found: state.modes() });
    }
    Ok(())
}

/// Conditional map for a precomputed mode unitary (signal on mode 0).
pub fn conditional_map_for_unitary(
    lambda: &ComplexMatrix,
    ancilla_in: &FockState,
    pattern: &FockState,
    n_max: usize,
) -> Result<ConditionalMap> {
    check_ancilla(lambda.dim(), ancilla_in)?;
    check_ancilla(lambda.dim(), pattern)?;
    let delta = ancilla_in.total_photons() as i64 - pattern.total_photons() as i64;
    let amplitudes = (0..=n_max)
        .map(|n| {
            let out = n as i64 + delta;
            if out < 0 {
                return Ok(C64::default());
            }
            matrix_element(lambda, &pattern.with_signal(out as usize), &ancilla_in.with_signal(n))
        })
        .collect::<Result<Vec<_>>>()?;
    ConditionalMap::new(delta, amplitudes, pattern.clone())
}

/// The map `|n⟩ ↦ a_n |n+delta⟩` induced by preparing `ancilla_in` and
/// detecting `pattern`, for signal inputs `n = 0..=n_max`.
pub fn conditional_map(
    network: &NetworkSpec,
    ancilla_in: &FockState,
    pattern: &FockState,
    n_max: usize,
) -> Result<ConditionalMap> {
    conditional_map_for_unitary(network.compose().matrix(), ancilla_in, pattern, n_max)
}

pub fn classify(delta: i64, is_success: bool) -> Classification {
    match delta {
        _ if is_success => Classification::Success,
        d if d < 0 => Classification::Irrecoverable,
        0 => Classification::CorrectablePreserving,
        _ => Classification::CorrectableAdding,
    }
}

/// Every ancilla pattern with at most `n_max + |ancilla_in|` photons,
/// classified and sorted lexicographically by pattern.
pub fn enumerate_outcomes(
    network: &NetworkSpec,
    ancilla_in: &FockState,
    success_pattern: &FockState,
    n_max: usize,
) -> Result<Vec<OutcomeRecord>> {
    check_ancilla(network.num_modes(), ancilla_in)?;
    check_ancilla(network.num_modes(), success_pattern)?;
    let unitary = network.compose();
    let max_total = n_max + ancilla_in.total_photons();
    FockState::enumerate(ancilla_in.modes(), max_total)
        .into_iter()
        .map(|pattern| {
            let map = conditional_map_for_unitary(unitary.matrix(), ancilla_in, &pattern, n_max)?;
            let classification = classify(map.delta(), &pattern == success_pattern);
            let information_destroying = classification.is_correctable()
                && map.amplitudes().iter().any(|a| a.norm() < ZERO_AMPLITUDE);
            Ok(OutcomeRecord {
                per_fock_probability: map.populations(),
                pattern,
                map,
                classification,
                information_destroying,
            })
        })
        .collect()
}

/// Irrecoverable probability per Fock input with its uniform average and
/// worst case.
pub fn failure_stats(records: &[OutcomeRecord]) -> Result<FailureStats> {
    let first = records.first().ok_or(Error::EmptyRecords)?;
    let mut q = vec![0.0; first.per_fock_probability.len()];
    for rec in records.iter().filter(|r| r.classification == Classification::Irrecoverable) {
        for (qn, p) in q.iter_mut().zip(&rec.per_fock_probability) {
            *qn += p;
        }
    }
    let (argmax_input, max_failure) = q
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (n, v)| if v > best.1 { (n, v) } else { best });
    Ok(FailureStats {
        average_failure: q.iter().sum::<f64>() / q.len() as f64,
        max_failure,
        argmax_input,
        per_input_failure: q,
    })
}

/// Best worst-case probability with which any contraction can turn the
/// branch into the target: `min_n |a_n / t_n|²`, or zero if the branch
/// has annihilated some amplitude.
pub fn ideal_recovery_bound(map: &ConditionalMap, target: &[C64]) -> f64 {
    let amps = map.amplitudes();
    if amps.len() != target.len() || amps.iter().any(|a| a.norm() < ZERO_AMPLITUDE) {
        return 0.0;
    }
    amps.iter()
        .zip(target)
        .map(|(a, t)| (a / t).norm_sqr())
        .fold(f64::INFINITY, f64::min)
}

/// Worst-case probability of the success record(s).
pub fn success_probability(records: &[OutcomeRecord]) -> f64 {
    records
        .iter()
        .filter(|r| r.classification == Classification::Success)
        .map(|r| r.map.worst_case_probability())
        .sum()
}

/// Success probability plus the ideal recovery bound of each correctable
/// record whose class is in `classes`.
pub fn partial_ceiling(records: &[OutcomeRecord], target: &[C64], classes: &[Classification]) -> f64 {
    success_probability(records)
        + records
            .iter()
            .filter(|r| r.classification.is_correctable() && classes.contains(&r.classification))
            .map(|r| ideal_recovery_bound(&r.map, target))
            .sum::<f64>()
}

/// Success probability if every correctable syndrome were ideally recovered.
pub fn max_success_ceiling(records: &[OutcomeRecord], target: &[C64]) -> f64 {
    partial_ceiling(
        records,
        target,
        &[Classification::CorrectablePreserving, Classification::CorrectableAdding],
    )
}

/// The sign-shift target `(1, 1, −1)`.
pub fn ns_target() -> Vec<C64> {
    vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]
}
