use std::f64::consts::PI;

use serde::Serialize;

use super::{proportionality_residual, validate_target};
use crate::analysis::conditional_map;
use crate::error::{Error, Result};
use crate::fock::{FockState, C64};
use crate::network::NetworkTemplate;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffRow {
    pub angle: f64,
    pub success: Vec<f64>,
    pub syndrome: Vec<f64>,
    /// Probability of every other detection pattern, per input.
    pub rest: Vec<f64>,
    pub mean_success: f64,
    pub mean_syndrome: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffScan {
    pub free_index: usize,
    pub rows: Vec<TradeoffRow>,
    /// Grid angle maximizing the mean success probability.
    pub argmax_success: f64,
    /// Grid angle minimizing the mean syndrome probability.
    pub argmin_syndrome: f64,
    pub per_input_argmax_success: Vec<f64>,
    pub per_input_argmin_syndrome: Vec<f64>,
}

impl TradeoffScan {
    /// Distance between the success maximum and the syndrome minimum.
    pub fn offset(&self) -> f64 {
        (self.argmax_success - self.argmin_syndrome).abs()
    }
}

fn arg_best(rows: &[TradeoffRow], key: impl Fn(&TradeoffRow) -> f64, maximize: bool) -> f64 {
    let mut best = &rows[0];
    for row in rows {
        let (k, b) = (key(row), key(best));
        if (maximize && k > b) || (!maximize && k < b) {
            best = row;
        }
    }
    best.angle
}

/// Scans one angle of a constrained solution over `[0, π)` on a uniform
/// grid, holding the others at `anchor`, and records the success and
/// syndrome probabilities per Fock input.
///
/// A shift by `π` only flips the sign of a splitter, so the half period
/// covers every distinct probability.
#[allow(clippy::too_many_arguments)]
pub fn tradeoff_scan(
    template: &NetworkTemplate,
    anchor: &[f64],
    free_index: usize,
    ancilla: &FockState,
    success_pattern: &FockState,
    syndrome_pattern: &FockState,
    target: &[C64],
    grid_step: f64,
) -> Result<TradeoffScan> {
    validate_target(target)?;
    if free_index >= template.num_angles() {
        return Err(Error::Config(format!("free index {free_index} out of range")));
    }
    if !(grid_step > 0.0 && grid_step < PI) {
        return Err(Error::Config(format!("grid step {grid_step} must lie in (0, π)")));
    }
    let n_max = target.len() - 1;
    let anchor_map = conditional_map(&template.instantiate(anchor)?, ancilla, success_pattern, n_max)?;
    let residual = proportionality_residual(anchor_map.amplitudes(), target)?;
    if residual > 1e-8 {
        return Err(Error::Infeasible(format!("anchor is not a constrained solution (residual {residual:.3e})")));
    }

    let others: Vec<FockState> = FockState::enumerate(ancilla.modes(), n_max + ancilla.total_photons())
        .into_iter()
        .filter(|p| p != success_pattern && p != syndrome_pattern)
        .collect();
    let steps = (PI / grid_step).ceil() as usize;
    let rows = (0..steps)
        .map(|k| {
            let angle = k as f64 * grid_step;
            let mut angles = anchor.to_vec();
            angles[free_index] = angle;
            let net = template.instantiate(&angles)?;
            let success = conditional_map(&net, ancilla, success_pattern, n_max)?.populations();
            let syndrome = conditional_map(&net, ancilla, syndrome_pattern, n_max)?.populations();
            let mut rest = vec![0.0; n_max + 1];
            for pattern in &others {
                for (r, p) in rest.iter_mut().zip(conditional_map(&net, ancilla, pattern, n_max)?.populations()) {
                    *r += p;
                }
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            Ok(TradeoffRow {
                angle,
                mean_success: mean(&success),
                mean_syndrome: mean(&syndrome),
                success,
                syndrome,
                rest,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.mean_success), hi.max(r.mean_success)));
    if hi - lo < 1e-12 {
        return Err(Error::Infeasible(format!("angle {free_index} does not affect the success probability")));
    }

    Ok(TradeoffScan {
        free_index,
        argmax_success: arg_best(&rows, |r| r.mean_success, true),
        argmin_syndrome: arg_best(&rows, |r| r.mean_syndrome, false),
        per_input_argmax_success: (0..=n_max).map(|n| arg_best(&rows, |r| r.success[n], true)).collect(),
        per_input_argmin_syndrome: (0..=n_max).map(|n| arg_best(&rows, |r| r.syndrome[n], false)).collect(),
        rows,
    })
}
