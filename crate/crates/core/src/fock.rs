//! Fock states, truncated pure states and post-selected signal maps.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default signal cutoff: inputs carry at most two photons and the
/// photon-adding syndrome promotes them to three.
pub const DEFAULT_CUTOFF: usize = 3;

/// Default relative tolerance for amplitude comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Occupation-number vector over optical modes.
///
/// Ordering is lexicographic on the occupation vector, which gives
/// deterministic iteration order in maps and reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockState(Vec<usize>);

impl FockState {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn total_photons(&self) -> usize {
        self.0.iter().sum()
    }

    /// Prepends a signal occupation to an ancilla pattern.
    pub fn with_signal(&self, signal: usize) -> Self {
        let mut occ = Vec::with_capacity(self.0.len() + 1);
        occ.push(signal);
        occ.extend_from_slice(&self.0);
        Self(occ)
    }

    /// Concatenates two patterns, used for multi-stage detection records.
    pub fn concat(&self, other: &FockState) -> Self {
        let mut occ = self.0.clone();
        occ.extend_from_slice(&other.0);
        Self(occ)
    }

    /// Every occupation vector over `modes` modes with total photon number
    /// at most `max_total`, in lexicographic order.
    pub fn enumerate(modes: usize, max_total: usize) -> Vec<FockState> {
        fn rec(modes: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<FockState>) {
            if cur.len() == modes {
                out.push(FockState(cur.clone()));
                return;
            }
            for k in 0..=left {
                cur.push(k);
                rec(modes, left - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(modes, max_total, &mut Vec::with_capacity(modes), &mut out);
        out
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

impl std::str::FromStr for FockState {
    type Err = Error;

    /// Parses `1,0`, `10`, `|1,0>` or `(1,0)`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_matches(|c| matches!(c, '|' | '>' | '(' | ')' | '⟩'));
        let bad = || Error::Config(format!("cannot parse Fock pattern '{s}'"));
        if trimmed.is_empty() {
            return Err(bad());
        }
        let occ = if trimmed.contains(',') {
            trimmed
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        } else {
            trimmed
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self(occ))
    }
}

impl From<&[usize]> for FockState {
    fn from(occ: &[usize]) -> Self {
        Self(occ.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for FockState {
    fn from(occ: [usize; N]) -> Self {
        Self(occ.to_vec())
    }
}

/// Finite superposition of Fock states on a truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    modes: usize,
    cutoff: usize,
    amplitudes: BTreeMap<FockState, C64>,
}

impl PureState {
    pub fn new(modes: usize, cutoff: usize) -> Self {
        Self { modes, cutoff, amplitudes: BTreeMap::new() }
    }

    /// Single-mode state `Σ c_n |n⟩`.
    pub fn single_mode(coefficients: &[C64]) -> Self {
        let cutoff = DEFAULT_CUTOFF.max(coefficients.len().saturating_sub(1));
        let mut state = Self::new(1, cutoff);
        for (n, &c) in coefficients.iter().enumerate() {
            state.amplitudes.insert(FockState(vec![n]), c);
        }
        state
    }

    /// Adds (or overwrites) the amplitude on `basis`.
    pub fn with(mut self, basis: FockState, amplitude: C64) -> Result<Self> {
        if basis.modes() != self.modes {
            return Err(Error::ModeCountMismatch { expected: self.modes, found: basis.modes() });
        }
        if basis.total_photons() > self.cutoff {
            return Err(Error::CutoffExceeded { photons: basis.total_photons(), cutoff: self.cutoff });
        }
        self.amplitudes.insert(basis, amplitude);
        Ok(self)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitude(&self, basis: &FockState) -> C64 {
        self.amplitudes.get(basis).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &C64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// Returns the normalized state, or `None` for the zero state.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return None;
        }
        let mut out = self.clone();
        out.amplitudes.values_mut().for_each(|a| *a /= norm);
        Some(out)
    }

    /// Dense amplitudes `c_0..=c_cutoff` of a single-mode state.
    pub fn signal_amplitudes(&self) -> Result<Vec<C64>> {
        if self.modes != 1 {
            return Err(Error::ModeCountMismatch { expected: 1, found: self.modes });
        }
        let mut out = vec![C64::default(); self.cutoff + 1];
        for (basis, &a) in &self.amplitudes {
            out[basis.0[0]] = a;
        }
        Ok(out)
    }
}

/// Post-selected map `|n⟩ ↦ a_n |n + delta⟩` on the signal mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalMap {
    delta: i64,
    amplitudes: Vec<C64>,
    pattern: FockState,
}

impl ConditionalMap {
    pub fn new(delta: i64, amplitudes: Vec<C64>, pattern: FockState) -> Result<Self> {
        for (n, a) in amplitudes.iter().enumerate() {
            if (n as i64) + delta < 0 && a.norm() > 1e-12 {
                return Err(Error::InvalidMap(format!(
                    "amplitude a_{n} must vanish for shift {delta}"
                )));
            }
            if a.norm() > 1.0 + DEFAULT_TOL {
                return Err(Error::InvalidMap(format!("|a_{n}| = {} exceeds 1", a.norm())));
            }
        }
        Ok(Self { delta, amplitudes, pattern })
    }

    /// Annihilating map of the given range.
    pub fn zero(n_max: usize, delta: i64, pattern: FockState) -> Self {
        Self { delta, amplitudes: vec![C64::default(); n_max + 1], pattern }
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes.get(n).copied().unwrap_or_default()
    }

    pub fn pattern(&self) -> &FockState {
        &self.pattern
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len().saturating_sub(1)
    }

    /// `p_n = |a_n|²`, the branch probability for input `|n⟩`.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Restricts the map to inputs `0..=n_max`.
    pub fn truncated(&self, n_max: usize) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(n_max + 1, C64::default());
        Self { delta: self.delta, amplitudes, pattern: self.pattern.clone() }
    }

    /// Removes the unobservable global phase: the first amplitude with
    /// non-negligible magnitude becomes real and positive.
    pub fn canonical_phase(&self) -> Self {
        let mut out = self.clone();
        if let Some(lead) = self.amplitudes.iter().find(|a| a.norm() > 1e-14) {
            let phase = lead.conj() / lead.norm();
            out.amplitudes.iter_mut().for_each(|a| *a *= phase);
        }
        out
    }

    /// Sequential composition: `self` first, then `next` on the shifted signal.
    ///
    /// The composed detection pattern is the concatenation of both patterns.
    pub fn then(&self, next: &ConditionalMap) -> Result<Self> {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, &a)| {
                let mid = n as i64 + self.delta;
                if a == C64::default() || mid < 0 {
                    return Ok(C64::default());
                }
                let mid = mid as usize;
                if mid > next.n_max() {
                    return Err(Error::SignalOutOfRange { photons: mid, n_max: next.n_max() });
                }
                Ok(a * next.amplitudes[mid])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            delta: self.delta + next.delta,
            amplitudes,
            pattern: self.pattern.concat(&next.pattern),
        })
    }

    /// Applies the map to a single-mode signal; the output is unnormalized
    /// and its squared norm is the branch probability.
    pub fn apply(&self, signal: &PureState) -> Result<PureState> {
        if signal.modes() != 1 {
            return Err(Error::ModeCountMismatch { expected: 1, found: signal.modes() });
        }
        let out_cutoff = (self.n_max() as i64 + self.delta).max(0) as usize;
        let mut out = PureState::new(1, out_cutoff);
        for (basis, &c) in signal.iter() {
            let n = basis.occupations()[0];
            if n > self.n_max() {
                return Err(Error::SignalOutOfRange { photons: n, n_max: self.n_max() });
            }
            let target = n as i64 + self.delta;
            if target < 0 {
                continue;
            }
            out.amplitudes.insert(FockState(vec![target as usize]), self.amplitudes[n] * c);
        }
        Ok(out)
    }

    /// `Σ_n |a_n c_n|²` for the given signal.
    pub fn branch_probability(&self, signal: &PureState) -> Result<f64> {
        Ok(self.apply(signal)?.norm_sqr())
    }

    /// Worst-case branch probability over Fock inputs `0..=n_max`.
    pub fn worst_case_probability(&self) -> f64 {
        self.populations().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Branch probability averaged uniformly over Fock inputs.
    pub fn average_probability(&self) -> f64 {
        let p = self.populations();
        p.iter().sum::<f64>() / p.len() as f64
    }
}

/// Approximate comparison of complex vectors with relative tolerance.
pub fn approx_eq_slice(a: &[C64], b: &[C64], rel_tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= rel_tol * x.norm().max(y.norm()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn total_photons_sums_occupations() {
        assert_eq!(FockState::from([0, 1, 0]).total_photons(), 1);
        assert_eq!(FockState::from([2, 1, 0]).total_photons(), 3);
        assert_eq!(FockState::from([0, 0, 0]).total_photons(), 0);
    }

    #[test]
    fn fock_equality_needs_matching_modes() {
        assert_ne!(FockState::from([1, 0]), FockState::from([1, 0, 0]));
        assert_eq!(FockState::from([1, 0]), "1,0".parse().unwrap());
        assert_eq!(FockState::from([1, 1]), "|11>".parse().unwrap());
        assert!("a,b".parse::<FockState>().is_err());
    }

    #[test]
    fn enumerate_is_lexicographic_and_complete() {
        let all = FockState::enumerate(2, 3);
        assert_eq!(all.len(), 10);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert!(all.iter().all(|s| s.total_photons() <= 3));
    }

    #[test]
    fn ns_map_scales_signal_by_half() {
        let map = ConditionalMap::new(0, vec![c(0.5), c(0.5), c(-0.5)], FockState::from([1, 0])).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let signal = PureState::single_mode(&[c(s), c(s), c(s)]);
        let out = map.apply(&signal).unwrap().signal_amplitudes().unwrap();
        let k = 1.0 / (2.0 * 3f64.sqrt());
        assert!(approx_eq_slice(&out[..3], &[c(k), c(k), c(-k)], 1e-12));
        assert!((map.branch_probability(&signal).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_map_annihilates() {
        let map = ConditionalMap::zero(2, 0, FockState::from([0, 0]));
        let signal = PureState::single_mode(&[c(0.6), c(0.0), c(0.8)]);
        assert_eq!(map.branch_probability(&signal).unwrap(), 0.0);
        assert_eq!(map.apply(&signal).unwrap().norm_sqr(), 0.0);
    }

    #[test]
    fn photon_adding_map_on_two_photons() {
        let r2 = 2f64.sqrt();
        let a2 = 2f64.powf(-0.25) * (51.0 - 36.0 * r2).sqrt();
        let map = ConditionalMap::new(
            1,
            vec![c(2f64.powf(-0.25)), c(2f64.powf(0.25) * (1.0 - r2)), c(a2)],
            FockState::from([0, 0]),
        )
        .unwrap();
        let signal = PureState::single_mode(&[c(0.0), c(0.0), c(1.0)]);
        let out = map.apply(&signal).unwrap();
        assert!((out.amplitude(&FockState::from([3])) - c(a2)).norm() < 1e-15);
        assert!((out.norm_sqr() - 0.0625).abs() < 1e-4);
    }

    #[test]
    fn out_of_range_and_mode_mismatch_are_errors() {
        let map = ConditionalMap::zero(2, 0, FockState::from([1, 0]));
        let too_big = PureState::single_mode(&[c(0.0), c(0.0), c(0.0), c(1.0)]);
        assert!(matches!(map.apply(&too_big), Err(Error::SignalOutOfRange { .. })));
        let two_mode = PureState::new(2, 3).with(FockState::from([1, 0]), c(1.0)).unwrap();
        assert!(matches!(map.apply(&two_mode), Err(Error::ModeCountMismatch { .. })));
    }

    #[test]
    fn negative_shift_requires_vanishing_low_amplitudes() {
        assert!(ConditionalMap::new(-1, vec![c(0.1), c(0.2)], FockState::from([2, 0])).is_err());
        assert!(ConditionalMap::new(-1, vec![c(0.0), c(0.2)], FockState::from([2, 0])).is_ok());
        assert!(ConditionalMap::new(0, vec![c(1.5)], FockState::from([0, 0])).is_err());
    }

    #[test]
    fn canonical_phase_makes_leading_amplitude_positive() {
        let map = ConditionalMap::new(0, vec![c(-0.5), C64::new(0.0, 0.5)], FockState::from([1])).unwrap();
        let canon = map.canonical_phase();
        assert!(approx_eq_slice(canon.amplitudes(), &[c(0.5), C64::new(0.0, -0.5)], 1e-15));
    }

    #[test]
    fn composition_multiplies_along_the_shift() {
        let first = ConditionalMap::new(1, vec![c(0.8), c(0.6)], FockState::from([0])).unwrap();
        let second = ConditionalMap::new(-1, vec![c(0.0), c(0.5), c(-0.25)], FockState::from([2])).unwrap();
        let both = first.then(&second).unwrap();
        assert_eq!(both.delta(), 0);
        assert!(approx_eq_slice(both.amplitudes(), &[c(0.4), c(-0.15)], 1e-15));
        assert_eq!(both.pattern(), &FockState::from([0, 2]));
    }

    #[test]
    fn signal_amplitudes_requires_single_mode() {
        let s = PureState::new(2, 2);
        assert!(s.signal_amplitudes().is_err());
        assert!(PureState::new(1, 2).with(FockState::from([3]), c(1.0)).is_err());
    }
}
