//! Brute-force Fock-space evolution, independent of the permanent route.
//!
//! Each splitter is applied as its exact two-mode operator: the creation
//! operators of its modes are substituted by their images and the powers
//! are expanded binomially. No composed mode unitary and no permanent is
//! involved, so agreement with [`crate::permanent::matrix_element`] is a
//! genuine cross-check.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{FockState, C64};
use crate::network::{BeamSplitter, NetworkSpec};

type Ket = BTreeMap<Vec<usize>, C64>;

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
}

fn apply_splitter(state: &Ket, bs: &BeamSplitter) -> Ket {
    let (s, c) = bs.theta.sin_cos();
    let (a, b) = (bs.mode_a, bs.mode_b);
    // Û a†_a Û† = c a†_a − s a†_b,  Û a†_b Û† = s a†_a + c a†_b
    let (aa, ba, ab, bb) = (c, -s, s, c);
    let mut out = Ket::new();
    for (occ, &amp) in state {
        let (p, q) = (occ[a], occ[b]);
        let norm_in = (ln_factorial(p) + ln_factorial(q)) * 0.5;
        for r in 0..=p {
            let left = binomial(p, r) * aa.powi(r as i32) * ba.powi((p - r) as i32);
            if left == 0.0 {
                continue;
            }
            for t in 0..=q {
                let right = binomial(q, t) * ab.powi(t as i32) * bb.powi((q - t) as i32);
                if right == 0.0 {
                    continue;
                }
                let na = r + t;
                let nb = p + q - na;
                let scale = ((ln_factorial(na) + ln_factorial(nb)) * 0.5 - norm_in).exp();
                let mut key = occ.clone();
                key[a] = na;
                key[b] = nb;
                *out.entry(key).or_default() += amp * (left * right * scale);
            }
        }
    }
    out
}

/// Evolves `in_occ` through the network on the Fock space truncated at
/// `cutoff` total photons and returns the full output ket.
pub fn evolve(network: &NetworkSpec, in_occ: &FockState, cutoff: usize) -> Result<BTreeMap<FockState, C64>> {
    if in_occ.modes() != network.num_modes() {
        return Err(Error::ModeCountMismatch { expected: network.num_modes(), found: in_occ.modes() });
    }
    if in_occ.total_photons() > cutoff {
        return Err(Error::CutoffExceeded { photons: in_occ.total_photons(), cutoff });
    }
    let mut state = Ket::new();
    state.insert(in_occ.occupations().to_vec(), C64::new(1.0, 0.0));
    for bs in network.elements() {
        state = apply_splitter(&state, bs);
        state.retain(|occ, _| occ.iter().sum::<usize>() <= cutoff);
        let leak = (state.values().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs();
        if leak > 1e-12 {
            return Err(Error::NormLeakage { leak, cutoff });
        }
    }
    Ok(state.into_iter().map(|(k, v)| (FockState::new(k), v)).collect())
}

/// `⟨out|Û|in⟩` by explicit evolution of `in_occ`.
pub fn brute_force_element(
    network: &NetworkSpec,
    out_occ: &FockState,
    in_occ: &FockState,
    cutoff: usize,
) -> Result<C64> {
    if out_occ.modes() != network.num_modes() {
        return Err(Error::ModeCountMismatch { expected: network.num_modes(), found: out_occ.modes() });
    }
    if out_occ.total_photons() > cutoff {
        return Err(Error::CutoffExceeded { photons: out_occ.total_photons(), cutoff });
    }
    let state = evolve(network, in_occ, cutoff)?;
    Ok(state.get(out_occ).copied().unwrap_or_default())
}
