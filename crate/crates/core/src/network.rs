//! Beam-splitter networks and their mode unitaries.
//!
//! Each splitter is the real rotation `[[cos θ, sin θ], [−sin θ, cos θ]]`
//! acting on the annihilation operators of its two modes. Elements are
//! listed in the order light meets them; the composed unitary is
//! `B_k ⋯ B_2 B_1`.
//!
//! Mode 0 is the signal mode in every gate built here. The canonical
//! sign-shift gate uses splitters on (1,2), (0,1), (1,2) with angles
//! `θ1, θ2, θ1` where `cos²θ1 = 1/(4−2√2)` (so `θ1 = π/8`) and
//! `cos θ2 = 1−√2`, the negative root of `cos²θ2 = 3−2√2`. The negative
//! root is what produces the sign flip on the two-photon component.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::C64;
use crate::permanent::ComplexMatrix;

const TEXT_HEADER: &str = "lofeed-network v1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitter {
    pub mode_a: usize,
    pub mode_b: usize,
    /// Radians in `[0, 2π)`.
    pub theta: f64,
}

impl BeamSplitter {
    pub fn new(mode_a: usize, mode_b: usize, theta: f64) -> Self {
        Self { mode_a, mode_b, theta: theta.rem_euclid(TAU) }
    }
}

/// 2×2 splitter block `[[cos θ, sin θ], [−sin θ, cos θ]]`.
pub fn bs_unitary(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, s], &[-s, c]]).expect("2x2 is square")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    num_modes: usize,
    elements: Vec<BeamSplitter>,
}

impl NetworkSpec {
    pub fn new(num_modes: usize) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::InvalidNetwork("network needs at least one mode".into()));
        }
        Ok(Self { num_modes, elements: Vec::new() })
    }

    pub fn with_splitter(mut self, mode_a: usize, mode_b: usize, theta: f64) -> Result<Self> {
        if mode_a == mode_b {
            return Err(Error::InvalidNetwork(format!("splitter couples mode {mode_a} to itself")));
        }
        if mode_a >= self.num_modes || mode_b >= self.num_modes {
            return Err(Error::InvalidNetwork(format!(
                "splitter ({mode_a},{mode_b}) out of range for {} modes",
                self.num_modes
            )));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidNetwork(format!("non-finite angle {theta}")));
        }
        self.elements.push(BeamSplitter::new(mode_a, mode_b, theta));
        Ok(self)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn elements(&self) -> &[BeamSplitter] {
        &self.elements
    }

    pub fn angles(&self) -> Vec<f64> {
        self.elements.iter().map(|e| e.theta).collect()
    }

    /// Mode unitary `B_k ⋯ B_1` with each block embedded in `num_modes`.
    pub fn compose(&self) -> ModeUnitary {
        let mut u = ComplexMatrix::identity(self.num_modes);
        for bs in &self.elements {
            let (s, c) = bs.theta.sin_cos();
            let (a, b) = (bs.mode_a, bs.mode_b);
            // Left-multiply by the embedded rotation: only rows a and b change.
            for j in 0..self.num_modes {
                let (ua, ub) = (u[(a, j)], u[(b, j)]);
                u[(a, j)] = ua * c + ub * s;
                u[(b, j)] = ub * c - ua * s;
            }
        }
        ModeUnitary(u)
    }

    /// The inverse network: elements reversed with negated angles.
    pub fn inverse(&self) -> Self {
        Self {
            num_modes: self.num_modes,
            elements: self
                .elements
                .iter()
                .rev()
                .map(|e| BeamSplitter::new(e.mode_a, e.mode_b, -e.theta))
                .collect(),
        }
    }

    /// Line-oriented text form: a version header, `modes <d>`, then one
    /// `bs <a> <b> <theta>` line per element with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{TEXT_HEADER}\nmodes {}\n", self.num_modes);
        for e in &self.elements {
            let _ = writeln!(out, "bs {} {} {:.16e}", e.mode_a, e.mode_b, e.theta);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, message: &str| Error::Parse { line, message: message.to_string() };

        match lines.next() {
            Some((_, TEXT_HEADER)) => {}
            Some((n, _)) => return Err(err(n, "missing 'lofeed-network v1' header")),
            None => return Err(err(0, "empty network file")),
        }
        let (n, modes_line) = lines.next().ok_or_else(|| err(0, "missing 'modes' line"))?;
        let modes = match modes_line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["modes", d] => d.parse::<usize>().map_err(|_| err(n, "bad mode count"))?,
            _ => return Err(err(n, "expected 'modes <d>'")),
        };
        let mut spec = Self::new(modes).map_err(|e| err(n, &e.to_string()))?;
        for (n, line) in lines {
            match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["bs", a, b, theta] => {
                    let a = a.parse().map_err(|_| err(n, "bad mode index"))?;
                    let b = b.parse().map_err(|_| err(n, "bad mode index"))?;
                    let theta = theta.parse().map_err(|_| err(n, "bad angle"))?;
                    spec = spec.with_splitter(a, b, theta).map_err(|e| err(n, &e.to_string()))?;
                }
                _ => return Err(err(n, "expected 'bs <a> <b> <theta>'")),
            }
        }
        Ok(spec)
    }
}

/// Unitary acting on the mode annihilation operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary(ComplexMatrix);

impl ModeUnitary {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn unitarity_error(&self) -> f64 {
        self.0.unitarity_error()
    }
}

/// Angle-free wiring of a network family; angles are supplied per instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkTemplate {
    pub num_modes: usize,
    pub wiring: Vec<(usize, usize)>,
}

impl NetworkTemplate {
    pub fn new(num_modes: usize, wiring: Vec<(usize, usize)>) -> Result<Self> {
        let template = Self { num_modes, wiring };
        template.instantiate(&vec![0.0; template.wiring.len()])?;
        Ok(template)
    }

    /// Three splitters A on (1,2), B on (0,1), C on (1,2).
    pub fn su3() -> Self {
        Self { num_modes: 3, wiring: vec![(1, 2), (0, 1), (1, 2)] }
    }

    /// One splitter between the signal and a single ancilla mode.
    pub fn single_splitter() -> Self {
        Self { num_modes: 2, wiring: vec![(0, 1)] }
    }

    pub fn num_angles(&self) -> usize {
        self.wiring.len()
    }

    pub fn instantiate(&self, angles: &[f64]) -> Result<NetworkSpec> {
        if angles.len() != self.wiring.len() {
            return Err(Error::InvalidNetwork(format!(
                "template takes {} angles, got {}",
                self.wiring.len(),
                angles.len()
            )));
        }
        self.wiring
            .iter()
            .zip(angles)
            .try_fold(NetworkSpec::new(self.num_modes)?, |spec, (&(a, b), &t)| spec.with_splitter(a, b, t))
    }
}

/// `θ1` of the canonical gate, from `cos²θ1 = 1/(4−2√2)`.
pub fn ns_theta1() -> f64 {
    (1.0 / (4.0 - 2.0 * 2f64.sqrt())).sqrt().acos()
}

/// `θ2` of the canonical gate: the root of `cos²θ2 = 3−2√2` with negative cosine.
pub fn ns_theta2() -> f64 {
    PI - (3.0 - 2.0 * 2f64.sqrt()).sqrt().acos()
}

/// The canonical three-mode sign-shift network.
pub fn ns_canonical() -> NetworkSpec {
    let (t1, t2) = (ns_theta1(), ns_theta2());
    NetworkTemplate::su3()
        .instantiate(&[t1, t2, t1])
        .expect("canonical layout is valid")
}

/// Three-splitter SU(3)-style network with free angles for A, B and C.
pub fn su3_template(theta_a: f64, theta_b: f64, theta_c: f64) -> NetworkSpec {
    NetworkTemplate::su3()
        .instantiate(&[theta_a, theta_b, theta_c])
        .expect("su3 layout is valid")
}

/// True when every entry of `m` is real to within `tol`.
pub fn is_real(m: &ComplexMatrix, tol: f64) -> bool {
    m.rows().flatten().all(|z: &C64| z.im.abs() <= tol)
}
