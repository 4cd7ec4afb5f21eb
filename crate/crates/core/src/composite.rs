//! Composite-pulse phase families and the composite phase gate.
//!
//! A phase gate `diag(e^{iα/2}, e^{-iα/2})` is produced by two copies of
//! the same composite pulse: the first with phases `φ_k`, the second with
//! `ξ_k = φ_k + π + α/2`. Each constituent is a nominal π pulse.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cis, CMatrix};
use crate::two_level::{
    apply_phase, constant_propagator, shaped_propagator, Propagator2, PulseShape, PulseSpec,
    DEFAULT_SUBSTEPS,
};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Broadband in pulse area, `φ_k = k(k-1)π/n`.
    Bb,
    /// Compensates errors in any field parameter.
    Universal,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Bb => "bb",
            Family::Universal => "universal",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bb" | "broadband" => Ok(Family::Bb),
            "universal" | "u" => Ok(Family::Universal),
            other => Err(Error::validation(format!("unknown phase family '{other}'"))),
        }
    }
}

/// `(n, variant, phases)` with phases in units of π as `(numerator, denominator)`.
type UniversalRow = (usize, u32, &'static [(i64, i64)]);

/// Universal phase lists.
const UNIVERSAL_TABLE: &[UniversalRow] = &[
    (3, 1, &[(0, 1), (1, 2), (0, 1)]),
    (5, 1, &[(0, 1), (5, 6), (1, 3), (5, 6), (0, 1)]),
    (5, 2, &[(0, 1), (11, 6), (1, 3), (11, 6), (0, 1)]),
    (
        7,
        1,
        &[(0, 1), (11, 12), (5, 6), (17, 12), (5, 6), (11, 12), (0, 1)],
    ),
    (
        7,
        2,
        &[(0, 1), (23, 12), (5, 6), (5, 12), (5, 6), (23, 12), (0, 1)],
    ),
];

/// An ordered list of composite phases in physical (time) order.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseList {
    family: Family,
    n: usize,
    variant: u32,
    fractions: Vec<Rational64>,
    phases: Vec<f64>,
}

impl PhaseList {
    /// Selects a shipped family. `variant` is ignored for broadband lists.
    pub fn new(family: Family, n: usize, variant: u32) -> Result<Self> {
        match family {
            Family::Bb => bb_phases(n),
            Family::Universal => universal_phases(n, variant),
        }
    }

    fn from_fractions(family: Family, variant: u32, fractions: Vec<Rational64>) -> Self {
        let phases = fractions
            .iter()
            .map(|r| PI * (*r.numer() as f64) / (*r.denom() as f64))
            .collect();
        Self {
            family,
            n: fractions.len(),
            variant,
            fractions,
            phases,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1 for broadband lists.
    pub fn variant(&self) -> u32 {
        self.variant
    }

    /// Phases in radians, reduced to `[0, 2π)`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Phases as exact multiples of π in `[0, 2)`.
    pub fn pi_fractions(&self) -> &[Rational64] {
        &self.fractions
    }

    /// `"0, 2/5, 6/5, 2/5, 0"`.
    pub fn format_pi(&self) -> String {
        self.fractions
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn is_palindromic(&self) -> bool {
        let f = &self.fractions;
        (0..f.len()).all(|k| f[k] == f[f.len() - 1 - k])
    }

    /// Short label such as `bb3` or `universal5.2`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Bb => format!("bb{}", self.n),
            Family::Universal => format!("universal{}.{}", self.n, self.variant),
        }
    }
}

/// Broadband phases `φ_k = k(k-1)π/n mod 2π`, `k = 1..n`, for odd `n`.
pub fn bb_phases(n: usize) -> Result<PhaseList> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::validation(format!(
            "n must be odd and positive, got {n}"
        )));
    }
    let n = n as i64;
    let fractions = (1..=n)
        .map(|k| Rational64::new((k * (k - 1)) % (2 * n), n))
        .collect();
    Ok(PhaseList::from_fractions(Family::Bb, 1, fractions))
}

/// Published universal phase lists: `(3,1)`, `(5,1)`, `(5,2)`, `(7,1)`, `(7,2)`.
pub fn universal_phases(n: usize, variant: u32) -> Result<PhaseList> {
    let (_, _, row) = UNIVERSAL_TABLE
        .iter()
        .find(|(len, var, _)| *len == n && *var == variant)
        .ok_or_else(|| {
            Error::validation(format!(
                "no universal phase list for n = {n}, variant = {variant} \
                 (available: 3/1, 5/1, 5/2, 7/1, 7/2)"
            ))
        })?;
    let fractions = row.iter().map(|&(p, q)| Rational64::new(p, q)).collect();
    Ok(PhaseList::from_fractions(
        Family::Universal,
        variant,
        fractions,
    ))
}

/// Every shipped phase list: broadband n = 1..9 (odd) and all universal rows.
pub fn shipped_families() -> Vec<PhaseList> {
    let mut out: Vec<PhaseList> = (1..=9).step_by(2).map(|n| bb_phases(n).unwrap()).collect();
    out.extend(
        UNIVERSAL_TABLE
            .iter()
            .map(|(n, v, _)| universal_phases(*n, *v).unwrap()),
    );
    out
}

/// The `2n` pulse phases of a composite phase gate, in physical order.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    pub base: PhaseList,
    pub alpha: f64,
    /// `φ₁..φ_n` followed by `ξ₁..ξ_n`.
    pub pulse_phases: Vec<f64>,
}

pub fn gate_sequence(base: &PhaseList, alpha: f64) -> GateSequence {
    let shift = PI + alpha / 2.0;
    let pulse_phases = base
        .phases()
        .iter()
        .copied()
        .chain(base.phases().iter().map(|p| (p + shift).rem_euclid(TWO_PI)))
        .collect();
    GateSequence {
        base: base.clone(),
        alpha,
        pulse_phases,
    }
}

/// `props[last] ⋯ props[1] · props[0]`: the first element acts first.
pub fn compose(props: &[Propagator2]) -> Result<Propagator2> {
    let (first, rest) = props
        .split_first()
        .ok_or_else(|| Error::validation("cannot compose an empty pulse sequence"))?;
    Ok(rest.iter().fold(first.clone(), |acc, p| acc.then(p)))
}

/// How each constituent pulse is driven: shape, peak Rabi frequency and a
/// detuning shared by every pulse of the sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Drive {
    pub shape: PulseShape,
    pub omega_peak: f64,
    pub detuning: f64,
    /// Slices per shaped pulse; unused for rectangular pulses.
    pub substeps: usize,
}

impl Drive {
    /// Rectangular pulses at unit Rabi frequency, so duration equals area.
    pub fn rectangular(detuning: f64) -> Self {
        Self {
            shape: PulseShape::Rectangular,
            omega_peak: 1.0,
            detuning,
            substeps: 1,
        }
    }

    pub fn shaped(shape: PulseShape, detuning: f64, substeps: usize) -> Self {
        Self {
            shape,
            omega_peak: 1.0,
            detuning,
            substeps,
        }
    }
}

impl Default for Drive {
    fn default() -> Self {
        Self {
            shape: PulseShape::Rectangular,
            omega_peak: 1.0,
            detuning: 0.0,
            substeps: DEFAULT_SUBSTEPS,
        }
    }
}

/// Propagator of one pulse of the drive with zero composite phase.
pub fn constituent_propagator(area: f64, drive: &Drive) -> Result<Propagator2> {
    let pulse = PulseSpec::with_area(
        drive.shape.clone(),
        drive.omega_peak,
        area,
        drive.detuning,
        0.0,
    )?;
    if drive.shape.is_rectangular() {
        constant_propagator(&pulse)
    } else {
        shaped_propagator(&pulse, drive.substeps)
    }
}

/// Two-level propagator of a whole gate sequence at per-pulse area `area`.
///
/// Every pulse shares area, shape and detuning, so each constituent is the
/// zero-phase propagator with its own phase imprinted on the off-diagonal.
pub fn sequence_propagator(seq: &GateSequence, area: f64, drive: &Drive) -> Result<Propagator2> {
    let base = constituent_propagator(area, drive)?;
    let props: Vec<Propagator2> = seq
        .pulse_phases
        .iter()
        .map(|&phase| apply_phase(&base, phase))
        .collect();
    compose(&props)
}

/// Composite phase gate from rectangular pulses at unit Rabi frequency.
pub fn composite_phase_gate(
    family: &PhaseList,
    alpha: f64,
    area: f64,
    detuning: f64,
) -> Result<Propagator2> {
    sequence_propagator(
        &gate_sequence(family, alpha),
        area,
        &Drive::rectangular(detuning),
    )
}

/// The ideal gate `diag(e^{iα/2}, e^{-iα/2})`.
pub fn phase_gate(alpha: f64) -> CMatrix {
    CMatrix::from_diag(&[cis(alpha / 2.0), cis(-alpha / 2.0)])
}
