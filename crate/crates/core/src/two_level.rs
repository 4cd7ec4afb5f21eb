//! Driven two-state dynamics.
//!
//! The generator of a pulse with envelope value `f`, peak Rabi frequency
//! `Ω`, detuning `Δ` and composite phase `φ` is
//!
//! ```text
//! H = ½ [[0, Ω f e^{iφ}], [Ω f e^{-iφ}, 2Δ]]      (ħ = 1)
//! ```
//!
//! which is also the Morris-Shore two-state system of an N-pod (bright
//! state first, ancilla second). With this generator a resonant pulse of
//! area `A` has `a = cos(A/2)` and `b = -i e^{iφ} sin(A/2)`. Off resonance
//! the propagator keeps the `e^{-iΔT}` determinant phase of this frame.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cis, expm_hermitian, unitarity_defect, CMatrix, C64};

/// Default number of midpoint slices for shaped pulses.
pub const DEFAULT_SUBSTEPS: usize = 1000;

/// Default Gaussian truncation, in units of the 1/e half-width.
pub const DEFAULT_GAUSSIAN_TRUNCATION: f64 = 3.0;

fn default_truncation() -> f64 {
    DEFAULT_GAUSSIAN_TRUNCATION
}

/// Pulse envelope `f(t)` with peak value 1.
///
/// Envelopes are described on the normalized time `s = t/T ∈ [0, 1]`, so
/// the same shape can be stretched to any duration.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PulseShape {
    #[default]
    Rectangular,
    /// `exp(-(t - T/2)² / w²)` truncated at `|t - T/2| = truncation·w`.
    Gaussian {
        #[serde(default = "default_truncation")]
        truncation: f64,
    },
    /// Piecewise-linear envelope through `(time, value)` samples. The sample
    /// time span is mapped onto the pulse duration.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl PulseShape {
    pub fn gaussian() -> Self {
        PulseShape::Gaussian {
            truncation: DEFAULT_GAUSSIAN_TRUNCATION,
        }
    }

    pub fn is_rectangular(&self) -> bool {
        matches!(self, PulseShape::Rectangular)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PulseShape::Rectangular => Ok(()),
            PulseShape::Gaussian { truncation } => {
                if truncation.is_finite() && *truncation > 0.0 {
                    Ok(())
                } else {
                    Err(Error::validation(
                        "gaussian truncation must be positive and finite",
                    ))
                }
            }
            PulseShape::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::validation(
                        "tabulated shape needs at least 2 samples",
                    ));
                }
                if samples
                    .iter()
                    .any(|(t, v)| !t.is_finite() || !(0.0..=1.0).contains(v))
                {
                    return Err(Error::validation(
                        "tabulated samples need finite times and values in [0, 1]",
                    ));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::validation(
                        "tabulated sample times must be strictly increasing",
                    ));
                }
                let peak = samples.iter().map(|s| s.1).fold(0.0, f64::max);
                if (peak - 1.0).abs() > 1e-9 {
                    return Err(Error::validation("tabulated envelope must peak at 1"));
                }
                Ok(())
            }
        }
    }

    /// Envelope value at normalized time `s ∈ [0, 1]`.
    pub fn envelope(&self, s: f64) -> f64 {
        match self {
            PulseShape::Rectangular => 1.0,
            PulseShape::Gaussian { truncation } => {
                let x = 2.0 * truncation * (s - 0.5);
                (-x * x).exp()
            }
            PulseShape::Tabulated { samples } => {
                let (t0, t1) = (samples[0].0, samples[samples.len() - 1].0);
                let t = t0 + s.clamp(0.0, 1.0) * (t1 - t0);
                let k = samples
                    .partition_point(|p| p.0 <= t)
                    .clamp(1, samples.len() - 1);
                let ((ta, va), (tb, vb)) = (samples[k - 1], samples[k]);
                va + (vb - va) * (t - ta) / (tb - ta)
            }
        }
    }

    /// `∫₀¹ f(s) ds`: the envelope area per unit duration.
    pub fn unit_integral(&self) -> f64 {
        match self {
            PulseShape::Rectangular => 1.0,
            PulseShape::Gaussian { truncation } => {
                std::f64::consts::PI.sqrt() * libm::erf(*truncation) / (2.0 * truncation)
            }
            PulseShape::Tabulated { samples } => {
                let span = samples[samples.len() - 1].0 - samples[0].0;
                let trapz: f64 = samples
                    .windows(2)
                    .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
                    .sum();
                trapz / span
            }
        }
    }
}

/// One constituent pulse with constant detuning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub shape: PulseShape,
    /// Peak Rabi frequency (rad/time).
    pub omega_peak: f64,
    pub duration: f64,
    pub detuning: f64,
    /// Composite phase (rad).
    pub phase: f64,
}

impl PulseSpec {
    /// A pulse of the given area at peak Rabi frequency `omega_peak`; the
    /// duration is stretched until `omega_peak·∫f dt = area`.
    pub fn with_area(
        shape: PulseShape,
        omega_peak: f64,
        area: f64,
        detuning: f64,
        phase: f64,
    ) -> Result<Self> {
        shape.validate()?;
        if !(area.is_finite() && area >= 0.0) {
            return Err(Error::validation(format!(
                "pulse area must be finite and >= 0, got {area}"
            )));
        }
        if !(omega_peak.is_finite() && omega_peak > 0.0) {
            return Err(Error::validation("peak Rabi frequency must be positive"));
        }
        let duration = area / (omega_peak * shape.unit_integral());
        let pulse = Self {
            shape,
            omega_peak,
            duration,
            detuning,
            phase,
        };
        pulse.validate()?;
        Ok(pulse)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if !(self.omega_peak.is_finite() && self.omega_peak >= 0.0) {
            return Err(Error::validation(
                "peak Rabi frequency must be finite and >= 0",
            ));
        }
        // Zero duration is allowed: it is the A = 0 end of an area scan.
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(Error::validation("pulse duration must be finite and >= 0"));
        }
        if !self.detuning.is_finite() || !self.phase.is_finite() {
            return Err(Error::validation("detuning and phase must be finite"));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.omega_peak * self.duration * self.shape.unit_integral()
    }

    /// Generator at envelope value `envelope`.
    pub fn hamiltonian(&self, envelope: f64) -> CMatrix {
        let coupling = cis(self.phase) * (0.5 * self.omega_peak * envelope);
        CMatrix::from_rows(&[
            [C64::new(0.0, 0.0), coupling],
            [coupling.conj(), C64::new(self.detuning, 0.0)],
        ])
    }
}

/// A 2×2 unitary propagator `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Propagator2 {
    u: CMatrix,
}

impl Propagator2 {
    pub const UNITARITY_TOL: f64 = 1e-12;

    pub fn new(u: CMatrix) -> Result<Self> {
        if u.rows() != 2 || u.cols() != 2 {
            return Err(Error::validation("a two-level propagator must be 2x2"));
        }
        let defect = unitarity_defect(&u)?;
        if !(defect <= Self::UNITARITY_TOL) {
            return Err(Error::validation(format!(
                "matrix is not unitary (defect {defect:e})"
            )));
        }
        Ok(Self { u })
    }

    pub(crate) fn from_unitary(u: CMatrix) -> Self {
        debug_assert!(u.rows() == 2 && u.cols() == 2);
        Self { u }
    }

    pub fn identity() -> Self {
        Self {
            u: CMatrix::identity(2),
        }
    }

    pub fn a(&self) -> C64 {
        self.u[(0, 0)]
    }

    pub fn b(&self) -> C64 {
        self.u[(0, 1)]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn into_matrix(self) -> CMatrix {
        self.u
    }

    pub fn adjoint(&self) -> Self {
        Self {
            u: self.u.adjoint(),
        }
    }

    /// `other · self`: `self` acts first.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            u: &other.u * &self.u,
        }
    }
}

/// Cayley-Klein propagator of a resonant pulse of area `area` and phase `phase`.
pub fn resonant_propagator(area: f64, phase: f64) -> Result<Propagator2> {
    if !(area.is_finite() && area >= 0.0) {
        return Err(Error::validation(format!(
            "pulse area must be finite and >= 0, got {area}"
        )));
    }
    if !phase.is_finite() {
        return Err(Error::validation("phase must be finite"));
    }
    let a = C64::new((area / 2.0).cos(), 0.0);
    let b = C64::new(0.0, -1.0) * cis(phase) * (area / 2.0).sin();
    Ok(Propagator2::from_unitary(CMatrix::from_rows(&[
        [a, b],
        [-b.conj(), a.conj()],
    ])))
}

/// Imprints a composite phase: `u₀₁·e^{iφ}`, `u₁₀·e^{-iφ}`.
pub fn apply_phase(u: &Propagator2, phase: f64) -> Propagator2 {
    let mut m = u.u.clone();
    m[(0, 1)] *= cis(phase);
    m[(1, 0)] *= cis(-phase);
    Propagator2::from_unitary(m)
}

/// Exact propagator of a rectangular pulse with constant detuning.
pub fn constant_propagator(pulse: &PulseSpec) -> Result<Propagator2> {
    if !pulse.shape.is_rectangular() {
        return Err(Error::validation(
            "constant_propagator needs a rectangular pulse; use shaped_propagator",
        ));
    }
    pulse.validate()?;
    let unphased = PulseSpec {
        phase: 0.0,
        ..pulse.clone()
    };
    let u = expm_hermitian(&unphased.hamiltonian(1.0), pulse.duration)?;
    Ok(apply_phase(&Propagator2::from_unitary(u), pulse.phase))
}

/// Piecewise-constant propagation over the whole pulse with `substeps`
/// equal slices, each advanced exactly with its midpoint generator.
pub fn shaped_propagator(pulse: &PulseSpec, substeps: usize) -> Result<Propagator2> {
    propagate_window(pulse, 0.0, 1.0, substeps)
}

/// Like [`shaped_propagator`] but over the normalized window `[s0, s1]` of
/// the pulse, so that windows compose: `[0, ½]` then `[½, 1]` equals `[0, 1]`.
pub fn propagate_window(
    pulse: &PulseSpec,
    s0: f64,
    s1: f64,
    substeps: usize,
) -> Result<Propagator2> {
    if substeps == 0 {
        return Err(Error::validation("substeps must be >= 1"));
    }
    if !(0.0..=1.0).contains(&s0) || !(s0..=1.0).contains(&s1) {
        return Err(Error::validation(
            "propagation window must satisfy 0 <= s0 <= s1 <= 1",
        ));
    }
    pulse.validate()?;
    let ds = (s1 - s0) / substeps as f64;
    let dt = ds * pulse.duration;
    let mut u = CMatrix::identity(2);
    for k in 0..substeps {
        let s_mid = s0 + (k as f64 + 0.5) * ds;
        let slice = expm_hermitian(&pulse.hamiltonian(pulse.shape.envelope(s_mid)), dt)?;
        u = &slice * &u;
    }
    Ok(Propagator2::from_unitary(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_distance;
    use crate::linalg::tests::rk4_propagate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rect(omega: f64, duration: f64, detuning: f64, phase: f64) -> PulseSpec {
        PulseSpec {
            shape: PulseShape::Rectangular,
            omega_peak: omega,
            duration,
            detuning,
            phase,
        }
    }

    fn dist(a: &Propagator2, b: &Propagator2) -> f64 {
        frobenius_distance(a.matrix(), b.matrix()).unwrap()
    }

    #[test]
    fn resonant_examples() {
        let u = resonant_propagator(0.0, 1.3).unwrap();
        assert!(dist(&u, &Propagator2::identity()) < 1e-15);

        let u = resonant_propagator(PI / 2.0, 0.0).unwrap();
        let h = 0.5f64.sqrt();
        assert!((u.a() - C64::new(h, 0.0)).norm() < 1e-15);
        assert!((u.b() - C64::new(0.0, -h)).norm() < 1e-15);

        let u = resonant_propagator(PI, 0.0).unwrap();
        assert!(u.a().norm() < 1e-15);
        assert!((u.b() - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn resonant_pi_pulse_sign_matches_rk4() {
        // Integrate the Schrödinger equation for a rectangular resonant pulse
        // directly; this fixes the phase of b independently of the closed form.
        let h = rect(1.0, PI, 0.0, 0.0).hamiltonian(1.0);
        let oracle = rk4_propagate(&h, PI, 4000);
        let u = resonant_propagator(PI, 0.0).unwrap();
        assert!(frobenius_distance(u.matrix(), &oracle).unwrap() < 1e-10);
    }

    #[test]
    fn resonant_rejects_negative_area() {
        assert!(matches!(
            resonant_propagator(-0.1, 0.0),
            Err(Error::Validation(_))
        ));
        assert!(resonant_propagator(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn resonant_has_cayley_klein_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let u = resonant_propagator(rng.random_range(0.0..4.0 * PI), rng.random_range(-PI..PI))
                .unwrap();
            let m = u.matrix();
            assert!((m[(1, 1)] - m[(0, 0)].conj()).norm() < 1e-12);
            assert!((m[(1, 0)] + m[(0, 1)].conj()).norm() < 1e-12);
            assert!((m.determinant().unwrap() - 1.0).norm() < 1e-12);
            assert!(unitarity_defect(m).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn constant_uncoupled_levels() {
        let (delta, t) = (0.7, 2.3);
        let u = constant_propagator(&rect(0.0, t, delta, 0.4)).unwrap();
        let want = CMatrix::from_diag(&[C64::new(1.0, 0.0), cis(-delta * t)]);
        assert!(frobenius_distance(u.matrix(), &want).unwrap() < 1e-15);
    }

    #[test]
    fn constant_reduces_to_resonant() {
        let u = constant_propagator(&rect(1.0, PI, 0.0, 0.0)).unwrap();
        assert!(dist(&u, &resonant_propagator(PI, 0.0).unwrap()) < 1e-15);
        let u = constant_propagator(&rect(2.0, 0.8, 0.0, 1.1)).unwrap();
        assert!(dist(&u, &resonant_propagator(1.6, 1.1).unwrap()) < 1e-15);
    }

    #[test]
    fn constant_detuned_example_against_rk4() {
        let pulse = rect(1.0, PI, 1.0, 0.0);
        let u = constant_propagator(&pulse).unwrap();
        let expected_b = (2f64.sqrt() * PI / 2.0).sin().abs() / 2f64.sqrt();
        assert!((expected_b - 0.56264).abs() < 1e-5);
        assert!((u.b().norm() - expected_b).abs() < 1e-12);
        let oracle = rk4_propagate(&pulse.hamiltonian(1.0), PI, 4000);
        assert!(frobenius_distance(u.matrix(), &oracle).unwrap() < 1e-10);
        // Frame of the Morris-Shore generator: det = e^{-iΔT}, not 1.
        let det = u.matrix().determinant().unwrap();
        assert!((det - cis(-PI)).norm() < 1e-12);
    }

    #[test]
    fn constant_rejects_shaped_pulse() {
        let p = PulseSpec::with_area(PulseShape::gaussian(), 1.0, PI, 0.0, 0.0).unwrap();
        assert!(constant_propagator(&p).is_err());
    }

    #[test]
    fn generalized_rabi_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let omega = rng.random_range(0.0..3.0);
            let delta = rng.random_range(-3.0..3.0);
            let t = rng.random_range(0.0..6.0);
            let u = constant_propagator(&rect(omega, t, delta, 0.0)).unwrap();
            let w = (omega * omega + delta * delta).sqrt();
            let want = if w > 0.0 {
                omega / w * (w * t / 2.0).sin().abs()
            } else {
                0.0
            };
            assert!((u.b().norm() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn shaped_rectangular_matches_constant() {
        let pulse = rect(1.3, 2.1, -0.4, 0.9);
        let exact = constant_propagator(&pulse).unwrap();
        for substeps in [1, 7, 100] {
            assert!(dist(&shaped_propagator(&pulse, substeps).unwrap(), &exact) < 1e-12);
        }
    }

    #[test]
    fn shaped_gaussian_pi_pulse_on_resonance() {
        let pulse = PulseSpec::with_area(PulseShape::gaussian(), 1.0, PI, 0.0, 0.0).unwrap();
        assert!((pulse.area() - PI).abs() < 1e-14);
        let u = shaped_propagator(&pulse, 1000).unwrap();
        assert!(u.a().norm() < 1e-8);
        assert!((u.b().norm() - 1.0).abs() < 1e-8);
        let finer = shaped_propagator(&pulse, 2000).unwrap();
        assert!(dist(&u, &finer) < 1e-8);
    }

    #[test]
    fn shaped_converges_second_order() {
        let pulse = PulseSpec::with_area(PulseShape::gaussian(), 1.0, 0.8 * PI, 0.6, 0.3).unwrap();
        let reference = shaped_propagator(&pulse, 8000).unwrap();
        let e1 = dist(&shaped_propagator(&pulse, 100).unwrap(), &reference);
        let e2 = dist(&shaped_propagator(&pulse, 200).unwrap(), &reference);
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn shaped_resonant_depends_only_on_area() {
        let area = 0.7 * PI;
        let g = PulseSpec::with_area(PulseShape::gaussian(), 1.0, area, 0.0, 0.4).unwrap();
        let r = PulseSpec::with_area(PulseShape::Rectangular, 1.0, area, 0.0, 0.4).unwrap();
        let gu = shaped_propagator(&g, 1000).unwrap();
        let ru = shaped_propagator(&r, 1000).unwrap();
        assert!(dist(&gu, &ru) < 1e-8);
    }

    #[test]
    fn windows_compose() {
        let pulse = PulseSpec::with_area(PulseShape::gaussian(), 1.0, 1.2 * PI, 0.8, 0.2).unwrap();
        let full = propagate_window(&pulse, 0.0, 1.0, 1000).unwrap();
        let first = propagate_window(&pulse, 0.0, 0.5, 500).unwrap();
        let second = propagate_window(&pulse, 0.5, 1.0, 500).unwrap();
        assert!(dist(&full, &first.then(&second)) < 1e-10);
    }

    #[test]
    fn shaped_errors() {
        let pulse = rect(1.0, 1.0, 0.0, 0.0);
        assert!(shaped_propagator(&pulse, 0).is_err());
        let bad = PulseSpec {
            shape: PulseShape::Tabulated {
                samples: vec![(0.0, 1.0)],
            },
            ..pulse.clone()
        };
        assert!(matches!(
            shaped_propagator(&bad, 10),
            Err(Error::Validation(_))
        ));
        let unordered = PulseSpec {
            shape: PulseShape::Tabulated {
                samples: vec![(0.0, 0.2), (0.0, 1.0)],
            },
            ..pulse
        };
        assert!(shaped_propagator(&unordered, 10).is_err());
    }

    #[test]
    fn tabulated_envelope_interpolates() {
        let shape = PulseShape::Tabulated {
            samples: vec![(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
        };
        shape.validate().unwrap();
        assert!((shape.envelope(0.5) - 1.0).abs() < 1e-15);
        assert!((shape.envelope(0.25) - 0.5).abs() < 1e-15);
        assert!((shape.unit_integral() - 0.5).abs() < 1e-15);
        // A triangle of equal area reproduces the resonant law.
        let p = PulseSpec::with_area(shape, 2.0, PI, 0.0, 0.0).unwrap();
        let u = shaped_propagator(&p, 2000).unwrap();
        assert!(u.a().norm() < 1e-8);
    }

    #[test]
    fn gaussian_unit_integral_matches_quadrature() {
        let shape = PulseShape::gaussian();
        let m = 200_000;
        let h = 1.0 / m as f64;
        let quad: f64 = (0..m)
            .map(|k| shape.envelope((k as f64 + 0.5) * h) * h)
            .sum();
        assert!((quad - shape.unit_integral()).abs() < 1e-11);
        assert!((shape.envelope(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn apply_phase_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = constant_propagator(&rect(1.2, 1.7, 0.3, 0.5)).unwrap();
        assert_eq!(apply_phase(&u, 0.0), u);

        let flipped = apply_phase(&resonant_propagator(PI, 0.0).unwrap(), PI);
        assert!((flipped.b() - C64::new(0.0, 1.0)).norm() < 1e-15);

        for _ in 0..20 {
            let (p1, p2) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            let lhs = apply_phase(&apply_phase(&u, p1), p2);
            let rhs = apply_phase(&u, p1 + p2);
            assert!(dist(&lhs, &rhs) < 1e-14);
            assert_eq!(lhs.a(), u.a());
        }
    }

    #[test]
    fn propagator_new_rejects_non_unitary() {
        assert!(Propagator2::new(CMatrix::from_diag(&[
            C64::new(2.0, 0.0),
            C64::new(1.0, 0.0)
        ]))
        .is_err());
        assert!(Propagator2::new(CMatrix::identity(3)).is_err());
        assert!(Propagator2::new(CMatrix::identity(2)).is_ok());
    }
}
