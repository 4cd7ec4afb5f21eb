//! N degenerate states coupled to one ancilla, and the Householder
//! reflections its propagator realizes.
//!
//! State ordering: manifold states `0..N`, ancilla last. All couplings share
//! one envelope, so the Morris-Shore basis splits the manifold into the
//! bright vector `v_k = χ_k e^{iβ_k}/χ` (coupled to the ancilla at the rms
//! Rabi frequency `χ`) and `N-1` dark states that never evolve. When the
//! bright-state amplitude of the two-level propagator is `e^{iφ}`, the
//! manifold block is the generalized reflection `I + (e^{iφ}-1)|v⟩⟨v|`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::composite::{gate_sequence, sequence_propagator, Drive, GateSequence, PhaseList};
use crate::error::{Error, Result};
use crate::linalg::{cis, expm_hermitian, CMatrix, CVector, C64};
use crate::two_level::{PulseShape, DEFAULT_SUBSTEPS};

/// Tolerance on `|‖v‖ - 1|` accepted by [`householder_matrix`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct NPodSystem {
    /// Peak coupling amplitudes `χ_k ≥ 0` (rad/time).
    pub couplings: Vec<f64>,
    /// Coupling phases `β_k` (rad).
    pub coupling_phases: Vec<f64>,
    pub shape: PulseShape,
    /// Detuning of the ancilla (rad/time).
    pub detuning: f64,
}

impl NPodSystem {
    pub fn new(
        couplings: Vec<f64>,
        coupling_phases: Vec<f64>,
        shape: PulseShape,
        detuning: f64,
    ) -> Result<Self> {
        let sys = Self {
            couplings,
            coupling_phases,
            shape,
            detuning,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// The system whose bright vector is `v`, scaled to unit rms coupling.
    pub fn from_bright_vector(v: &CVector, shape: PulseShape, detuning: f64) -> Result<Self> {
        let v = v.normalized()?;
        Self::new(
            v.as_slice().iter().map(|z| z.norm()).collect(),
            v.as_slice().iter().map(|z| z.arg()).collect(),
            shape,
            detuning,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.couplings.is_empty() {
            return Err(Error::validation("an N-pod needs at least one coupling"));
        }
        if self.couplings.len() != self.coupling_phases.len() {
            return Err(Error::validation(format!(
                "{} couplings but {} coupling phases",
                self.couplings.len(),
                self.coupling_phases.len()
            )));
        }
        if self.couplings.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::validation("couplings must be finite and >= 0"));
        }
        if self.coupling_phases.iter().any(|b| !b.is_finite()) || !self.detuning.is_finite() {
            return Err(Error::validation(
                "coupling phases and detuning must be finite",
            ));
        }
        if self.rms_peak() <= 0.0 {
            return Err(Error::validation("at least one coupling must be nonzero"));
        }
        self.shape.validate()
    }

    /// Number of manifold states.
    pub fn dim(&self) -> usize {
        self.couplings.len()
    }

    /// `χ = sqrt(Σχ_k²)`.
    pub fn rms_peak(&self) -> f64 {
        self.couplings.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn bright_vector(&self) -> CVector {
        let chi = self.rms_peak();
        CVector::new(
            self.couplings
                .iter()
                .zip(&self.coupling_phases)
                .map(|(&c, &b)| cis(b) * (c / chi))
                .collect(),
        )
    }

    pub fn with_detuning(&self, detuning: f64) -> Self {
        Self {
            detuning,
            ..self.clone()
        }
    }

    /// Duration of one pulse of rms area `area` at this system's peak couplings.
    pub fn pulse_duration(&self, area: f64) -> f64 {
        area / (self.rms_peak() * self.shape.unit_integral())
    }
}

/// Target reflection `M(v; φ) = I + (e^{iφ} - 1)|v⟩⟨v|`.
#[derive(Clone, Debug, PartialEq)]
pub struct HouseholderTarget {
    pub v: CVector,
    pub hr_phase: f64,
}

impl HouseholderTarget {
    pub fn new(v: CVector, hr_phase: f64) -> Result<Self> {
        let defect = v.normalization_defect();
        if !(defect <= 1e-12) {
            return Err(Error::validation(format!(
                "target vector is not normalized (defect {defect:e})"
            )));
        }
        Ok(Self { v, hr_phase })
    }

    pub fn standard(v: CVector) -> Result<Self> {
        Self::new(v, std::f64::consts::PI)
    }

    pub fn is_standard(&self) -> bool {
        self.hr_phase == std::f64::consts::PI
    }
}

pub fn householder_matrix(target: &HouseholderTarget) -> Result<CMatrix> {
    let defect = target.v.normalization_defect();
    if !(defect <= NORMALIZATION_TOL) {
        return Err(Error::validation(format!(
            "Householder vector is not normalized (defect {defect:e})"
        )));
    }
    Ok(ms_shortcut_block(&target.v, cis(target.hr_phase)))
}

/// `(I - |v⟩⟨v|) + u₀₀|v⟩⟨v|`: the manifold block implied by a bright-state
/// amplitude `u₀₀`, since dark states are left untouched.
pub fn ms_shortcut_block(v: &CVector, bright_amplitude: C64) -> CMatrix {
    let proj = v.outer(v);
    &CMatrix::identity(v.dim()) + &proj.scale(bright_amplitude - 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MSReduction {
    pub rms_peak: f64,
    pub bright: CVector,
    pub dark_basis: Vec<CVector>,
}

impl MSReduction {
    /// Columns: bright vector first, then the dark basis.
    pub fn basis_matrix(&self) -> CMatrix {
        let n = self.bright.dim();
        let mut m = CMatrix::zeros(n, n);
        for (j, col) in std::iter::once(&self.bright)
            .chain(&self.dark_basis)
            .enumerate()
        {
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }
}

/// Bright/dark decomposition of the manifold.
///
/// The dark basis is Gram-Schmidt over the canonical vectors in index order,
/// skipping the component where `|v_k|` is largest.
pub fn ms_reduce(sys: &NPodSystem) -> Result<MSReduction> {
    sys.validate()?;
    let bright = sys.bright_vector();
    let n = bright.dim();
    let pivot = (0..n)
        .max_by(|&i, &j| bright[i].norm().total_cmp(&bright[j].norm()))
        .unwrap_or(0);
    let mut dark_basis: Vec<CVector> = Vec::with_capacity(n.saturating_sub(1));
    for k in (0..n).filter(|&k| k != pivot) {
        let mut w = CVector::basis(n, k);
        // two passes keep the basis orthonormal to round-off
        for _ in 0..2 {
            for q in std::iter::once(&bright).chain(&dark_basis) {
                let overlap = q.inner(&w);
                w.axpy(-overlap, q);
            }
        }
        dark_basis.push(w.normalized()?);
    }
    Ok(MSReduction {
        rms_peak: sys.rms_peak(),
        bright,
        dark_basis,
    })
}

/// `(N+1)×(N+1)` generator with every coupling phase shifted by `pulse_phase`
/// and scaled by the envelope value.
pub fn npod_hamiltonian(sys: &NPodSystem, pulse_phase: f64, envelope: f64) -> CMatrix {
    let n = sys.dim();
    let mut h = CMatrix::zeros(n + 1, n + 1);
    for (k, (&chi, &beta)) in sys.couplings.iter().zip(&sys.coupling_phases).enumerate() {
        let omega = cis(beta + pulse_phase) * (0.5 * chi * envelope);
        h[(k, n)] = omega;
        h[(n, k)] = omega.conj();
    }
    h[(n, n)] = C64::new(sys.detuning, 0.0);
    h
}

/// Full `(N+1)`-level propagator of a gate sequence at per-pulse rms area
/// `area`. Pulses keep the system's peak couplings and are stretched in time
/// to reach the area, so an area error is a duration error common to all
/// couplings.
pub fn npod_propagator(
    sys: &NPodSystem,
    seq: &GateSequence,
    area: f64,
    substeps: usize,
) -> Result<CMatrix> {
    sys.validate()?;
    if !(area.is_finite() && area >= 0.0) {
        return Err(Error::validation(format!(
            "pulse area must be finite and >= 0, got {area}"
        )));
    }
    if substeps == 0 {
        return Err(Error::validation("substeps must be >= 1"));
    }
    let n = sys.dim();
    let duration = sys.pulse_duration(area);
    let mut total = CMatrix::identity(n + 1);
    for &phase in &seq.pulse_phases {
        let pulse = if sys.shape.is_rectangular() {
            expm_hermitian(&npod_hamiltonian(sys, phase, 1.0), duration)?
        } else {
            let dt = duration / substeps as f64;
            let mut u = CMatrix::identity(n + 1);
            for k in 0..substeps {
                let s_mid = (k as f64 + 0.5) / substeps as f64;
                let h = npod_hamiltonian(sys, phase, sys.shape.envelope(s_mid));
                u = &expm_hermitian(&h, dt)? * &u;
            }
            u
        };
        total = &pulse * &total;
    }
    Ok(total)
}

/// Leading `N×N` block of an `(N+1)×(N+1)` propagator.
pub fn manifold_block(u: &CMatrix) -> Result<CMatrix> {
    if !u.is_square() || u.rows() < 2 {
        return Err(Error::validation(
            "manifold_block needs a square matrix of dimension >= 2",
        ));
    }
    Ok(u.leading_block(u.rows() - 1))
}

/// Realized manifold operation of the composite reflection with phase
/// `hr_phase`, by full propagation. Uses [`DEFAULT_SUBSTEPS`] for shaped pulses.
pub fn composite_hr(
    sys: &NPodSystem,
    family: &PhaseList,
    hr_phase: f64,
    area: f64,
    detuning: f64,
) -> Result<CMatrix> {
    composite_hr_with(sys, family, hr_phase, area, detuning, DEFAULT_SUBSTEPS)
}

pub fn composite_hr_with(
    sys: &NPodSystem,
    family: &PhaseList,
    hr_phase: f64,
    area: f64,
    detuning: f64,
    substeps: usize,
) -> Result<CMatrix> {
    let seq = gate_sequence(family, 2.0 * hr_phase);
    let u = npod_propagator(&sys.with_detuning(detuning), &seq, area, substeps)?;
    manifold_block(&u)
}

/// Two-level drive equivalent to the system's bright-state coupling.
pub fn ms_drive(sys: &NPodSystem, detuning: f64, substeps: usize) -> Drive {
    Drive {
        shape: sys.shape.clone(),
        omega_peak: sys.rms_peak(),
        detuning,
        substeps,
    }
}

/// Same quantity as [`composite_hr_with`], from the Morris-Shore two-level
/// propagator and [`ms_shortcut_block`].
pub fn ms_shortcut_hr(
    sys: &NPodSystem,
    family: &PhaseList,
    hr_phase: f64,
    area: f64,
    detuning: f64,
    substeps: usize,
) -> Result<CMatrix> {
    sys.validate()?;
    let seq = gate_sequence(family, 2.0 * hr_phase);
    let u = sequence_propagator(&seq, area, &ms_drive(sys, detuning, substeps))?;
    Ok(ms_shortcut_block(&sys.bright_vector(), u.a()))
}

/// Normalized vector with i.i.d. complex-normal components.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let raw = CVector::new(
            (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        );
        if let Ok(v) = raw.normalized() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::{bb_phases, composite_phase_gate, universal_phases};
    use crate::linalg::{frobenius_distance, unitarity_defect};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rect_system(couplings: &[f64], phases: &[f64]) -> NPodSystem {
        NPodSystem::new(
            couplings.to_vec(),
            phases.to_vec(),
            PulseShape::Rectangular,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn householder_examples() {
        let m = householder_matrix(&HouseholderTarget::standard(CVector::basis(3, 0)).unwrap())
            .unwrap();
        let want = CMatrix::from_diag(&[c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(frobenius_distance(&m, &want).unwrap() < 1e-15);

        let h = 0.5f64.sqrt();
        let v = CVector::new(vec![c(h, 0.0), c(h, 0.0)]);
        let m = householder_matrix(&HouseholderTarget::standard(v).unwrap()).unwrap();
        let want = CMatrix::from_rows(&[[c(0.0, 0.0), c(-1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]);
        assert!(frobenius_distance(&m, &want).unwrap() < 1e-15);

        let m =
            householder_matrix(&HouseholderTarget::new(CVector::basis(2, 0), PI / 2.0).unwrap())
                .unwrap();
        let want = CMatrix::from_diag(&[c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(frobenius_distance(&m, &want).unwrap() < 1e-15);
    }

    #[test]
    fn householder_rejects_unnormalized() {
        let target = HouseholderTarget {
            v: CVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            hr_phase: PI,
        };
        assert!(matches!(
            householder_matrix(&target),
            Err(Error::Validation(_))
        ));
        assert!(HouseholderTarget::new(CVector::new(vec![c(0.5, 0.0)]), PI).is_err());
    }

    #[test]
    fn householder_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in 1..=6 {
            let v = random_unit_vector(dim, &mut rng);
            let phi = rng.random_range(-PI..PI);
            let m = householder_matrix(&HouseholderTarget::new(v.clone(), phi).unwrap()).unwrap();
            let minv =
                householder_matrix(&HouseholderTarget::new(v.clone(), -phi).unwrap()).unwrap();
            assert!(unitarity_defect(&m).unwrap() <= 1e-12);
            assert!((m.determinant().unwrap() - cis(phi)).norm() <= 1e-12);
            assert!(frobenius_distance(&(&m * &minv), &CMatrix::identity(dim)).unwrap() <= 1e-12);
            assert!(frobenius_distance(&m.adjoint(), &minv).unwrap() <= 1e-12);
            let s = householder_matrix(&HouseholderTarget::standard(v).unwrap()).unwrap();
            assert!(frobenius_distance(&(&s * &s), &CMatrix::identity(dim)).unwrap() <= 1e-12);
            assert!(s.hermitian_defect() <= 1e-12);
        }
    }

    #[test]
    fn ms_reduce_examples() {
        let r = ms_reduce(&rect_system(&[3.0, 4.0], &[0.0, 0.0])).unwrap();
        assert!((r.rms_peak - 5.0).abs() < 1e-15);
        assert!((r.bright[0] - c(0.6, 0.0)).norm() < 1e-15);
        assert!((r.bright[1] - c(0.8, 0.0)).norm() < 1e-15);

        let r = ms_reduce(&rect_system(&[1.0, 1.0], &[0.0, PI / 2.0])).unwrap();
        let h = 0.5f64.sqrt();
        assert!((r.rms_peak - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.bright[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((r.bright[1] - c(0.0, h)).norm() < 1e-15);

        let r = ms_reduce(&rect_system(&[2.0], &[0.3])).unwrap();
        assert!((r.rms_peak - 2.0).abs() < 1e-15);
        assert!((r.bright[0] - cis(0.3)).norm() < 1e-15);
        assert!(r.dark_basis.is_empty());
    }

    #[test]
    fn ms_reduce_rejects_zero_couplings() {
        let sys = NPodSystem {
            couplings: vec![0.0, 0.0],
            coupling_phases: vec![0.0, 0.0],
            shape: PulseShape::Rectangular,
            detuning: 0.0,
        };
        assert!(matches!(ms_reduce(&sys), Err(Error::Validation(_))));
        assert!(NPodSystem::new(vec![1.0], vec![], PulseShape::Rectangular, 0.0).is_err());
        assert!(NPodSystem::new(vec![], vec![], PulseShape::Rectangular, 0.0).is_err());
        assert!(NPodSystem::new(vec![-1.0], vec![0.0], PulseShape::Rectangular, 0.0).is_err());
    }

    #[test]
    fn ms_basis_is_orthonormal_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in 1..=8 {
            let v = random_unit_vector(dim, &mut rng);
            let sys = NPodSystem::from_bright_vector(&v, PulseShape::Rectangular, 0.0).unwrap();
            let r = ms_reduce(&sys).unwrap();
            assert_eq!(r.dark_basis.len(), dim - 1);
            assert!(unitarity_defect(&r.basis_matrix()).unwrap() <= 1e-12);
            assert!(
                frobenius_distance(
                    &CMatrix::from_row_major(dim, 1, r.bright.as_slice().to_vec()).unwrap(),
                    &CMatrix::from_row_major(dim, 1, v.as_slice().to_vec()).unwrap()
                )
                .unwrap()
                    < 1e-12
            );
            assert_eq!(ms_reduce(&sys).unwrap(), r);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let sys = rect_system(&[1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(npod_hamiltonian(&sys, 0.3, 0.0).frobenius_norm(), 0.0);

        let h = npod_hamiltonian(&rect_system(&[1.0], &[0.0]), 0.0, 1.0);
        let want = CMatrix::from_rows(&[[c(0.0, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.0, 0.0)]]);
        assert_eq!(h, want);

        let mut sys = rect_system(&[3.0, 4.0], &[0.0, 0.0]);
        sys.detuning = 0.7;
        let h = npod_hamiltonian(&sys, 0.0, 1.0);
        assert_eq!(h[(0, 2)], c(1.5, 0.0));
        assert_eq!(h[(1, 2)], c(2.0, 0.0));
        assert_eq!(h[(2, 2)], c(0.7, 0.0));
        assert_eq!(h.hermitian_defect(), 0.0);
    }

    #[test]
    fn single_coupling_matches_two_level_gate() {
        let sys = rect_system(&[1.0], &[0.0]);
        for family in [bb_phases(3).unwrap(), universal_phases(5, 2).unwrap()] {
            for (area, detuning) in [(PI, 0.0), (0.8 * PI, 0.4), (1.3 * PI, -1.1)] {
                let alpha = PI / 2.0;
                let seq = gate_sequence(&family, alpha);
                let full = npod_propagator(&sys.with_detuning(detuning), &seq, area, 1).unwrap();
                let two = composite_phase_gate(&family, alpha, area, detuning).unwrap();
                assert!(frobenius_distance(&full, two.matrix()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn single_two_pi_pulse_is_standard_reflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = random_unit_vector(4, &mut rng);
        let sys = NPodSystem::from_bright_vector(&v, PulseShape::Rectangular, 0.0).unwrap();
        let seq = GateSequence {
            base: bb_phases(1).unwrap(),
            alpha: 0.0,
            pulse_phases: vec![0.0],
        };
        let u = npod_propagator(&sys, &seq, 2.0 * PI, 1).unwrap();
        let m =
            householder_matrix(&HouseholderTarget::standard(sys.bright_vector()).unwrap()).unwrap();
        assert!(frobenius_distance(&manifold_block(&u).unwrap(), &m).unwrap() < 1e-12);
    }

    #[test]
    fn dark_states_are_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for dim in 2..=6 {
            let v = random_unit_vector(dim, &mut rng);
            let sys = NPodSystem::from_bright_vector(&v, PulseShape::Rectangular, 0.37).unwrap();
            let seq = gate_sequence(&universal_phases(7, 1).unwrap(), 1.1);
            let u = npod_propagator(&sys, &seq, 0.77 * PI, 1).unwrap();
            for w in ms_reduce(&sys).unwrap().dark_basis {
                let padded = w.padded(dim + 1);
                let out = u.mul_vec(&padded).unwrap();
                let diff: f64 = out
                    .as_slice()
                    .iter()
                    .zip(padded.as_slice())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(diff < 1e-11);
            }
        }
    }

    #[test]
    fn manifold_block_examples() {
        assert_eq!(
            manifold_block(&CMatrix::identity(4)).unwrap(),
            CMatrix::identity(3)
        );
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(0.0, 1.0);
        m[(1, 1)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.5, 0.0);
        m[(2, 2)] = c(-1.0, 0.0);
        let block = manifold_block(&m).unwrap();
        assert_eq!(block, m.leading_block(2));
        assert!(manifold_block(&CMatrix::identity(1)).is_err());
        assert!(manifold_block(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn composite_hr_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let v = random_unit_vector(3, &mut rng);
        let sys = NPodSystem::from_bright_vector(&v, PulseShape::Rectangular, 0.0).unwrap();
        let m =
            householder_matrix(&HouseholderTarget::standard(sys.bright_vector()).unwrap()).unwrap();

        let bb3 = bb_phases(3).unwrap();
        let nominal = composite_hr(&sys, &bb3, PI, PI, 0.0).unwrap();
        assert!(frobenius_distance(&nominal, &m).unwrap() <= 1e-12);

        let off = composite_hr(&sys, &bb3, PI, 0.9 * PI, 0.0).unwrap();
        let f = frobenius_distance(&off, &m).unwrap();
        let cos = (0.45 * PI).cos();
        assert!((f - 2.0 * cos.powi(6)).abs() < 1e-12);
        assert!((f - 2.93e-5).abs() < 1e-7);

        let bb1 = bb_phases(1).unwrap();
        let mg =
            householder_matrix(&HouseholderTarget::new(sys.bright_vector(), PI / 2.0).unwrap())
                .unwrap();
        let off = composite_hr(&sys, &bb1, PI / 2.0, 0.9 * PI, 0.0).unwrap();
        let f = frobenius_distance(&off, &mg).unwrap();
        assert!((f - 2f64.sqrt() * cos * cos).abs() < 1e-12);
        assert!((f - 0.034609).abs() < 1e-6);
    }

    #[test]
    fn positive_phase_convention_locked() {
        // a = e^{iφ} realizes M(v, +φ), not M(v, -φ).
        let sys = rect_system(&[1.0, 2.0, 0.5], &[0.1, -0.7, 2.0]);
        let phi = PI / 3.0;
        let got = composite_hr(&sys, &bb_phases(5).unwrap(), phi, PI, 0.0).unwrap();
        let plus =
            householder_matrix(&HouseholderTarget::new(sys.bright_vector(), phi).unwrap()).unwrap();
        let minus = householder_matrix(&HouseholderTarget::new(sys.bright_vector(), -phi).unwrap())
            .unwrap();
        assert!(frobenius_distance(&got, &plus).unwrap() <= 1e-12);
        assert!(frobenius_distance(&got, &minus).unwrap() > 0.5);
    }

    #[test]
    fn shortcut_agrees_with_full_propagation() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let dim = rng.random_range(1..=8);
            let v = random_unit_vector(dim, &mut rng);
            let sys = NPodSystem::from_bright_vector(&v, PulseShape::Rectangular, 0.0).unwrap();
            let area = rng.random_range(0.5 * PI..1.5 * PI);
            let detuning = rng.random_range(-1.0..1.0);
            let family = universal_phases(5, 1).unwrap();
            let full = composite_hr_with(&sys, &family, PI, area, detuning, 1).unwrap();
            let fast = ms_shortcut_hr(&sys, &family, PI, area, detuning, 1).unwrap();
            assert!(frobenius_distance(&full, &fast).unwrap() < 1e-9);
        }
    }

    #[test]
    fn random_vectors_are_normalized_and_seeded() {
        let a = random_unit_vector(5, &mut ChaCha8Rng::seed_from_u64(1));
        let b = random_unit_vector(5, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        assert!(a.normalization_defect() < 1e-14);
    }
}
