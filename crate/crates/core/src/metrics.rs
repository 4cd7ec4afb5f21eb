//! Infidelity, the closed-form broadband law, and robustness scans.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composite::{Family, PhaseList};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, CMatrix};
use crate::npod::{
    composite_hr_with, householder_matrix, ms_shortcut_hr, HouseholderTarget, NPodSystem,
};
use crate::two_level::{PulseShape, DEFAULT_SUBSTEPS};

/// Frobenius distance between the realized and the target operation. No
/// global phase is optimized away.
pub fn infidelity(actual: &CMatrix, target: &CMatrix) -> Result<f64> {
    if !actual.is_square() || !target.is_square() {
        return Err(Error::validation("infidelity needs square matrices"));
    }
    frobenius_distance(actual, target)
}

/// `2·|sin(φ/2)|·cos^{2n}(A/2)` for broadband composite reflections.
pub fn bb_infidelity_analytic(hr_phase: f64, area: f64, n: usize) -> f64 {
    2.0 * (hr_phase / 2.0).sin().abs() * (area / 2.0).cos().powi(2 * n as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    AreaOverPi,
    DetuningOverOmega,
}

impl AxisName {
    pub fn csv_header(self) -> &'static str {
        match self {
            AxisName::AreaOverPi => "A_over_pi",
            AxisName::DetuningOverOmega => "Delta_over_Omega",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(name: AxisName, min: f64, max: f64, points: usize) -> Result<Self> {
        let axis = Self {
            name,
            min,
            max,
            points,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::validation("an axis needs at least 2 points"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::validation(format!(
                "axis range must satisfy min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    /// Evenly spaced values with both endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.min + span * i as f64 / last)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
}

impl ScanGrid {
    /// `A/π ∈ [0, 2]` on `points` samples.
    pub fn area(min: f64, max: f64, points: usize) -> Result<Self> {
        Ok(Self {
            axis1: Axis::new(AxisName::AreaOverPi, min, max, points)?,
            axis2: None,
        })
    }

    pub fn area_detuning(area: (f64, f64, usize), detuning: (f64, f64, usize)) -> Result<Self> {
        Ok(Self {
            axis1: Axis::new(AxisName::AreaOverPi, area.0, area.1, area.2)?,
            axis2: Some(Axis::new(
                AxisName::DetuningOverOmega,
                detuning.0,
                detuning.1,
                detuning.2,
            )?),
        })
    }

    pub fn len(&self) -> usize {
        self.axis1.points * self.axis2.as_ref().map_or(1, |a| a.points)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanMethod {
    /// Two-level Morris-Shore propagator plus manifold reconstruction.
    #[default]
    Shortcut,
    /// Full `(N+1)`-level propagation.
    Full,
}

#[derive(Clone, Debug)]
pub struct ScanSettings {
    /// System whose manifold is compared with its target reflection.
    pub system: NPodSystem,
    pub method: ScanMethod,
    pub substeps: usize,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            system: NPodSystem::new(vec![1.0], vec![0.0], PulseShape::Rectangular, 0.0)
                .expect("unit single-coupling system is valid"),
            method: ScanMethod::Shortcut,
            substeps: DEFAULT_SUBSTEPS,
        }
    }
}

impl ScanSettings {
    /// Infidelity of the composite reflection at area `area` (rad) and
    /// detuning `detuning_over_omega` in units of the rms peak coupling.
    pub fn point_infidelity(
        &self,
        family: &PhaseList,
        hr_phase: f64,
        area: f64,
        detuning_over_omega: f64,
    ) -> Result<f64> {
        let sys = &self.system;
        let detuning = detuning_over_omega * sys.rms_peak();
        let actual = match self.method {
            ScanMethod::Shortcut => {
                ms_shortcut_hr(sys, family, hr_phase, area, detuning, self.substeps)?
            }
            ScanMethod::Full => {
                composite_hr_with(sys, family, hr_phase, area, detuning, self.substeps)?
            }
        };
        let target = householder_matrix(&HouseholderTarget::new(sys.bright_vector(), hr_phase)?)?;
        infidelity(&actual, &target)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanColumn {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub grid: ScanGrid,
    pub hr_phase: f64,
    /// One column per family; 2D values are row-major, axis1 outermost.
    pub columns: Vec<ScanColumn>,
}

/// Column label used in 1D CSV headers: `F_n3` for broadband, `F_n5v2` for
/// universal lists.
pub fn column_label(family: &PhaseList) -> String {
    match family.family() {
        Family::Bb => format!("F_n{}", family.n()),
        Family::Universal => format!("F_n{}v{}", family.n(), family.variant()),
    }
}

/// Infidelity versus rms pulse area for each family.
pub fn scan_area(
    families: &[PhaseList],
    hr_phase: f64,
    grid: &ScanGrid,
    settings: &ScanSettings,
) -> Result<ScanResult> {
    grid.axis1.validate()?;
    if grid.axis1.name != AxisName::AreaOverPi || grid.axis2.is_some() {
        return Err(Error::validation(
            "scan_area needs a single area_over_pi axis",
        ));
    }
    if families.is_empty() {
        return Err(Error::validation("scan_area needs at least one family"));
    }
    let areas = grid.axis1.values();
    let columns = families
        .iter()
        .map(|family| {
            let values = areas
                .par_iter()
                .map(|&a| settings.point_infidelity(family, hr_phase, a * PI, 0.0))
                .collect::<Result<Vec<f64>>>()?;
            Ok(ScanColumn {
                label: column_label(family),
                values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        grid: grid.clone(),
        hr_phase,
        columns,
    })
}

/// Infidelity over the (area, detuning) plane.
pub fn scan_2d(
    family: &PhaseList,
    hr_phase: f64,
    grid: &ScanGrid,
    settings: &ScanSettings,
) -> Result<ScanResult> {
    let axis2 = grid
        .axis2
        .as_ref()
        .ok_or_else(|| Error::validation("scan_2d needs two axes"))?;
    grid.axis1.validate()?;
    axis2.validate()?;
    if grid.axis1.name != AxisName::AreaOverPi || axis2.name != AxisName::DetuningOverOmega {
        return Err(Error::validation(
            "scan_2d axes must be area_over_pi then detuning_over_omega",
        ));
    }
    let areas = grid.axis1.values();
    let detunings = axis2.values();
    let points: Vec<(f64, f64)> = areas
        .iter()
        .flat_map(|&a| detunings.iter().map(move |&d| (a, d)))
        .collect();
    let values = points
        .par_iter()
        .map(|&(a, d)| settings.point_infidelity(family, hr_phase, a * PI, d))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScanResult {
        grid: grid.clone(),
        hr_phase,
        columns: vec![ScanColumn {
            label: family.label(),
            values,
        }],
    })
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

impl ScanResult {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let axis1 = self.grid.axis1.values();
        match &self.grid.axis2 {
            None => {
                let mut header = vec![self.grid.axis1.name.csv_header().to_string()];
                header.extend(self.columns.iter().map(|c| c.label.clone()));
                writeln!(out, "{}", header.join(","))?;
                for (i, a) in axis1.iter().enumerate() {
                    let mut row = vec![fmt17(*a)];
                    row.extend(self.columns.iter().map(|c| fmt17(c.values[i])));
                    writeln!(out, "{}", row.join(","))?;
                }
            }
            Some(axis2) => {
                writeln!(
                    out,
                    "{},{},F",
                    self.grid.axis1.name.csv_header(),
                    axis2.name.csv_header()
                )?;
                let axis2 = axis2.values();
                let values = &self.columns[0].values;
                for (i, a) in axis1.iter().enumerate() {
                    for (j, d) in axis2.iter().enumerate() {
                        let f = values[i * axis2.len() + j];
                        writeln!(out, "{},{},{}", fmt17(*a), fmt17(*d), fmt17(f))?;
                    }
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Width of the contiguous region `{x : f(x) < threshold}` that contains
/// `center`, with the two boundary crossings located by linear interpolation
/// in `log f`. Returns 0 when `f(center) >= threshold`.
pub fn plateau_width(xs: &[f64], fs: &[f64], threshold: f64, center: f64) -> f64 {
    assert_eq!(xs.len(), fs.len());
    if xs.is_empty() {
        return 0.0;
    }
    let c = (0..xs.len())
        .min_by(|&i, &j| (xs[i] - center).abs().total_cmp(&(xs[j] - center).abs()))
        .unwrap();
    if fs[c] >= threshold {
        return 0.0;
    }
    let crossing = |inside: usize, outside: usize| -> f64 {
        let (lf_in, lf_out) = (fs[inside].max(1e-300).ln(), fs[outside].ln());
        let t = (threshold.ln() - lf_in) / (lf_out - lf_in);
        xs[inside] + t * (xs[outside] - xs[inside])
    };
    let mut lo = c;
    while lo > 0 && fs[lo - 1] < threshold {
        lo -= 1;
    }
    let mut hi = c;
    while hi + 1 < xs.len() && fs[hi + 1] < threshold {
        hi += 1;
    }
    let left = if lo > 0 { crossing(lo, lo - 1) } else { xs[0] };
    let right = if hi + 1 < xs.len() {
        crossing(hi, hi + 1)
    } else {
        xs[xs.len() - 1]
    };
    right - left
}
