//! C ABI for `composite-hr`.
//!
//! Conventions:
//! - every fallible call returns a [`ChrStatus`]; on failure
//!   [`chr_last_error`] describes the problem for the calling thread;
//! - systems are opaque [`ChrSystem`] handles created by `chr_system_*` and
//!   released with [`chr_system_free`];
//! - complex matrices are written as split real/imaginary row-major arrays
//!   whose length the caller passes in;
//! - angles are in radians.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use composite_hr::composite::{Family, PhaseList};
use composite_hr::config::HrConfig;
use composite_hr::metrics::infidelity;
use composite_hr::npod::composite_hr_with;
use composite_hr::{
    bb_infidelity_analytic, householder_matrix, CMatrix, CVector, Error, HouseholderTarget,
    NPodSystem, PulseShape, C64,
};

pub const CHR_FAMILY_BB: u32 = 0;
pub const CHR_FAMILY_UNIVERSAL: u32 = 1;

/// Status codes. Validation and I/O match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChrStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Io = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Opaque N-pod system handle.
pub struct ChrSystem {
    inner: NPodSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: ChrStatus, msg: impl Into<String>) -> ChrStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> ChrStatus {
    let status = match e.exit_code() {
        3 => ChrStatus::Io,
        _ => ChrStatus::Validation,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ChrStatus>) -> ChrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChrStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(ChrStatus::Panic, "internal panic"),
    }
}

fn family_from(code: u32) -> Result<Family, ChrStatus> {
    match code {
        CHR_FAMILY_BB => Ok(Family::Bb),
        CHR_FAMILY_UNIVERSAL => Ok(Family::Universal),
        other => Err(fail(
            ChrStatus::Validation,
            format!("unknown family code {other}"),
        )),
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize) -> Result<&'a [T], ChrStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(ChrStatus::NullPointer, "null input array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, needed: usize) -> Result<&'a mut [T], ChrStatus> {
    if p.is_null() {
        return Err(fail(ChrStatus::NullPointer, "null output array"));
    }
    if len < needed {
        return Err(fail(
            ChrStatus::BufferTooSmall,
            format!("output buffer holds {len} values, {needed} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn write_matrix(
    m: &CMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> Result<(), ChrStatus> {
    let needed = m.rows() * m.cols();
    let re = slice_out(re, len, needed)?;
    let im = slice_out(im, len, needed)?;
    for (k, z) in m.as_slice().iter().enumerate() {
        re[k] = z.re;
        im[k] = z.im;
    }
    Ok(())
}

unsafe fn handle_ref<'a>(sys: *const ChrSystem) -> Result<&'a ChrSystem, ChrStatus> {
    sys.as_ref()
        .ok_or_else(|| fail(ChrStatus::NullPointer, "null system handle"))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next `chr_*` call on the same thread.
#[no_mangle]
pub extern "C" fn chr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a rectangular-pulse system from `n` couplings and coupling phases.
///
/// # Safety
/// `couplings` and `phases` must point to `n` readable doubles; `out` must be
/// a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn chr_system_new(
    couplings: *const f64,
    phases: *const f64,
    n: usize,
    detuning: f64,
    out: *mut *mut ChrSystem,
) -> ChrStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(ChrStatus::NullPointer, "null output handle"));
        }
        let chi = slice_in(couplings, n)?.to_vec();
        let beta = slice_in(phases, n)?.to_vec();
        let inner =
            NPodSystem::new(chi, beta, PulseShape::Rectangular, detuning).map_err(from_error)?;
        *out = Box::into_raw(Box::new(ChrSystem { inner }));
        Ok(())
    })
}

/// Creates a system from a JSON run configuration (the CLI `hr` format).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn chr_system_from_json(
    json: *const c_char,
    out: *mut *mut ChrSystem,
) -> ChrStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return Err(fail(ChrStatus::NullPointer, "null argument"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(ChrStatus::Validation, "config is not valid UTF-8"))?;
        let cfg = HrConfig::from_json(text).map_err(from_error)?;
        let inner = cfg.system().map_err(from_error)?;
        *out = Box::into_raw(Box::new(ChrSystem { inner }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `sys` must come from a `chr_system_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn chr_system_free(sys: *mut ChrSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Manifold dimension N, or 0 for a NULL handle.
///
/// # Safety
/// `sys` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chr_system_dim(sys: *const ChrSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.dim())
}

/// Switches the shared envelope to a Gaussian truncated at `truncation`
/// 1/e half-widths (`truncation <= 0` selects rectangular pulses).
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn chr_system_set_gaussian(
    sys: *mut ChrSystem,
    truncation: f64,
) -> ChrStatus {
    guard(|| {
        let sys = sys
            .as_mut()
            .ok_or_else(|| fail(ChrStatus::NullPointer, "null system handle"))?;
        let shape = if truncation > 0.0 {
            PulseShape::Gaussian { truncation }
        } else {
            PulseShape::Rectangular
        };
        shape.validate().map_err(from_error)?;
        sys.inner.shape = shape;
        Ok(())
    })
}

/// Writes the bright (Householder) vector `v` into `re`/`im` (length ≥ N).
///
/// # Safety
/// `sys` must be a live handle; `re`, `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn chr_bright_vector(
    sys: *const ChrSystem,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> ChrStatus {
    guard(|| {
        let v = handle_ref(sys)?.inner.bright_vector();
        let m = CMatrix::from_row_major(v.dim(), 1, v.as_slice().to_vec()).map_err(from_error)?;
        write_matrix(&m, re, im, len)
    })
}

/// Writes the `n` phases (radians) of a composite family into `out`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn chr_phase_list(
    family: u32,
    n: usize,
    variant: u32,
    out: *mut f64,
    len: usize,
) -> ChrStatus {
    guard(|| {
        let list = PhaseList::new(family_from(family)?, n, variant).map_err(from_error)?;
        let out = slice_out(out, len, list.n())?;
        out[..list.n()].copy_from_slice(list.phases());
        Ok(())
    })
}

/// Writes `I + (e^{iφ} - 1) v v†` (row-major, N×N) for the `n`-component
/// vector `v_re + i v_im`, which must be normalized.
///
/// # Safety
/// `v_re`, `v_im` must hold `n` doubles; `out_re`, `out_im` hold `len`.
#[no_mangle]
pub unsafe extern "C" fn chr_householder_matrix(
    v_re: *const f64,
    v_im: *const f64,
    n: usize,
    hr_phase: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
) -> ChrStatus {
    guard(|| {
        let re = slice_in(v_re, n)?;
        let im = slice_in(v_im, n)?;
        let v = CVector::new(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect());
        let target = HouseholderTarget { v, hr_phase };
        let m = householder_matrix(&target).map_err(from_error)?;
        write_matrix(&m, out_re, out_im, len)
    })
}

/// Simulates the composite reflection with phase `hr_phase` on `sys` by
/// full propagation, writing the N×N manifold block and its infidelity
/// against the target reflection. `substeps` applies to shaped pulses.
///
/// # Safety
/// `sys` must be a live handle; `out_re`, `out_im` must hold `len` doubles;
/// `infidelity_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn chr_composite_hr(
    sys: *const ChrSystem,
    family: u32,
    n: usize,
    variant: u32,
    hr_phase: f64,
    area: f64,
    detuning: f64,
    substeps: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
    infidelity_out: *mut f64,
) -> ChrStatus {
    guard(|| {
        let sys = &handle_ref(sys)?.inner;
        let list = PhaseList::new(family_from(family)?, n, variant).map_err(from_error)?;
        let actual = composite_hr_with(sys, &list, hr_phase, area, detuning, substeps)
            .map_err(from_error)?;
        write_matrix(&actual, out_re, out_im, len)?;
        if !infidelity_out.is_null() {
            let target = HouseholderTarget::new(sys.bright_vector(), hr_phase)
                .and_then(|t| householder_matrix(&t))
                .map_err(from_error)?;
            *infidelity_out = infidelity(&actual, &target).map_err(from_error)?;
        }
        Ok(())
    })
}

/// `2|sin(φ/2)| cos^{2n}(A/2)`.
#[no_mangle]
pub extern "C" fn chr_bb_infidelity_analytic(hr_phase: f64, area: f64, n: usize) -> f64 {
    bb_infidelity_analytic(hr_phase, area, n)
}
