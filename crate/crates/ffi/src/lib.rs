//! C ABI for the `anharmonic` library.
//!
//! Potentials are opaque [`AhPotential`] handles created by
//! [`ah_potential_parse`] and released with [`ah_potential_free`]. Every
//! fallible function returns an [`AhStatus`]; on failure a description is
//! available from [`ah_last_error_message`] on the same thread. Output
//! pointers are written only on success, except the length reported by
//! [`ah_potential_format`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use anharmonic::measures::{measure_report, MomentsRoute};
use anharmonic::numerics::{DEFAULT_GRID_POINTS, DEFAULT_TARGET_TAIL};
use anharmonic::perturbation::{alpha_coefficients, eta_b_perturbative, eta_ng_perturbative, parametric_curve};
use anharmonic::potentials::{ground_energy, reference_frequency};
use anharmonic::specfun::entropy_h;
use anharmonic::{Error, GridOptions, PotentialSpec};
use libc::{c_char, size_t};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidSpec = 4,
    PerturbativeGuard = 5,
    Unsupported = 6,
    Grid = 7,
    Numeric = 8,
    Domain = 9,
    InvalidArgument = 10,
    BufferTooSmall = 11,
    Panic = 99,
}

impl From<&Error> for AhStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => AhStatus::Parse,
            Error::InvalidSpec(_) => AhStatus::InvalidSpec,
            Error::PerturbativeGuard { .. } => AhStatus::PerturbativeGuard,
            Error::Unsupported(_) => AhStatus::Unsupported,
            Error::InvalidGrid(_)
            | Error::GridExhausted { .. }
            | Error::TailCondition { .. }
            | Error::ZeroNorm
            | Error::NotNormalized
            | Error::IncompatibleDomain => AhStatus::Grid,
            Error::GammaPole(_)
            | Error::GammaOverflow(_)
            | Error::KummerPole(_)
            | Error::KummerNonConvergence { .. }
            | Error::Convergence(_)
            | Error::FockTruncation(_) => AhStatus::Numeric,
            Error::EntropyDomain(_) | Error::UnphysicalCovariance(_) | Error::SingularCovariance(_) => AhStatus::Domain,
            Error::InvalidArgument(_) | Error::Io(_) => AhStatus::InvalidArgument,
        }
    }
}

/// Opaque handle to a validated-shape potential.
pub struct AhPotential {
    spec: PotentialSpec,
}

/// Measures of one potential. Fields that have no value are NaN and the
/// matching flag is false.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AhMeasureReport {
    pub eta_b: f64,
    pub eta_ng: f64,
    pub omega_r: f64,
    pub ground_energy: f64,
    pub det_sigma: f64,
    pub fidelity_to_reference: f64,
    /// True when a reference frequency exists, so `eta_b`, `omega_r` and
    /// `fidelity_to_reference` are set.
    pub has_reference: bool,
    /// True when the covariance came from closed-form moments instead of quadrature.
    pub closed_form_moments: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(AhStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(AhStatus::from(&e), e.to_string())
    }
}

fn null_pointer(name: &str) -> Failure {
    Failure(AhStatus::NullPointer, format!("{name} is NULL"))
}

/// Runs `body`, converting errors and panics into a status and a stored message.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> AhStatus {
    let outcome =
        catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| Err(Failure(AhStatus::Panic, "internal panic".into())));
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            AhStatus::Ok
        }
        Err(Failure(status, message)) => {
            set_last_error(message);
            status
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null_pointer(name));
    }
    CStr::from_ptr(text).to_str().map_err(|e| Failure(AhStatus::InvalidUtf8, format!("{name} is not UTF-8: {e}")))
}

unsafe fn potential<'a>(p: *const AhPotential) -> Result<&'a PotentialSpec, Failure> {
    p.as_ref().map(|h| &h.spec).ok_or_else(|| null_pointer("potential"))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null_pointer(name));
    }
    out.write(value);
    Ok(())
}

/// Message describing the most recent call on this thread, or NULL if it
/// succeeded. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ah_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ah_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a text spec such as `morse:D=1,alpha=0.5` into a new handle.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ah_potential_parse(text: *const c_char, out: *mut *mut AhPotential) -> AhStatus {
    guarded(|| {
        let text = read_str(text, "text")?;
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let spec: PotentialSpec = text.parse()?;
        out.write(Box::into_raw(Box::new(AhPotential { spec })));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `p` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ah_potential_free(p: *mut AhPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Copy of `p` with parameter `name` replaced by `value`.
///
/// # Safety
/// `p` must be a live handle or NULL, `name` a NUL-terminated string or
/// NULL, and `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_potential_with_parameter(
    p: *const AhPotential,
    name: *const c_char,
    value: f64,
    out: *mut *mut AhPotential,
) -> AhStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let spec = potential(p)?.with_parameter(read_str(name, "name")?, value)?;
        out.write(Box::into_raw(Box::new(AhPotential { spec })));
        Ok(())
    })
}

/// Writes the canonical text form of `p` into `buf` (NUL-terminated) and
/// its length without the NUL into `required`. Returns
/// `AH_STATUS_BUFFER_TOO_SMALL` if `buf_len <= required`; `buf` may be NULL
/// when only the length is wanted.
///
/// # Safety
/// `buf` must be NULL or writable for `buf_len` bytes; `required` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ah_potential_format(
    p: *const AhPotential,
    buf: *mut c_char,
    buf_len: size_t,
    required: *mut size_t,
) -> AhStatus {
    guarded(|| {
        let text = potential(p)?.to_string();
        write(required, text.len(), "required")?;
        if buf.is_null() || buf_len <= text.len() {
            return Err(Failure(AhStatus::BufferTooSmall, format!("need {} bytes", text.len() + 1)));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        buf.add(text.len()).write(0);
        Ok(())
    })
}

/// Evaluates both measures. `n_points == 0` and `target_tail <= 0` select
/// the library defaults.
///
/// # Safety
/// `p` must be a live handle or NULL; `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_measure(
    p: *const AhPotential,
    n_points: size_t,
    target_tail: f64,
    out: *mut AhMeasureReport,
) -> AhStatus {
    guarded(|| {
        let options = GridOptions {
            n_points: if n_points == 0 { DEFAULT_GRID_POINTS } else { n_points },
            target_tail: if target_tail > 0.0 { target_tail } else { DEFAULT_TARGET_TAIL },
        };
        let r = measure_report(potential(p)?, &options)?;
        let report = AhMeasureReport {
            eta_b: r.eta_b.unwrap_or(f64::NAN),
            eta_ng: r.eta_ng,
            omega_r: r.omega_r.unwrap_or(f64::NAN),
            ground_energy: r.ground_energy,
            det_sigma: r.det_sigma,
            fidelity_to_reference: r.fidelity_to_reference.unwrap_or(f64::NAN),
            has_reference: r.omega_r.is_some(),
            closed_form_moments: r.diagnostics.moments == MomentsRoute::ClosedForm,
        };
        write(out, report, "out")
    })
}

/// Reference frequency of `p`; `present` is false (and `omega` NaN) where none exists.
///
/// # Safety
/// `p` must be a live handle or NULL; outputs writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_reference_frequency(
    p: *const AhPotential,
    omega: *mut f64,
    present: *mut bool,
) -> AhStatus {
    guarded(|| {
        let w = reference_frequency(potential(p)?)?;
        if omega.is_null() || present.is_null() {
            return Err(null_pointer("output"));
        }
        omega.write(w.unwrap_or(f64::NAN));
        present.write(w.is_some());
        Ok(())
    })
}

/// Analytic ground-state energy of a catalog potential.
///
/// # Safety
/// `p` must be a live handle or NULL; `out` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_ground_energy(p: *const AhPotential, out: *mut f64) -> AhStatus {
    guarded(|| write(out, ground_energy(potential(p)?)?, "out"))
}

/// `h(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)` for `x >= 1/2`.
///
/// # Safety
/// `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_entropy_h(x: f64, out: *mut f64) -> AhStatus {
    guarded(|| write(out, entropy_h(x)?, "out"))
}

/// First-order perturbative `eta_b` and `eta_ng` for `eps3 x^3 + eps4 x^4`.
///
/// # Safety
/// Outputs must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_perturbative(
    eps3: f64,
    eps4: f64,
    omega: f64,
    eta_b: *mut f64,
    eta_ng: *mut f64,
) -> AhStatus {
    guarded(|| {
        let state = alpha_coefficients(eps3, eps4, omega)?;
        let ng = eta_ng_perturbative(&state)?;
        if eta_b.is_null() || eta_ng.is_null() {
            return Err(null_pointer("output"));
        }
        eta_b.write(eta_b_perturbative(&state));
        eta_ng.write(ng);
        Ok(())
    })
}

/// Corrected and printed `eta_ng(eta_b)` curve values; `has_printed` is
/// false (and `printed` NaN) where the printed form is not evaluable.
///
/// # Safety
/// Outputs must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn ah_parametric_curve(
    eta_b: f64,
    corrected: *mut f64,
    printed: *mut f64,
    has_printed: *mut bool,
) -> AhStatus {
    guarded(|| {
        let point = parametric_curve(eta_b)?;
        if corrected.is_null() || printed.is_null() || has_printed.is_null() {
            return Err(null_pointer("output"));
        }
        corrected.write(point.corrected);
        printed.write(point.printed.unwrap_or(f64::NAN));
        has_printed.write(point.printed.is_some());
        Ok(())
    })
}
