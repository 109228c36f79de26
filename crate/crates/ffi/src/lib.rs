//! C interface to `pwsample`.
//!
//! Objects are opaque handles created by `pws_*_new`/`pws_build_*` and
//! released with the matching `*_free`. Every call returns a [`PwsStatus`];
//! on failure [`pws_last_error`] describes the error for the calling
//! thread. Strings handed out by the library are freed with
//! [`pws_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pwsample::construct::{build_bessel, build_riesz, build_sampling, ConstructionReport, SamplingSet, SetKind};
use pwsample::spectrum::{quantize_outer, GridSpectrum, Spectrum};
use pwsample::verify::{duality_check, riesz_bounds, sampling_bounds};
use pwsample::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSpectrum = 3,
    PeriodMismatch = 4,
    CertificateFailed = 5,
    NumericalFailure = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A grid spectrum `S = ∪_{r∈I} [2πr/m, 2π(r+1)/m]`.
pub struct PwsSpectrum(GridSpectrum);

/// A constructed set with its certified bounds.
pub struct PwsReport(ConstructionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PwsStatus {
    match e {
        Error::InvalidIntervals(_)
        | Error::InvalidGrid(_)
        | Error::NoCellFits { .. }
        | Error::EmptyComplement
        | Error::ResidueOutOfRange { .. }
        | Error::DuplicateResidue(_)
        | Error::Parse(_) => PwsStatus::InvalidSpectrum,
        Error::PeriodMismatch { .. } => PwsStatus::PeriodMismatch,
        Error::CertificateFailed { .. } => PwsStatus::CertificateFailed,
        Error::NotHermitian { .. }
        | Error::EigenFailed
        | Error::ShiftInsideSpectrum { .. }
        | Error::NoFeasibleCandidate { .. } => PwsStatus::NumericalFailure,
        _ => PwsStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (PwsStatus, String)>) -> PwsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PwsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            PwsStatus::Panic
        }
    }
}

fn lib(e: Error) -> (PwsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PwsStatus, String) {
    (PwsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (PwsStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (PwsStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PwsStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pws_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a grid spectrum of order `m` from `len` cell residues.
///
/// # Safety
/// `cells` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pws_spectrum_new(
    m: usize,
    cells: *const usize,
    len: usize,
    out: *mut *mut PwsSpectrum,
) -> PwsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cells = slice(cells, len, "cells")?.to_vec();
        let g = GridSpectrum::new(m, cells).map_err(lib)?;
        *out = Box::into_raw(Box::new(PwsSpectrum(g)));
        Ok(())
    })
}

/// Parses a JSON spectrum descriptor. Interval descriptors are covered by
/// grid cells of order `m`; `m` is ignored for grid descriptors.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pws_spectrum_from_json(
    json: *const c_char,
    m: usize,
    out: *mut *mut PwsSpectrum,
) -> PwsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text =
            CStr::from_ptr(json).to_str().map_err(|_| (PwsStatus::InvalidArgument, "json is not UTF-8".to_string()))?;
        let g = match Spectrum::from_json(text).map_err(lib)? {
            Spectrum::Grid(g) => g,
            Spectrum::Intervals(s) => quantize_outer(&s, m).map_err(lib)?,
        };
        *out = Box::into_raw(Box::new(PwsSpectrum(g)));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pws_spectrum_free(spectrum: *mut PwsSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Grid order `m` and cell count `n`.
///
/// # Safety
/// `spectrum` must be a live handle; `m` and `n` writable or null.
#[no_mangle]
pub unsafe extern "C" fn pws_spectrum_size(spectrum: *const PwsSpectrum, m: *mut usize, n: *mut usize) -> PwsStatus {
    guard(|| {
        let g = &handle(spectrum, "spectrum")?.0;
        if let Some(m) = m.as_mut() {
            *m = g.m();
        }
        if let Some(n) = n.as_mut() {
            *n = g.n();
        }
        Ok(())
    })
}

unsafe fn build(
    spectrum: *const PwsSpectrum,
    out: *mut *mut PwsReport,
    f: impl FnOnce(&GridSpectrum) -> pwsample::Result<ConstructionReport>,
) -> PwsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = &handle(spectrum, "spectrum")?.0;
        let report = f(g).map_err(lib)?;
        *out = Box::into_raw(Box::new(PwsReport(report)));
        Ok(())
    })
}

/// Sampling set with `|J| ≤ ⌈(1+d)n⌉` and certified lower bound
/// `≥ C(d)·n/m`.
///
/// # Safety
/// `spectrum` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pws_build_sampling(
    spectrum: *const PwsSpectrum,
    d: f64,
    out: *mut *mut PwsReport,
) -> PwsStatus {
    build(spectrum, out, |g| build_sampling(g, d))
}

/// Bessel set of `k` residues; `k = 0` selects the default `n + 1`.
///
/// # Safety
/// `spectrum` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pws_build_bessel(
    spectrum: *const PwsSpectrum,
    k: usize,
    out: *mut *mut PwsReport,
) -> PwsStatus {
    build(spectrum, out, |g| build_bessel(g, (k > 0).then_some(k)))
}

/// Riesz set with `|J| ≥ ⌈(1−d)n⌉` and certified lower bound
/// `≥ (1−√(1−d))²·n/m`, for `0 < d < 1`.
///
/// # Safety
/// `spectrum` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pws_build_riesz(spectrum: *const PwsSpectrum, d: f64, out: *mut *mut PwsReport) -> PwsStatus {
    build(spectrum, out, |g| build_riesz(g, d))
}

/// # Safety
/// `report` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pws_report_free(report: *mut PwsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Certified bounds and the overall pass flag (`1` or `0`).
///
/// # Safety
/// `report` must be a live handle; outputs writable or null.
#[no_mangle]
pub unsafe extern "C" fn pws_report_bounds(
    report: *const PwsReport,
    lower: *mut f64,
    upper: *mut f64,
    pass: *mut i32,
) -> PwsStatus {
    guard(|| {
        let r = &handle(report, "report")?.0;
        if let Some(x) = lower.as_mut() {
            *x = r.certified_lower;
        }
        if let Some(x) = upper.as_mut() {
            *x = r.certified_upper;
        }
        if let Some(x) = pass.as_mut() {
            *x = r.pass as i32;
        }
        Ok(())
    })
}

/// Copies the residues `J` into `buf`. `len` always receives `|J|`; when
/// `cap < |J|` nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `report` must be a live handle; `buf` writable for `cap` values;
/// `len` writable.
#[no_mangle]
pub unsafe extern "C" fn pws_report_residues(
    report: *const PwsReport,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> PwsStatus {
    guard(|| {
        let r = &handle(report, "report")?.0;
        let len = out_ptr(len, "len")?;
        let residues = r.set.residues();
        *len = residues.len();
        if cap < residues.len() {
            return Err((PwsStatus::BufferTooSmall, format!("need {} slots, got {cap}", residues.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(residues.as_ptr(), buf, residues.len());
        Ok(())
    })
}

/// The full report as JSON; free with [`pws_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pws_report_to_json(report: *const PwsReport, out: *mut *mut c_char) -> PwsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let r = &handle(report, "report")?.0;
        let text = serde_json::to_string(r).map_err(|e| (PwsStatus::InvalidArgument, e.to_string()))?;
        *out = CString::new(text).map_err(|e| (PwsStatus::InvalidArgument, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact bounds of `Λ = J + mℤ`. With `riesz = 0` these are the sampling
/// bounds for `PW_S`; otherwise the Riesz bounds of `{e^{iγt}}_{γ∈Λ}` in
/// `L²(S)`.
///
/// # Safety
/// `spectrum` must be a live handle; `residues` readable for `len`
/// values; outputs writable or null.
#[no_mangle]
pub unsafe extern "C" fn pws_bounds(
    spectrum: *const PwsSpectrum,
    residues: *const usize,
    len: usize,
    riesz: i32,
    lower: *mut f64,
    upper: *mut f64,
) -> PwsStatus {
    guard(|| {
        let g = &handle(spectrum, "spectrum")?.0;
        let j = slice(residues, len, "residues")?.to_vec();
        let kind = if riesz != 0 { SetKind::Riesz } else { SetKind::Sampling };
        let set = SamplingSet::new(g.m(), j, kind).map_err(lib)?;
        let b = if riesz != 0 { riesz_bounds(g, &set) } else { sampling_bounds(g, &set) }.map_err(lib)?;
        if let Some(x) = lower.as_mut() {
            *x = b.lower;
        }
        if let Some(x) = upper.as_mut() {
            *x = b.upper;
        }
        Ok(())
    })
}

/// Sampling bound `B` of `(S, J + mℤ)` and Riesz bound `A` of the
/// complementary exponentials in `L²(T ∖ S)`. `A` is `+inf` when `J`
/// contains every residue.
///
/// # Safety
/// As for [`pws_bounds`].
#[no_mangle]
pub unsafe extern "C" fn pws_duality(
    spectrum: *const PwsSpectrum,
    residues: *const usize,
    len: usize,
    b: *mut f64,
    a: *mut f64,
) -> PwsStatus {
    guard(|| {
        let g = &handle(spectrum, "spectrum")?.0;
        let j = slice(residues, len, "residues")?.to_vec();
        let set = SamplingSet::new(g.m(), j, SetKind::Sampling).map_err(lib)?;
        let r = duality_check(g, &set).map_err(lib)?;
        if let Some(x) = b.as_mut() {
            *x = r.b;
        }
        if let Some(x) = a.as_mut() {
            *x = r.a.unwrap_or(f64::INFINITY);
        }
        Ok(())
    })
}
