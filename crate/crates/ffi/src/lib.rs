//! C interface to `xyquench`.
//!
//! Every function returns an [`XyqStatus`]; on failure a description is
//! available from [`xyq_last_error_message`] on the same thread. Output
//! structs are written only on success. Scans are returned as opaque
//! [`XyqScan`] handles that must be released with [`xyq_scan_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xyquench::entanglement::Detection;
use xyquench::output::write_scan_csv;
use xyquench::{
    analyze_with_threshold, nn_correlators, run_scan, thermalization_temperature, AxisRange, CorrelatorSet, Error,
    ModeWeight, ModelParams, QuadratureSpec, QuenchSpec, ScanConfig, ScanOutput, WitnessReport,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XyqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    QuadratureFailed = 4,
    Unphysical = 5,
    NoConvergence = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XyqEnsembleKind {
    Ground = 0,
    Thermal = 1,
    Gge = 2,
}

/// `temperature` is read for `Thermal`, `gamma0` and `h0` for `Gge`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct XyqEnsemble {
    pub kind: XyqEnsembleKind,
    pub temperature: f64,
    pub gamma0: f64,
    pub h0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XyqCorrelators {
    pub g_c: f64,
    pub g_s: f64,
    pub g_0: f64,
    pub sxsx: f64,
    pub sysy: f64,
    pub szsz: f64,
    pub sz: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XyqDetection {
    Undetected = 0,
    ByMu1 = 1,
    ByMu2 = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyqWitness {
    pub mu1: f64,
    pub mu2: f64,
    pub negativity: f64,
    pub detection: XyqDetection,
}

/// `t_th` is `0` for a trivial quench and `+inf` when the GGE carries no
/// mode energy.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XyqThermalization {
    pub t_th: f64,
    pub lhs: f64,
    pub ground: f64,
    pub residual: f64,
}

/// A negative `gamma0` means "same as `gamma`"; `threads == 0` uses all
/// available cores.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct XyqScanConfig {
    pub gamma: f64,
    pub gamma0: f64,
    pub h0_lo: f64,
    pub h0_hi: f64,
    pub h0_n: usize,
    pub h_lo: f64,
    pub h_hi: f64,
    pub h_n: usize,
    pub detection_threshold: f64,
    pub threads: usize,
}

/// One scan cell; the witnesses and `t_th` are meaningful only when
/// `status == Ok`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyqCell {
    pub h0: f64,
    pub h: f64,
    pub t_th: f64,
    pub prethermal: XyqWitness,
    pub thermal: XyqWitness,
    pub status: XyqStatus,
}

/// Completed scan.
pub struct XyqScan {
    inner: ScanOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> XyqStatus {
    match e {
        Error::InvalidParameter(_) | Error::ParamsMismatch { .. } | Error::NotSymmetric { .. } => {
            XyqStatus::InvalidArgument
        }
        Error::DegenerateMode { .. } => XyqStatus::Degenerate,
        Error::QuadratureFailed { .. } | Error::NonFiniteIntegrand { .. } => XyqStatus::QuadratureFailed,
        Error::Unphysical { .. } | Error::InconsistentEnergy { .. } => XyqStatus::Unphysical,
        Error::NotBracketed { .. } | Error::NoConvergence { .. } => XyqStatus::NoConvergence,
    }
}

struct Fail(XyqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> XyqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => XyqStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_last_error(&msg);
            s
        }
        Err(_) => {
            set_last_error("internal panic");
            XyqStatus::Panic
        }
    }
}

fn null(name: &str) -> Fail {
    Fail(XyqStatus::NullPointer, format!("{name} is null"))
}

fn witness(r: &WitnessReport) -> XyqWitness {
    XyqWitness {
        mu1: r.mu1,
        mu2: r.mu2,
        negativity: r.negativity,
        detection: match r.detection {
            Detection::Undetected => XyqDetection::Undetected,
            Detection::ByMu1 => XyqDetection::ByMu1,
            Detection::ByMu2 => XyqDetection::ByMu2,
        },
    }
}

/// Nearest-neighbor correlators of the state `ensemble` of the chain
/// `(gamma, h)`.
///
/// # Safety
/// `ensemble` and `out` must be null or valid for reads/writes.
#[no_mangle]
pub unsafe extern "C" fn xyq_correlators(
    gamma: f64,
    h: f64,
    ensemble: *const XyqEnsemble,
    out: *mut XyqCorrelators,
) -> XyqStatus {
    guard(|| {
        let e = ensemble.as_ref().ok_or_else(|| null("ensemble"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let params = ModelParams::new(gamma, h)?;
        let w = match e.kind {
            XyqEnsembleKind::Ground => ModeWeight::GroundState,
            XyqEnsembleKind::Thermal => ModeWeight::thermal(e.temperature)?,
            XyqEnsembleKind::Gge => ModeWeight::Gge(QuenchSpec::new(ModelParams::new(e.gamma0, e.h0)?, params)),
        };
        let c = nn_correlators(&params, &w, &QuadratureSpec::default())?;
        *out = XyqCorrelators {
            g_c: c.g_c,
            g_s: c.g_s,
            g_0: c.g_0,
            sxsx: c.sxsx,
            sysy: c.sysy,
            szsz: c.szsz,
            sz: c.sz,
        };
        Ok(())
    })
}

/// Witness report of a correlator set. Only `sxsx`, `sysy`, `szsz` and `sz`
/// are read.
///
/// # Safety
/// `correlators` and `out` must be null or valid for reads/writes.
#[no_mangle]
pub unsafe extern "C" fn xyq_analyze(
    correlators: *const XyqCorrelators,
    threshold: f64,
    out: *mut XyqWitness,
) -> XyqStatus {
    guard(|| {
        let c = correlators.as_ref().ok_or_else(|| null("correlators"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let set = CorrelatorSet::from_spin_correlations(c.sxsx, c.sysy, c.szsz, c.sz);
        *out = witness(&analyze_with_threshold(&set, threshold)?);
        Ok(())
    })
}

/// Thermalization temperature of the quench `(gamma0, h0) -> (gamma, h)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xyq_thermalization_temperature(
    gamma0: f64,
    h0: f64,
    gamma: f64,
    h: f64,
    out: *mut XyqThermalization,
) -> XyqStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let q = QuenchSpec::new(ModelParams::new(gamma0, h0)?, ModelParams::new(gamma, h)?);
        let th = thermalization_temperature(&q, &QuadratureSpec::default())?;
        *out = XyqThermalization {
            t_th: th.temperature.value(),
            lhs: th.target,
            ground: th.ground,
            residual: th.residual,
        };
        Ok(())
    })
}

/// Runs a scan and stores a new handle in `*out`. Individual cell failures do
/// not fail the call.
///
/// # Safety
/// `config` must be null or valid for reads, `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xyq_scan_run(config: *const XyqScanConfig, out: *mut *mut XyqScan) -> XyqStatus {
    guard(|| {
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let mut cfg = ScanConfig::new(c.gamma);
        cfg.gamma0 = (c.gamma0 >= 0.0).then_some(c.gamma0);
        cfg.h0_range = AxisRange::new(c.h0_lo, c.h0_hi, c.h0_n)?;
        cfg.h_range = AxisRange::new(c.h_lo, c.h_hi, c.h_n)?;
        cfg.detection_threshold = c.detection_threshold;
        cfg.validate()?;
        let pool = rayon_pool(c.threads)?;
        let inner = pool.install(|| run_scan(&cfg, |_, _| {}))?;
        *out = Box::into_raw(Box::new(XyqScan { inner }));
        Ok(())
    })
}

fn rayon_pool(threads: usize) -> Result<rayon::ThreadPool, Fail> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Fail(XyqStatus::InvalidArgument, format!("thread pool: {e}")))
}

/// # Safety
/// `scan` must be null or a live handle; `rows`, `cols` null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn xyq_scan_dims(scan: *const XyqScan, rows: *mut usize, cols: *mut usize) -> XyqStatus {
    guard(|| {
        let s = scan.as_ref().ok_or_else(|| null("scan"))?;
        let rows = rows.as_mut().ok_or_else(|| null("rows"))?;
        let cols = cols.as_mut().ok_or_else(|| null("cols"))?;
        (*rows, *cols) = s.inner.dims();
        Ok(())
    })
}

/// Cell `(i, j)`: `i` indexes `h0`, `j` indexes `h`.
///
/// # Safety
/// `scan` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn xyq_scan_cell(scan: *const XyqScan, i: usize, j: usize, out: *mut XyqCell) -> XyqStatus {
    guard(|| {
        let s = scan.as_ref().ok_or_else(|| null("scan"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (rows, cols) = s.inner.dims();
        if i >= rows || j >= cols {
            return Err(Fail(
                XyqStatus::InvalidArgument,
                format!("cell ({i}, {j}) outside {rows} x {cols} grid"),
            ));
        }
        let e = s.inner.cell(i, j);
        let blank = XyqWitness {
            mu1: f64::NAN,
            mu2: f64::NAN,
            negativity: f64::NAN,
            detection: XyqDetection::Undetected,
        };
        *out = match &e.result {
            Ok(c) => XyqCell {
                h0: e.h0,
                h: e.h,
                t_th: c.t_th,
                prethermal: witness(&c.prethermal),
                thermal: witness(&c.thermal),
                status: XyqStatus::Ok,
            },
            Err(err) => XyqCell {
                h0: e.h0,
                h: e.h,
                t_th: f64::NAN,
                prethermal: blank,
                thermal: blank,
                status: status_of(err),
            },
        };
        Ok(())
    })
}

/// Writes the scan CSV to `path` (UTF-8).
///
/// # Safety
/// `scan` must be null or a live handle; `path` null or a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn xyq_scan_write_csv(scan: *const XyqScan, path: *const c_char) -> XyqStatus {
    guard(|| {
        let s = scan.as_ref().ok_or_else(|| null("scan"))?;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|e| Fail(XyqStatus::InvalidArgument, format!("path: {e}")))?;
        let f = File::create(path).map_err(|e| Fail(XyqStatus::Io, format!("{path}: {e}")))?;
        write_scan_csv(BufWriter::new(f), &s.inner).map_err(|e| Fail(XyqStatus::Io, e.to_string()))
    })
}

/// Releases a handle from [`xyq_scan_run`]. Null is ignored.
///
/// # Safety
/// `scan` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xyq_scan_free(scan: *mut XyqScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}

/// Message of the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn xyq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xyq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
