//! C interface to `mtorus`.
//!
//! Specs and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Strings returned to C are released
//! with [`mt_string_free`]. Every fallible call returns an [`MtStatus`]; the
//! message for the last failure on the calling thread is available from
//! [`mt_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mtorus::cayley::Budget;
use mtorus::cli::{execute, input_digest, parse_spec, Command, Format, Options, Report, SpecFile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtCommand {
    Analyze = 0,
    Growth = 1,
    Certify = 2,
    Divergence = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtFormat {
    Text = 0,
    Structured = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MtOptions {
    pub max_n: u32,
    pub radius_min: u32,
    pub radius_max: u32,
    pub horizon: f64,
    pub power: u32,
    pub ball_budget: u64,
    pub word_cap: u64,
}

/// A parsed input file.
pub struct MtSpec {
    spec: SpecFile,
    digest: String,
}

/// The outcome of one command.
pub struct MtReport {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (MtStatus, String)>) -> MtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MtStatus::Panic
        }
    }
}

fn null(what: &str) -> (MtStatus, String) {
    (MtStatus::NullPointer, format!("{what} is null"))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

impl From<MtOptions> for Options {
    fn from(o: MtOptions) -> Self {
        Options {
            max_n: o.max_n,
            radius: (o.radius_min, o.radius_max),
            horizon: o.horizon,
            power: o.power,
            budget: Budget {
                ball: o.ball_budget as usize,
                word_cap: o.word_cap as usize,
            },
        }
    }
}

/// Defaults, with budgets taken from the environment.
#[no_mangle]
pub extern "C" fn mt_options_default() -> MtOptions {
    let d = Options {
        budget: Budget::from_env(),
        ..Options::default()
    };
    MtOptions {
        max_n: d.max_n,
        radius_min: d.radius.0,
        radius_max: d.radius.1,
        horizon: d.horizon,
        power: d.power,
        ball_budget: d.budget.ball as u64,
        word_cap: d.budget.word_cap as u64,
    }
}

/// Parses a NUL-terminated input file into `*out`.
///
/// # Safety
/// `text` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mt_spec_parse(text: *const c_char, out: *mut *mut MtSpec) -> MtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (MtStatus::InvalidUtf8, e.to_string()))?;
        let spec = parse_spec(text).map_err(|e| (MtStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(MtSpec {
            spec,
            digest: input_digest(text),
        }));
        Ok(())
    })
}

/// # Safety
/// `spec` must come from [`mt_spec_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mt_spec_free(spec: *mut MtSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Runs `command` on `spec`. `options` may be null for defaults. The
/// analysis outcome, including refusals, is read from the report.
///
/// # Safety
/// `spec` must be a live handle, `options` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_execute(
    spec: *const MtSpec,
    command: MtCommand,
    options: *const MtOptions,
    out: *mut *mut MtReport,
) -> MtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        let opts: Options = match options.as_ref() {
            Some(o) => (*o).into(),
            None => mt_options_default().into(),
        };
        if opts.radius.0 == 0 || opts.radius.0 > opts.radius.1 {
            return Err((MtStatus::InvalidArgument, "bad radius range".into()));
        }
        if !(opts.horizon.is_finite() && opts.horizon > 0.0) || opts.max_n == 0 || opts.power == 0 {
            return Err((MtStatus::InvalidArgument, "max_n, power and horizon must be positive".into()));
        }
        let command = match command {
            MtCommand::Analyze => Command::Analyze,
            MtCommand::Growth => Command::Growth,
            MtCommand::Certify => Command::Certify,
            MtCommand::Divergence => Command::Divergence,
        };
        let report = execute(command, &spec.spec, &spec.digest, &opts);
        *out = Box::into_raw(Box::new(MtReport { report }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`mt_execute`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mt_report_free(report: *mut MtReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Process exit code for the report: 0 ok, 2 verification failure,
/// 3 refused, 4 budget exceeded. -1 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mt_report_exit_code(report: *const MtReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.report.exit_status() as i32)
}

/// Certified thickness order, or -1 when there is no certificate.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mt_report_order(report: *const MtReport) -> i32 {
    report
        .as_ref()
        .and_then(|r| r.report.certificate.as_ref())
        .map_or(-1, |c| c.order as i32)
}

/// Renders the report into a new string owned by the caller.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mt_report_render(
    report: *const MtReport,
    format: MtFormat,
    out: *mut *mut c_char,
) -> MtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let format = match format {
            MtFormat::Text => Format::Text,
            MtFormat::Structured => Format::Structured,
        };
        *out = to_c(r.report.render(format));
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn mt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
