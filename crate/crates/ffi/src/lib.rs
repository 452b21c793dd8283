//! C interface to `selmon`: load or generate double-negation-shift
//! instances, verify them, and run the check suites.
//!
//! Every function returns a [`SelmonStatus`]. On failure the message is
//! available from [`selmon_last_error_message`] on the same thread. Strings
//! handed out by this library are freed with [`selmon_string_free`] and
//! instances with [`selmon_instance_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use selmon::cli::{render, run, Bounds, Command, RunConfig};
use selmon::herbrand::{generate_case, verify_dns, DnsBounds, DnsInstance};
use selmon::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelmonStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON.
    Parse = 3,
    /// Well-formed JSON of the wrong shape.
    Schema = 4,
    /// Data violating a documented invariant, or an unknown argument value.
    Invariant = 5,
    /// A value of the wrong type.
    Type = 6,
    /// A cardinality or recursion-depth limit was hit.
    Limit = 7,
    Unsupported = 8,
    Io = 9,
    /// A Rust panic was caught at the boundary.
    Panic = 10,
}

impl From<&Error> for SelmonStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::CardinalityExceeded { .. } | Error::DepthExceeded { .. } => SelmonStatus::Limit,
            Error::TypeMismatch(_) | Error::InvalidType(_) => SelmonStatus::Type,
            Error::Parse { .. } => SelmonStatus::Parse,
            Error::Schema { .. } => SelmonStatus::Schema,
            Error::Invariant { .. } => SelmonStatus::Invariant,
            Error::Unsupported(_) => SelmonStatus::Unsupported,
            Error::Io(_) => SelmonStatus::Io,
        }
    }
}

/// Opaque handle to a validated instance.
pub struct SelmonInstance(DnsInstance);

/// Sizes for generated instances.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelmonDnsBounds {
    /// `|X|`, the number of moves.
    pub moves: u32,
    /// `|Rb|`, the number of counterexample values.
    pub counter: u32,
    /// Largest length bound `B`.
    pub b_max: u32,
    /// Lookahead of the generated window tables.
    pub lookahead: u32,
    /// Most members in each of `phi` and `q`.
    pub max_members: u32,
}

impl From<SelmonDnsBounds> for DnsBounds {
    fn from(b: SelmonDnsBounds) -> Self {
        DnsBounds {
            moves: b.moves,
            counter: b.counter,
            b_max: b.b_max,
            lookahead: b.lookahead as usize,
            max_members: b.max_members as usize,
            cases: 1,
        }
    }
}

/// Summary of one verification.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SelmonVerdict {
    /// The premise implies the conclusion on this instance.
    pub holds: bool,
    pub premise: bool,
    pub conclusion: bool,
    /// The premise holds and the context set is non-empty.
    pub non_vacuous: bool,
    /// The length witness `N`.
    pub n: u64,
    /// Number of plays in the bar witness `t`.
    pub plays: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), (SelmonStatus, String)>) -> SelmonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SelmonStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SelmonStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (SelmonStatus, String) {
    (SelmonStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (SelmonStatus, String) {
    (SelmonStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SelmonStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (SelmonStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// The sizes used by the default random suite.
#[no_mangle]
pub extern "C" fn selmon_dns_bounds_default() -> SelmonDnsBounds {
    let d = DnsBounds::default();
    SelmonDnsBounds {
        moves: d.moves,
        counter: d.counter,
        b_max: d.b_max,
        lookahead: d.lookahead as u32,
        max_members: d.max_members as u32,
    }
}

/// Parses and validates an instance from a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer to write to.
#[no_mangle]
pub unsafe extern "C" fn selmon_instance_from_json(
    json: *const c_char,
    out: *mut *mut SelmonInstance,
) -> SelmonStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let inst = DnsInstance::parse_str(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SelmonInstance(inst)));
        Ok(())
    })
}

/// Generates instance `case_index` of the stream seeded by `seed`. The same
/// arguments always give the same instance.
///
/// # Safety
/// `out` must be a valid pointer to write to.
#[no_mangle]
pub unsafe extern "C" fn selmon_instance_generate(
    seed: u64,
    case_index: u64,
    bounds: SelmonDnsBounds,
    out: *mut *mut SelmonInstance,
) -> SelmonStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let bounds = DnsBounds::from(bounds);
        bounds.validate().map_err(lib_err)?;
        let inst = generate_case(seed, case_index, &bounds).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(SelmonInstance(inst)));
        Ok(())
    })
}

/// Serializes an instance to JSON. Free the result with
/// [`selmon_string_free`].
///
/// # Safety
/// `inst` must come from this library and not be freed; `out` must be a
/// valid pointer to write to.
#[no_mangle]
pub unsafe extern "C" fn selmon_instance_to_json(
    inst: *const SelmonInstance,
    out: *mut *mut c_char,
) -> SelmonStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        *out = into_c_string(inst.0.to_json().to_string());
        Ok(())
    })
}

/// Frees an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn selmon_instance_free(inst: *mut SelmonInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Computes the witnesses of an instance and checks premise and conclusion.
/// `verdict` receives the summary. When `detail` is not null it receives the
/// full verdict as JSON, to be freed with [`selmon_string_free`].
///
/// # Safety
/// `inst` must come from this library and not be freed; `verdict` must be a
/// valid pointer; `detail` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn selmon_verify_dns(
    inst: *const SelmonInstance,
    verdict: *mut SelmonVerdict,
    detail: *mut *mut c_char,
) -> SelmonStatus {
    guard(|| {
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        if !detail.is_null() {
            *detail = ptr::null_mut();
        }
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        let v = verify_dns(&inst.0).map_err(lib_err)?;
        *verdict = SelmonVerdict {
            holds: v.holds(),
            premise: v.premise.holds,
            conclusion: v.conclusion.holds,
            non_vacuous: v.non_vacuous(),
            n: v.witnesses.n as u64,
            plays: v.witnesses.t.len() as u64,
        };
        if !detail.is_null() {
            *detail = into_c_string(v.to_json().to_string());
        }
        Ok(())
    })
}

/// Runs a suite (`laws`, `equiv`, `dns-random` or `all`) and writes the
/// JSON report to `report`. `bounds` is a preset name or a path to a JSON
/// bounds file; null means `default`. `passed` receives whether every check
/// passed. The report matches the command-line output byte for byte.
///
/// # Safety
/// `command` must be a valid C string, `bounds` null or a valid C string,
/// and `report` and `passed` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn selmon_run_suite(
    command: *const c_char,
    seed: u64,
    bounds: *const c_char,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> SelmonStatus {
    guard(|| {
        if report.is_null() {
            return Err(null("report"));
        }
        if passed.is_null() {
            return Err(null("passed"));
        }
        *report = ptr::null_mut();
        let command = match read_str(command, "command")? {
            "laws" => Command::Laws,
            "equiv" => Command::Equiv,
            "dns-random" => Command::DnsRandom,
            "all" => Command::All,
            other => {
                return Err((
                    SelmonStatus::Invariant,
                    format!("unknown command {other:?}"),
                ));
            }
        };
        let bounds = if bounds.is_null() {
            "default"
        } else {
            read_str(bounds, "bounds")?
        };
        let cfg = RunConfig {
            command,
            bounds: Bounds::load(bounds).map_err(lib_err)?,
            seed,
            timings: false,
        };
        let r = run(&cfg).map_err(lib_err)?;
        *passed = r.passed;
        *report = into_c_string(render(&r));
        Ok(())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn selmon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or an empty string
/// after a successful one. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn selmon_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn selmon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
