//! C ABI for the `iqisec` library.
//!
//! Every function returns an [`IqisecStatus`]. On failure the message is
//! available from [`iqisec_last_error`] on the same thread. Handles are
//! opaque and must be released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use iqisec::analytic::{self, QuadratureConfig};
use iqisec::cli::{parse_config, run_experiment, write_csv, ConfigDocument};
use iqisec::mc::{self, IpMode, McConfig};
use iqisec::scenario::Scheme;
use iqisec::{Error, Scenario};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IqisecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Numeric = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IqisecScheme {
    Rrs = 0,
    Srs = 1,
    Ors = 2,
}

/// Which eavesdropped transmission an intercept query refers to.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IqisecIpLink {
    Direct = 0,
    Relay = 1,
}

/// Monte Carlo result: estimate and its standard error.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IqisecEstimate {
    pub p_hat: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Monte Carlo settings. `workers = 0` uses every core; results do not
/// depend on it.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IqisecMcOptions {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

/// Opaque scenario: a full configuration document.
pub struct IqisecScenario {
    doc: ConfigDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> IqisecStatus {
    match err {
        Error::InvalidParameter { .. }
        | Error::DegenerateVariance { .. }
        | Error::RelayOutOfRange { .. } => IqisecStatus::InvalidArgument,
        Error::Domain(_) => IqisecStatus::InvalidArgument,
        Error::Config(_) => IqisecStatus::Config,
        Error::Numeric(_) => IqisecStatus::Numeric,
        Error::Io(_) => IqisecStatus::Io,
    }
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), (IqisecStatus, String)>) -> IqisecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IqisecStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            IqisecStatus::Panic
        }
    }
}

fn lib<T>(r: iqisec::Result<T>) -> Result<T, (IqisecStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (IqisecStatus, String) {
    (IqisecStatus::NullPointer, format!("{name} is null"))
}

unsafe fn handle<'a>(
    p: *const IqisecScenario,
) -> Result<&'a IqisecScenario, (IqisecStatus, String)> {
    p.as_ref().ok_or_else(|| null("scenario"))
}

unsafe fn scenario_of(p: *const IqisecScenario) -> Result<Scenario, (IqisecStatus, String)> {
    lib(handle(p)?.doc.scenario())
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (IqisecStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(v);
    Ok(())
}

fn scheme(s: IqisecScheme) -> Scheme {
    match s {
        IqisecScheme::Rrs => Scheme::Rrs,
        IqisecScheme::Srs => Scheme::Srs,
        IqisecScheme::Ors => Scheme::Ors,
    }
}

fn mc_config(opts: &IqisecMcOptions) -> McConfig {
    McConfig {
        trials: opts.trials,
        seed: opts.seed,
        workers: opts.workers,
        ..McConfig::default()
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn iqisec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn iqisec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default non-ideal scenario (10 dB beacon, two relays).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_scenario_new_default(
    out: *mut *mut IqisecScenario,
) -> IqisecStatus {
    guard(|| {
        let h = Box::new(IqisecScenario {
            doc: ConfigDocument::default(),
        });
        write_out(out, Box::into_raw(h))
    })
}

/// Parses a JSON configuration document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_scenario_from_json(
    json: *const c_char,
    out: *mut *mut IqisecScenario,
) -> IqisecStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| {
            (
                IqisecStatus::InvalidArgument,
                format!("json is not UTF-8: {e}"),
            )
        })?;
        let doc = parse_config(text).map_err(|e| (IqisecStatus::Config, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(IqisecScenario { doc })))
    })
}

/// Releases a scenario. Null is accepted.
///
/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn iqisec_scenario_free(scenario: *mut IqisecScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Sets the beacon power in dB.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iqisec_scenario_set_pb_db(
    scenario: *mut IqisecScenario,
    pb_db: f64,
) -> IqisecStatus {
    guard(|| {
        let h = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        let mut doc = h.doc.clone();
        doc.set_pb_db(pb_db);
        lib(doc.scenario())?;
        h.doc = doc;
        Ok(())
    })
}

/// Sets the number of relays.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iqisec_scenario_set_relays(
    scenario: *mut IqisecScenario,
    relays: usize,
) -> IqisecStatus {
    guard(|| {
        let h = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        let mut doc = h.doc.clone();
        doc.relays = relays;
        lib(doc.scenario())?;
        h.doc = doc;
        Ok(())
    })
}

/// Closed-form outage probability with `nodes` quadrature nodes (0 for the
/// default).
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_op_analytic(
    scenario: *const IqisecScenario,
    which: IqisecScheme,
    nodes: usize,
    out: *mut f64,
) -> IqisecStatus {
    guard(|| {
        let s = scenario_of(scenario)?;
        let quad = quadrature(nodes)?;
        let v = lib(analytic::op(scheme(which), &s, &quad))?;
        write_out(out, v.probability)
    })
}

/// Closed-form intercept probability.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_ip_analytic(
    scenario: *const IqisecScenario,
    link: IqisecIpLink,
    nodes: usize,
    out: *mut f64,
) -> IqisecStatus {
    guard(|| {
        let h = handle(scenario)?;
        let s = lib(h.doc.scenario())?;
        let quad = quadrature(nodes)?;
        let v = match link {
            IqisecIpLink::Direct => lib(analytic::ip_direct(&s, &quad))?,
            IqisecIpLink::Relay => lib(analytic::ip_relay(&s, &quad, h.doc.rrs_relay))?,
        };
        write_out(out, v.probability)
    })
}

fn quadrature(nodes: usize) -> Result<QuadratureConfig, (IqisecStatus, String)> {
    let quad = if nodes == 0 {
        QuadratureConfig::default()
    } else {
        QuadratureConfig::with_nodes(nodes)
    };
    lib(quad.validate())?;
    Ok(quad)
}

/// Monte Carlo outage probability.
///
/// # Safety
/// `scenario` and `opts` must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_op_mc(
    scenario: *const IqisecScenario,
    which: IqisecScheme,
    opts: *const IqisecMcOptions,
    out: *mut IqisecEstimate,
) -> IqisecStatus {
    guard(|| {
        let s = scenario_of(scenario)?;
        let cfg = mc_config(opts.as_ref().ok_or_else(|| null("opts"))?);
        let e = lib(mc::estimate_op(scheme(which), &s, &cfg))?;
        write_out(out, estimate(e))
    })
}

/// Monte Carlo intercept probability.
///
/// # Safety
/// `scenario` and `opts` must be valid; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_ip_mc(
    scenario: *const IqisecScenario,
    link: IqisecIpLink,
    opts: *const IqisecMcOptions,
    out: *mut IqisecEstimate,
) -> IqisecStatus {
    guard(|| {
        let s = scenario_of(scenario)?;
        let cfg = mc_config(opts.as_ref().ok_or_else(|| null("opts"))?);
        let mode = match link {
            IqisecIpLink::Direct => IpMode::Direct,
            IqisecIpLink::Relay => IpMode::Relay,
        };
        let e = lib(mc::estimate_ip(mode, &s, &cfg))?;
        write_out(out, estimate(e))
    })
}

fn estimate(e: mc::MetricEstimate) -> IqisecEstimate {
    IqisecEstimate {
        p_hat: e.p_hat,
        std_error: e.stderr,
        trials: e.trials,
        seed: e.seed,
    }
}

/// Modified Bessel function of the second kind, order one, for `x > 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_bessel_k1(x: f64, out: *mut f64) -> IqisecStatus {
    guard(|| write_out(out, lib(analytic::bessel_k1(x))?))
}

/// Runs the experiment embedded in the scenario document and returns the
/// CSV text. Release it with [`iqisec_string_free`].
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn iqisec_experiment_csv(
    scenario: *const IqisecScenario,
    out: *mut *mut c_char,
) -> IqisecStatus {
    guard(|| {
        let h = handle(scenario)?;
        let rows = lib(run_experiment(&h.doc))?;
        let mut buf = Vec::new();
        lib(write_csv(&rows, &mut buf))?;
        let text = CString::new(buf)
            .map_err(|_| (IqisecStatus::Numeric, "CSV contains a NUL byte".to_string()))?;
        write_out(out, text.into_raw())
    })
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn iqisec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
