//! C ABI for the toolkit. All functions are `extern "C"`, panics never
//! cross the boundary, results travel as JSON strings allocated by the
//! library and released with `gext_string_free`, and every fallible call
//! returns a `GextStatus` with the error text retrievable from the context
//! via `gext_last_error`.
//!
//! The context handle is opaque; it carries the computation budget and the
//! last error message. A context must only be used from one thread at a
//! time; distinct contexts are independent.

use gext_core::affext::{certify_extension, synthesize_extension};
use gext_core::blowup::{base_coordinate_functions, Tower};
use gext_core::cech::{classify_extension, restrict_to_e, torsor_datum, Cocycle};
use gext_core::error::Error;
use gext_core::ideals::Budget;
use gext_core::polycore::{MonomialOrder, RingDescriptor};
use gext_core::verifier::{builtin_corpus, run_case, CaseFile};
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum GextStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    BudgetExceeded = 3,
    MathError = 4,
    Panic = 5,
}

/// Opaque context: budget configuration and the last error message.
pub struct GextContext {
    budget: Budget,
    cap: u32,
    last_error: CString,
}

impl GextContext {
    fn set_error(&mut self, msg: &str) {
        self.last_error = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    }
}

fn classify_error(e: &Error) -> GextStatus {
    match e {
        Error::Parse { .. } => GextStatus::ParseError,
        Error::ResourceBudgetExceeded { .. } | Error::CapExceeded(_) => GextStatus::BudgetExceeded,
        Error::RingMismatch(_)
        | Error::UnknownVariable(_)
        | Error::NegativeExponent(_)
        | Error::Invalid(_) => GextStatus::InvalidArgument,
        _ => GextStatus::MathError,
    }
}

/// Creates a context. `budget` caps Groebner reduction steps per call,
/// `cap` bounds nilpotency iteration. Free with `gext_context_free`.
#[no_mangle]
pub extern "C" fn gext_context_new(budget: u64, cap: u32) -> *mut GextContext {
    Box::into_raw(Box::new(GextContext {
        budget: Budget::new(if budget == 0 { 1_000_000 } else { budget }),
        cap: if cap == 0 { 64 } else { cap },
        last_error: CString::default(),
    }))
}

/// Releases a context created by `gext_context_new`.
///
/// # Safety
/// `ctx` must be a pointer returned by `gext_context_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gext_context_free(ctx: *mut GextContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// The last error message recorded on this context. The pointer stays valid
/// until the next failing call on the same context.
///
/// # Safety
/// `ctx` must be a live context pointer.
#[no_mangle]
pub unsafe extern "C" fn gext_last_error(ctx: *const GextContext) -> *const c_char {
    if ctx.is_null() {
        return std::ptr::null();
    }
    (*ctx).last_error.as_ptr()
}

/// Releases a string allocated by this library.
///
/// # Safety
/// `s` must be a pointer previously handed out by a `gext_*` call, not yet
/// freed, or null.
#[no_mangle]
pub unsafe extern "C" fn gext_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn hand_out(s: String, out: *mut *mut c_char) -> GextStatus {
    match CString::new(s.replace('\0', " ")) {
        Ok(cs) => {
            unsafe { *out = cs.into_raw() };
            GextStatus::Ok
        }
        Err(_) => GextStatus::Panic,
    }
}

fn guarded(
    ctx: *mut GextContext,
    out: *mut *mut c_char,
    f: impl FnOnce(&GextContext) -> Result<String, Error>,
) -> GextStatus {
    if ctx.is_null() || out.is_null() {
        return GextStatus::InvalidArgument;
    }
    let ctx = unsafe { &mut *ctx };
    unsafe { *out = std::ptr::null_mut() };
    match catch_unwind(AssertUnwindSafe(|| f(ctx))) {
        Ok(Ok(json)) => hand_out(json, out),
        Ok(Err(e)) => {
            let status = classify_error(&e);
            ctx.set_error(&e.to_string());
            status
        }
        Err(_) => {
            ctx.set_error("internal panic");
            GextStatus::Panic
        }
    }
}

/// Runs one case file (JSON, schema 1) and returns the report as JSON.
///
/// # Safety
/// `ctx` must be live, `case_json` a NUL-terminated UTF-8 string, and
/// `report_json` a valid output slot. The returned string is released with
/// `gext_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gext_run_case_json(
    ctx: *mut GextContext,
    case_json: *const c_char,
    report_json: *mut *mut c_char,
) -> GextStatus {
    let Some(text) = read_str(case_json) else {
        return GextStatus::InvalidArgument;
    };
    let text = text.to_owned();
    guarded(ctx, report_json, move |ctx| {
        let case = CaseFile::from_json(&text)?;
        let report = run_case(&case, &ctx.budget);
        Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
    })
}

/// Runs the whole built-in corpus; returns a JSON array of reports.
///
/// # Safety
/// As for `gext_run_case_json`.
#[no_mangle]
pub unsafe extern "C" fn gext_run_corpus_json(
    ctx: *mut GextContext,
    reports_json: *mut *mut c_char,
) -> GextStatus {
    guarded(ctx, reports_json, |ctx| {
        let reports: Vec<_> = builtin_corpus()
            .iter()
            .map(|c| run_case(c, &ctx.budget))
            .collect();
        Ok(serde_json::to_string_pretty(&reports).expect("reports serialize"))
    })
}

/// Number of built-in corpus cases.
#[no_mangle]
pub extern "C" fn gext_corpus_len() -> usize {
    builtin_corpus().len()
}

/// Serializes the corpus case at `index` as JSON.
///
/// # Safety
/// As for `gext_run_case_json`.
#[no_mangle]
pub unsafe extern "C" fn gext_corpus_case(
    ctx: *mut GextContext,
    index: usize,
    case_json: *mut *mut c_char,
) -> GextStatus {
    guarded(ctx, case_json, move |_| {
        let corpus = builtin_corpus();
        let case = corpus
            .get(index)
            .ok_or_else(|| Error::Invalid(format!("corpus index {index} out of range")))?;
        Ok(case.to_json())
    })
}

/// Classifies the cocycle x^-m y^-n p(x, y); returns the minimal level,
/// surviving monomials, the gluing datum, and the restriction class as JSON.
///
/// # Safety
/// As for `gext_run_case_json`; `p` is a NUL-terminated polynomial in x, y.
#[no_mangle]
pub unsafe extern "C" fn gext_cech_classify(
    ctx: *mut GextContext,
    m: i64,
    n: i64,
    p: *const c_char,
    result_json: *mut *mut c_char,
) -> GextStatus {
    let Some(p_text) = read_str(p) else {
        return GextStatus::InvalidArgument;
    };
    let p_text = p_text.to_owned();
    guarded(ctx, result_json, move |_| {
        let plain = RingDescriptor::new(vec!["x", "y"], MonomialOrder::DegRevLex);
        let p = gext_core::polycore::parse_polynomial(&plain, &p_text)?;
        let c = Cocycle::from_mnp(m, n, &p)?;
        let cls = classify_extension(&c)?;
        let datum = torsor_datum(&c, cls.l0)?;
        let restriction = restrict_to_e(&datum);
        let out = serde_json::json!({
            "l0": cls.l0,
            "d_raw": cls.d_raw,
            "d_surviving": cls.d_surviving,
            "raw_agrees": cls.raw_agrees,
            "canonical": cls.canonical.iter()
                .map(|((i, j), c)| serde_json::json!({"i": i, "j": j, "coeff": c.to_string()}))
                .collect::<Vec<_>>(),
            "datum": {"level": datum.level, "gluing": datum.gluing.to_string()},
            "restriction_to_e": restriction.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        });
        Ok(serde_json::to_string_pretty(&out).expect("json"))
    })
}

/// Builds a tower from JSON steps and reports curves, adjacency, dual graph
/// and multiplicities.
///
/// # Safety
/// As for `gext_run_case_json`.
#[no_mangle]
pub unsafe extern "C" fn gext_tower_report(
    ctx: *mut GextContext,
    tower_json: *const c_char,
    result_json: *mut *mut c_char,
) -> GextStatus {
    let Some(text) = read_str(tower_json) else {
        return GextStatus::InvalidArgument;
    };
    let text = text.to_owned();
    guarded(ctx, result_json, move |_| {
        #[derive(serde::Deserialize)]
        struct TowerFile {
            steps: Vec<gext_core::blowup::TowerStep>,
        }
        let tf: TowerFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let tower = Tower::from_steps(&tf.steps)?;
        let (verts, edges) = tower.dual_graph_data();
        let (x, y) = base_coordinate_functions();
        let mult = tower.total_transform_multiplicity((&x, &y))?;
        let out = serde_json::json!({
            "curves": verts.iter().map(|(n, s)| serde_json::json!({"name": n, "self_intersection": s})).collect::<Vec<_>>(),
            "adjacency": edges,
            "multiplicity": mult,
            "dot": tower.dual_graph_dot(),
        });
        Ok(serde_json::to_string_pretty(&out).expect("json"))
    })
}

/// Synthesizes an extension from a cocycle (polynomial text) and a tower
/// (JSON steps), certifies it, and returns the report as JSON.
///
/// # Safety
/// As for `gext_run_case_json`.
#[no_mangle]
pub unsafe extern "C" fn gext_synthesize(
    ctx: *mut GextContext,
    cocycle: *const c_char,
    tower_json: *const c_char,
    report_json: *mut *mut c_char,
) -> GextStatus {
    let (Some(cocycle_text), Some(tower_text)) = (read_str(cocycle), read_str(tower_json)) else {
        return GextStatus::InvalidArgument;
    };
    let cocycle_text = cocycle_text.to_owned();
    let tower_text = tower_text.to_owned();
    guarded(ctx, report_json, move |ctx| {
        #[derive(serde::Deserialize)]
        struct TowerFile {
            steps: Vec<gext_core::blowup::TowerStep>,
        }
        let c = Cocycle::parse(&cocycle_text)?;
        let tf: TowerFile = serde_json::from_str(&tower_text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let tower = Tower::from_steps(&tf.steps)?;
        let ext = synthesize_extension(&c, &tower, &ctx.budget)?;
        let report = certify_extension(&ext, &c, &ctx.budget)?;
        let out = serde_json::json!({
            "level_trace": report.level_trace,
            "fiber_multiplicity": report.fiber_multiplicity,
            "checks": report.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "status": if c.pass { "pass" } else { "fail" },
                "witness": c.detail,
            })).collect::<Vec<_>>(),
        });
        Ok(serde_json::to_string_pretty(&out).expect("json"))
    })
}

/// Iteration cap configured on the context (exposed for bindings that want
/// to surface it).
///
/// # Safety
/// `ctx` must be a live context pointer.
#[no_mangle]
pub unsafe extern "C" fn gext_context_cap(ctx: *const GextContext) -> u32 {
    if ctx.is_null() {
        0
    } else {
        (*ctx).cap
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_ctx<T>(f: impl FnOnce(*mut GextContext) -> T) -> T {
        let ctx = gext_context_new(0, 0);
        let out = f(ctx);
        unsafe { gext_context_free(ctx) };
        out
    }

    fn take_string(ptr: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned();
        unsafe { gext_string_free(ptr) };
        s
    }

    #[test]
    fn classify_roundtrip() {
        with_ctx(|ctx| {
            let p = CString::new("1").unwrap();
            let mut out: *mut c_char = std::ptr::null_mut();
            let status = unsafe { gext_cech_classify(ctx, 1, 1, p.as_ptr(), &mut out) };
            assert!(matches!(status, GextStatus::Ok));
            let json = take_string(out);
            let v: serde_json::Value = serde_json::from_str(&json).unwrap();
            assert_eq!(v["l0"], 2);
            assert_eq!(v["datum"]["gluing"], "z");
        });
    }

    #[test]
    fn corpus_case_runs_through_ffi() {
        with_ctx(|ctx| {
            let mut case_out: *mut c_char = std::ptr::null_mut();
            let status = unsafe { gext_corpus_case(ctx, 0, &mut case_out) };
            assert!(matches!(status, GextStatus::Ok));
            let case_json = take_string(case_out);
            let case_c = CString::new(case_json).unwrap();
            let mut report_out: *mut c_char = std::ptr::null_mut();
            let status = unsafe { gext_run_case_json(ctx, case_c.as_ptr(), &mut report_out) };
            assert!(matches!(status, GextStatus::Ok));
            let report = take_string(report_out);
            let v: serde_json::Value = serde_json::from_str(&report).unwrap();
            assert!(v["checks"].as_array().unwrap().len() > 1);
        });
    }

    #[test]
    fn errors_surface_with_codes() {
        with_ctx(|ctx| {
            let bad = CString::new("{ not json").unwrap();
            let mut out: *mut c_char = std::ptr::null_mut();
            let status = unsafe { gext_run_case_json(ctx, bad.as_ptr(), &mut out) };
            assert!(matches!(status, GextStatus::ParseError));
            assert!(out.is_null());
            let msg = unsafe { CStr::from_ptr(gext_last_error(ctx)) };
            assert!(!msg.to_str().unwrap().is_empty());
        });
    }

    #[test]
    fn trivial_class_is_a_math_error() {
        with_ctx(|ctx| {
            let p = CString::new("x").unwrap();
            let mut out: *mut c_char = std::ptr::null_mut();
            let status = unsafe { gext_cech_classify(ctx, 1, 1, p.as_ptr(), &mut out) };
            assert!(matches!(status, GextStatus::MathError));
        });
    }
}
