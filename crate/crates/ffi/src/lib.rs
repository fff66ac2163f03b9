//! C ABI over the `htensor` library.
//!
//! Tensors cross the boundary as opaque `HtTensor` handles created by
//! `ht_tensor_from_json` or `ht_tensor_new` and released with
//! `ht_tensor_free`. Every fallible call returns an `HtStatus`; on failure
//! `ht_last_error_message` describes the error for the calling thread.
//! Strings returned by the library are freed with `ht_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use htensor::{
    certify, enumerate_eigenvalues, extremal_eigenvalues, gershgorin_set, ll_set, llk_set, Certificate, Complex64,
    ComplexTensor, Error, Rule, SolverConfig, Verdict,
};

/// Opaque tensor handle.
pub struct HtTensor(ComplexTensor);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotHermitian = 5,
    ConvergenceFailure = 6,
    BufferTooSmall = 7,
    Domain = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HtComplex {
    pub re: f64,
    pub im: f64,
}

impl From<HtComplex> for Complex64 {
    fn from(z: HtComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for HtComplex {
    fn from(z: Complex64) -> Self {
        HtComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HtSolverConfig {
    pub starts: usize,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub dedup_tol: f64,
    pub rng_seed: u64,
}

impl From<SolverConfig> for HtSolverConfig {
    fn from(c: SolverConfig) -> Self {
        HtSolverConfig {
            starts: c.starts,
            newton_tol: c.newton_tol,
            max_iter: c.max_iter,
            dedup_tol: c.dedup_tol,
            rng_seed: c.rng_seed,
        }
    }
}

impl From<HtSolverConfig> for SolverConfig {
    fn from(c: HtSolverConfig) -> Self {
        SolverConfig {
            starts: c.starts,
            newton_tol: c.newton_tol,
            max_iter: c.max_iter,
            dedup_tol: c.dedup_tol,
            rng_seed: c.rng_seed,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtVerdict {
    PositiveDefinite = 0,
    PositiveSemidefinite = 1,
    IndefiniteOrNegative = 2,
    Inconclusive = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtRule {
    StrictDd = 0,
    StrictLlk = 1,
    StrictLl = 2,
    Dd = 3,
    Llk = 4,
    Ll = 5,
    ExtremalEigenvalue = 6,
    BlockCriterion = 7,
}

/// Verdict, deciding rule and slack of a certificate. The full witness is
/// available through `ht_certify_json`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HtCertificate {
    pub verdict: HtVerdict,
    pub rule: HtRule,
    pub slack: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtInclusionSet {
    Gershgorin = 0,
    Llk = 1,
    Ll = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn status_of(e: &Error) -> HtStatus {
    match e {
        Error::Parse(_) => HtStatus::Parse,
        Error::NotHermitian | Error::NonRealDiagonal { .. } => HtStatus::NotHermitian,
        Error::ConvergenceFailure { .. } => HtStatus::ConvergenceFailure,
        Error::IndexOutOfRange { .. }
        | Error::DuplicateEntry(_)
        | Error::ArityMismatch { .. }
        | Error::EmptyShape { .. }
        | Error::DimensionMismatch { .. }
        | Error::ZeroVector
        | Error::NotMatrix { .. }
        | Error::DimensionTooSmall(_)
        | Error::BadSplit { .. }
        | Error::NonpositiveBound { .. }
        | Error::ShapeMismatch { .. }
        | Error::InvalidConfig(_) => HtStatus::InvalidArgument,
        _ => HtStatus::Domain,
    }
}

struct Failure(HtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), format!("{}: {e}", e.kind()))
    }
}

fn null(what: &str) -> Failure {
    Failure(HtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status plus the
/// thread's last-error message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            HtStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            HtStatus::Panic
        }
    }
}

unsafe fn tensor_ref<'a>(t: *const HtTensor) -> Result<&'a ComplexTensor, Failure> {
    t.as_ref().map(|h| &h.0).ok_or_else(|| null("tensor"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn config(cfg: *const HtSolverConfig) -> Result<SolverConfig, Failure> {
    let cfg = cfg
        .as_ref()
        .map_or_else(SolverConfig::default, |c| SolverConfig::from(*c));
    cfg.validate()?;
    Ok(cfg)
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

fn verdict(v: Verdict) -> HtVerdict {
    match v {
        Verdict::PositiveDefinite => HtVerdict::PositiveDefinite,
        Verdict::PositiveSemidefinite => HtVerdict::PositiveSemidefinite,
        Verdict::IndefiniteOrNegative => HtVerdict::IndefiniteOrNegative,
        Verdict::Inconclusive => HtVerdict::Inconclusive,
    }
}

fn rule(r: Rule) -> HtRule {
    match r {
        Rule::StrictDd => HtRule::StrictDd,
        Rule::StrictLlk => HtRule::StrictLlk,
        Rule::StrictLl => HtRule::StrictLl,
        Rule::Dd => HtRule::Dd,
        Rule::Llk => HtRule::Llk,
        Rule::Ll => HtRule::Ll,
        Rule::ExtremalEigenvalue => HtRule::ExtremalEigenvalue,
        Rule::BlockCriterion => HtRule::BlockCriterion,
    }
}

fn certificate(c: &Certificate) -> HtCertificate {
    HtCertificate {
        verdict: verdict(c.verdict),
        rule: rule(c.rule),
        slack: c.slack,
    }
}

/// Default solver settings.
#[no_mangle]
pub extern "C" fn ht_solver_config_default() -> HtSolverConfig {
    SolverConfig::default().into()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ht_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a tensor file (`{"m", "n", "entries"}`, 1-based indices).
#[no_mangle]
pub unsafe extern "C" fn ht_tensor_from_json(json: *const c_char, out: *mut *mut HtTensor) -> HtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(HtStatus::InvalidUtf8, e.to_string()))?;
        let t = htensor::io::parse_tensor(text)?;
        *out = Box::into_raw(Box::new(HtTensor(t)));
        Ok(())
    })
}

/// Builds a tensor from `nnz` entries. `indices` holds `nnz * 2m` 1-based
/// indices, entry after entry; `values` holds `nnz` coefficients.
#[no_mangle]
pub unsafe extern "C" fn ht_tensor_new(
    m: usize,
    n: usize,
    indices: *const usize,
    values: *const HtComplex,
    nnz: usize,
    out: *mut *mut HtTensor,
) -> HtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let arity = 2 * m;
        let idx = slice(indices, nnz * arity, "indices")?;
        let vals = slice(values, nnz, "values")?;
        let entries = (0..nnz).map(|e| (idx[e * arity..(e + 1) * arity].to_vec(), Complex64::from(vals[e])));
        let t = ComplexTensor::build(m, n, entries)?;
        *out = Box::into_raw(Box::new(HtTensor(t)));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ht_tensor_free(t: *mut HtTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Releases a string returned by the library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ht_tensor_dims(t: *const HtTensor, m: *mut usize, n: *mut usize) -> HtStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        *out_ref(m, "m")? = t.order_half();
        *out_ref(n, "n")? = t.dim();
        Ok(())
    })
}

/// Number of stored (nonzero) entries.
#[no_mangle]
pub unsafe extern "C" fn ht_tensor_nnz(t: *const HtTensor, out: *mut usize) -> HtStatus {
    guard(|| {
        *out_ref(out, "out")? = tensor_ref(t)?.nnz();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ht_tensor_is_hermitian(t: *const HtTensor, out: *mut bool) -> HtStatus {
    guard(|| {
        *out_ref(out, "out")? = tensor_ref(t)?.is_hermitian();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ht_tensor_is_cps(t: *const HtTensor, out: *mut bool) -> HtStatus {
    guard(|| {
        *out_ref(out, "out")? = tensor_ref(t)?.is_cps();
        Ok(())
    })
}

/// New handle holding the conjugate partial symmetrization.
#[no_mangle]
pub unsafe extern "C" fn ht_symmetrize(t: *const HtTensor, out: *mut *mut HtTensor) -> HtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = tensor_ref(t)?.symmetrize();
        *out = Box::into_raw(Box::new(HtTensor(s)));
        Ok(())
    })
}

/// Tensor file text for a handle; free with `ht_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ht_tensor_to_json(t: *const HtTensor, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        *out = into_c_string(htensor::io::tensor_to_json(tensor_ref(t)?));
        Ok(())
    })
}

/// The conjugate form at `x` (length `len`).
#[no_mangle]
pub unsafe extern "C" fn ht_eval_form(
    t: *const HtTensor,
    x: *const HtComplex,
    len: usize,
    out: *mut HtComplex,
) -> HtStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let x: Vec<Complex64> = slice(x, len, "x")?.iter().map(|&z| z.into()).collect();
        *out_ref(out, "out")? = t.eval_form(&x)?.into();
        Ok(())
    })
}

/// Smallest and largest eigenvalue of the symmetrization. `cfg` may be null.
#[no_mangle]
pub unsafe extern "C" fn ht_extremal(
    t: *const HtTensor,
    cfg: *const HtSolverConfig,
    lambda_min: *mut f64,
    lambda_max: *mut f64,
) -> HtStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let cfg = config(cfg)?;
        let lo = out_ref(lambda_min, "lambda_min")?;
        let hi = out_ref(lambda_max, "lambda_max")?;
        let (min, max) = extremal_eigenvalues(t, &cfg)?;
        *lo = min.lambda.re;
        *hi = max.lambda.re;
        Ok(())
    })
}

/// Distinct eigenvalues (real parts, ascending) found by the multi-start
/// solver. `count` receives the number found; when it exceeds `capacity`
/// nothing is written and `BufferTooSmall` is returned.
#[no_mangle]
pub unsafe extern "C" fn ht_enumerate(
    t: *const HtTensor,
    cfg: *const HtSolverConfig,
    out: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> HtStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let cfg = config(cfg)?;
        let count = out_ref(count, "count")?;
        let pairs = enumerate_eigenvalues(t, &cfg)?;
        *count = pairs.len();
        if pairs.len() > capacity {
            return Err(Failure(
                HtStatus::BufferTooSmall,
                format!("{} eigenvalues, capacity {capacity}", pairs.len()),
            ));
        }
        if !pairs.is_empty() && out.is_null() {
            return Err(null("out"));
        }
        for (k, p) in pairs.iter().enumerate() {
            *out.add(k) = p.lambda.re;
        }
        Ok(())
    })
}

/// Definiteness certificate with the automatic rule order.
#[no_mangle]
pub unsafe extern "C" fn ht_certify(
    t: *const HtTensor,
    cfg: *const HtSolverConfig,
    out: *mut HtCertificate,
) -> HtStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let cfg = config(cfg)?;
        let out = out_ref(out, "out")?;
        *out = certificate(&certify(t, &cfg)?);
        Ok(())
    })
}

/// Full certificate, witness included, as JSON; free with `ht_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ht_certify_json(
    t: *const HtTensor,
    cfg: *const HtSolverConfig,
    out: *mut *mut c_char,
) -> HtStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let t = tensor_ref(t)?;
        let cfg = config(cfg)?;
        let cert = certify(t, &cfg)?;
        let text = serde_json::to_string(&cert).map_err(|e| Failure(HtStatus::Domain, e.to_string()))?;
        *out = into_c_string(text);
        Ok(())
    })
}

/// Whether `z` lies in the chosen inclusion set of `t`.
#[no_mangle]
pub unsafe extern "C" fn ht_inclusion_contains(
    t: *const HtTensor,
    set: HtInclusionSet,
    z: HtComplex,
    out: *mut bool,
) -> HtStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let out = out_ref(out, "out")?;
        let region = match set {
            HtInclusionSet::Gershgorin => gershgorin_set(t),
            HtInclusionSet::Llk => llk_set(t)?,
            HtInclusionSet::Ll => ll_set(t)?,
        };
        *out = region.contains(z.into());
        Ok(())
    })
}
