//! C ABI for `bpp-core`.
//!
//! Every function returns a [`BppStatus`]. On failure the message is kept per
//! thread and can be read with [`bpp_last_error`]. Strings handed out by the
//! library must be released with [`bpp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bpp_core::algebra::{fmt_rational, parse_rational};
use bpp_core::biasimir::reduce;
use bpp_core::lr_process::{isotypic_measure, sample, weyl_dim, IsotypicMeasure, Signature};
use bpp_core::moments::{limit_at_infinity, tau_decomposition, WordSpec};
use bpp_core::monotone_walks::count_monotone_walks;
use bpp_core::permutations::{ExponentFunction, Permutation};
use bpp_core::weingarten::wg_class;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Overflow = 4,
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn guard(f: impl FnOnce() -> Result<(), (BppStatus, String)>) -> BppStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BppStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BppStatus::Panic
        }
    }
}

fn invalid<E: std::fmt::Display>(e: E) -> (BppStatus, String) {
    (BppStatus::InvalidArgument, e.to_string())
}

fn null(name: &str) -> (BppStatus, String) {
    (BppStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (BppStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (BppStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], (BppStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write_json(out: *mut *mut c_char, v: &Value) -> Result<(), (BppStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(v.to_string()).map_err(invalid)?;
    *out = s.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn bpp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bpp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bpp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Weyl dimension of the signature `parts[0..n]`.
///
/// # Safety
/// `parts` must point to `n` integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_weyl_dim(parts: *const i64, n: usize, out: *mut u64) -> BppStatus {
    guard(|| {
        let s = Signature::new(read_slice(parts, n, "parts")?.to_vec()).map_err(invalid)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = weyl_dim(&s).to_u64().ok_or((BppStatus::Overflow, "dimension exceeds 64 bits".into()))?;
        *out = d;
        Ok(())
    })
}

/// Number of `steps`-step monotone walks between two permutations in one-line notation (1-based).
///
/// # Safety
/// `pi1` and `pi2` must point to `d` integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_count_monotone_walks(
    pi1: *const u32,
    pi2: *const u32,
    d: usize,
    steps: usize,
    out: *mut u64,
) -> BppStatus {
    guard(|| {
        let perm = |p: &[u32]| Permutation::new(p.iter().map(|&x| x as usize).collect()).map_err(invalid);
        let a = perm(read_slice(pi1, d, "pi1")?)?;
        let b = perm(read_slice(pi2, d, "pi2")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = count_monotone_walks(&a, &b, steps).map_err(invalid)?;
        *out = c.to_u64().ok_or((BppStatus::Overflow, "count exceeds 64 bits".into()))?;
        Ok(())
    })
}

/// Weingarten function of a cycle type as JSON `{"class": [...], "value": "..."}`.
///
/// # Safety
/// `cycle_type` must point to `len` integers; `out` receives a string for [`bpp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bpp_wg_json(cycle_type: *const u32, len: usize, out: *mut *mut c_char) -> BppStatus {
    guard(|| {
        let mut class: Vec<usize> = read_slice(cycle_type, len, "cycle_type")?.iter().map(|&x| x as usize).collect();
        if class.is_empty() || class.contains(&0) {
            return Err(invalid("cycle type must be a nonempty list of positive parts"));
        }
        class.sort_unstable_by(|a, b| b.cmp(a));
        let f = wg_class(&class, bpp_core::weingarten::DEFAULT_D_CAP).map_err(invalid)?;
        write_json(out, &json!({ "class": class, "value": f.to_string() }))
    })
}

/// Biasimir reduction as JSON `{"classical": {...}, "quantum": {...}}`.
///
/// # Safety
/// `perm` must be a NUL-terminated string, `exps` must point to `d` integers.
#[no_mangle]
pub unsafe extern "C" fn bpp_biasimir_json(
    perm: *const c_char,
    exps: *const u32,
    d: usize,
    out: *mut *mut c_char,
) -> BppStatus {
    guard(|| {
        let pi = Permutation::parse(read_str(perm, "perm")?, Some(d)).map_err(invalid)?;
        let r = ExponentFunction::new(read_slice(exps, d, "exps")?.to_vec());
        let red = reduce(&pi, &r).map_err(invalid)?;
        let map = |p: &bpp_core::biasimir::CasimirPolynomial| -> Value {
            p.terms().map(|(m, c)| (m.to_string(), Value::String(c.to_string()))).collect()
        };
        write_json(out, &json!({ "classical": map(&red.classical), "quantum": map(&red.quantum) }))
    })
}

/// Opaque mixed-moment word `A^p1 B^q1 ... A^pd B^qd`.
pub struct BppWord {
    word: WordSpec,
}

/// Create a word handle; release it with [`bpp_word_free`].
///
/// # Safety
/// `p` and `q` must point to `d` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_word_new(p: *const u32, q: *const u32, d: usize, out: *mut *mut BppWord) -> BppStatus {
    guard(|| {
        let word = WordSpec::new(read_slice(p, d, "p")?.to_vec(), read_slice(q, d, "q")?.to_vec()).map_err(invalid)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(BppWord { word }));
        Ok(())
    })
}

/// # Safety
/// `w` must come from [`bpp_word_new`] and must not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bpp_word_free(w: *mut BppWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Classical/quantum decomposition as JSON; with `limit != 0` also the `N -> infinity` limit.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_tau_json(w: *const BppWord, limit: i32, out: *mut *mut c_char) -> BppStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("word"))?;
        let dec = tau_decomposition(&w.word).map_err(invalid)?;
        let map = |p: &bpp_core::moments::MomentPolynomial| -> Value {
            p.terms().map(|(m, c)| (m.to_string(), Value::String(c.to_string()))).collect()
        };
        let mut v = json!({ "classical": map(&dec.classical), "quantum": map(&dec.quantum) });
        if limit != 0 {
            let lt = limit_at_infinity(&dec.total()).map_err(invalid)?;
            let m: Value = lt.terms().map(|(m, c)| (m.to_string(), Value::String(fmt_rational(c)))).collect();
            v["limit"] = m;
        }
        write_json(out, &v)
    })
}

/// Opaque isotypic measure of `V_lambda (x) V_mu`.
pub struct BppMeasure {
    measure: IsotypicMeasure,
}

/// # Safety
/// `lambda` and `mu` must point to `n` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_measure_new(
    lambda: *const i64,
    mu: *const i64,
    n: usize,
    out: *mut *mut BppMeasure,
) -> BppStatus {
    guard(|| {
        let l = Signature::new(read_slice(lambda, n, "lambda")?.to_vec()).map_err(invalid)?;
        let m = Signature::new(read_slice(mu, n, "mu")?.to_vec()).map_err(invalid)?;
        let measure = isotypic_measure(&l, &m).map_err(invalid)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(BppMeasure { measure }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`bpp_measure_new`] and must not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bpp_measure_free(m: *mut BppMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of signatures in the support.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_measure_len(m: *const BppMeasure, out: *mut usize) -> BppStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("measure"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.measure.weights.len();
        Ok(())
    })
}

/// Probabilities as JSON `{"(2,0)": "3/4", ...}`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_measure_json(m: *const BppMeasure, out: *mut *mut c_char) -> BppStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("measure"))?;
        let v: Value = m
            .measure
            .weights
            .iter()
            .map(|(s, p)| (s.to_string(), Value::String(fmt_rational(p))))
            .collect();
        write_json(out, &v)
    })
}

/// `count` seeded draws as a JSON list of signatures.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_measure_sample_json(
    m: *const BppMeasure,
    seed: u64,
    count: usize,
    out: *mut *mut c_char,
) -> BppStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("measure"))?;
        let draws = sample(&m.measure, seed, count).map_err(invalid)?;
        write_json(out, &serde_json::to_value(draws).map_err(invalid)?)
    })
}

/// Deformed power sum of the particles `c_i = hbar (lambda_i + N - i)`, as a `"p/q"` string.
///
/// # Safety
/// `lambda` must point to `n` integers, `hbar` must be a NUL-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_power_sum(
    lambda: *const i64,
    n: usize,
    hbar: *const c_char,
    k: u32,
    normalized: i32,
    out: *mut *mut c_char,
) -> BppStatus {
    guard(|| {
        let s = Signature::new(read_slice(lambda, n, "lambda")?.to_vec()).map_err(invalid)?;
        let h = read_str(hbar, "hbar")?;
        let h = parse_rational(h).ok_or_else(|| invalid(format!("not a rational: {h:?}")))?;
        if h <= num_rational::BigRational::from_integer(0.into()) {
            return Err(invalid("hbar must be positive"));
        }
        let cfg = bpp_core::lr_process::signature_to_config(&s, &h);
        let v = bpp_core::lr_process::bpp_power_sum(&cfg, k, normalized != 0);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(fmt_rational(&v)).map_err(invalid)?.into_raw();
        Ok(())
    })
}

/// Run the command line with `argv[0..argc]` (without the program name).
///
/// `exit_code` receives 0, 1 or 2 as the `bpp` binary would return; `out`
/// receives standard output on success or the error text otherwise.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `exit_code` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpp_run(
    argc: usize,
    argv: *const *const c_char,
    exit_code: *mut i32,
    out: *mut *mut c_char,
) -> BppStatus {
    guard(|| {
        let ptrs = read_slice(argv, argc, "argv")?;
        let mut args = vec!["bpp".to_string()];
        for (i, &p) in ptrs.iter().enumerate() {
            args.push(read_str(p, &format!("argv[{i}]"))?.to_string());
        }
        if exit_code.is_null() || out.is_null() {
            return Err(null("exit_code/out"));
        }
        let o = bpp_core::cli::execute(args);
        *exit_code = o.code;
        let text = if o.code == 2 { o.stderr } else { o.stdout };
        *out = CString::new(text).map_err(invalid)?.into_raw();
        Ok(())
    })
}
