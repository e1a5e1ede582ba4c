//! C ABI for the symhecke library: opaque matrix handles, status codes, and
//! JSON-string results so any language with a C FFI can drive the normal
//! forms, the brute-force engine, and the closed formulas.
//!
//! Ownership rules: every `*mut ShMatrix` returned here must be released with
//! `sh_matrix_free`; every `*mut c_char` with `sh_string_free`. All input
//! strings are NUL-terminated UTF-8.

use std::ffi::{c_char, CStr, CString};
use std::ptr;
use symhecke::cosets::MuFamily;
use symhecke::coweight::{dominant_coweight, symmetric_coweight_with};
use symhecke::engine::h_bruteforce;
use symhecke::error::Error;
use symhecke::formulas::{
    h_compute1, h_computen, h_corollary, h_dual1, h_mainthm, h_young, p_dual,
};
use symhecke::matrix::LMatrix;
use symhecke::qpoly::QPoly;
use symhecke::shapes::SymCoweight;
use symhecke::PrimeField;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShStatus {
    ShOk = 0,
    ShErrParse = 1,
    ShErrSingular = 2,
    ShErrPrecondition = 3,
    ShErrPrecision = 4,
    ShErrBudget = 5,
    ShErrInternal = 6,
    ShErrNullArgument = 7,
}

fn status_of(err: &Error) -> ShStatus {
    match err {
        Error::Parse(_) | Error::BadModulus(_) | Error::UnsupportedMu(_) => ShStatus::ShErrParse,
        Error::Singular => ShStatus::ShErrSingular,
        Error::Precondition(_) | Error::FieldMismatch(_, _) => ShStatus::ShErrPrecondition,
        Error::PrecisionExhausted | Error::ZeroInvert => ShStatus::ShErrPrecision,
        Error::Budget(_) => ShStatus::ShErrBudget,
        Error::InvariantMismatch(_) | Error::ReductionBudget | Error::NegativeDegree(_) => {
            ShStatus::ShErrInternal
        }
    }
}

/// Opaque handle around an exact matrix over k((z)).
pub struct ShMatrix {
    inner: LMatrix,
}

fn out_string(s: String, out: *mut *mut c_char) -> ShStatus {
    // interior NULs cannot appear in our JSON output
    let c = CString::new(s).expect("no interior NUL");
    unsafe {
        *out = c.into_raw();
    }
    ShStatus::ShOk
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ShStatus> {
    if ptr.is_null() {
        return Err(ShStatus::ShErrNullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| ShStatus::ShErrParse)
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Short human-readable description of a status code; static, do not free.
#[no_mangle]
pub extern "C" fn sh_status_message(status: ShStatus) -> *const c_char {
    let msg: &'static str = match status {
        ShStatus::ShOk => "ok\0",
        ShStatus::ShErrParse => "parse error or bad modulus\0",
        ShStatus::ShErrSingular => "singular matrix\0",
        ShStatus::ShErrPrecondition => "precondition violated\0",
        ShStatus::ShErrPrecision => "precision exhausted\0",
        ShStatus::ShErrBudget => "enumeration budget exceeded\0",
        ShStatus::ShErrInternal => "internal invariant failure\0",
        ShStatus::ShErrNullArgument => "null argument\0",
    };
    msg.as_ptr() as *const c_char
}

/// Parse a matrix from its JSON encoding
/// {"p": prime, "dim": m, "entries": [[row, col, [[exp, coeff], ...]], ...]}.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sh_matrix_parse(
    json: *const c_char,
    out: *mut *mut ShMatrix,
) -> ShStatus {
    if out.is_null() {
        return ShStatus::ShErrNullArgument;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(_) => return ShStatus::ShErrParse,
    };
    match LMatrix::from_json(&value) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(ShMatrix { inner: m }));
            ShStatus::ShOk
        }
        Err(e) => status_of(&e),
    }
}

/// Release a matrix handle.
///
/// # Safety
/// `m` must come from `sh_matrix_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sh_matrix_free(m: *mut ShMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from a symhecke call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Dominant coweight as a JSON array of parts.
///
/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sh_rho(m: *const ShMatrix, out: *mut *mut c_char) -> ShStatus {
    if m.is_null() || out.is_null() {
        return ShStatus::ShErrNullArgument;
    }
    match dominant_coweight(&(*m).inner) {
        Ok(rho) => out_string(
            serde_json::json!({ "rho": rho.parts() }).to_string(),
            out,
        ),
        Err(e) => status_of(&e),
    }
}

/// Symmetric coweight as JSON {"blocks": [...], "z": n, "one": n, "padded": [...]}.
/// `precision` <= 0 selects the default policy.
///
/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sh_sigma(
    m: *const ShMatrix,
    precision: i64,
    out: *mut *mut c_char,
) -> ShStatus {
    if m.is_null() || out.is_null() {
        return ShStatus::ShErrNullArgument;
    }
    let prec = if precision > 0 { Some(precision) } else { None };
    match symmetric_coweight_with(&(*m).inner, prec) {
        Ok(sigma) => out_string(
            serde_json::json!({
                "blocks": sigma.big_parts(),
                "z": sigma.count_z(),
                "one": sigma.count_one(),
                "padded": sigma.padded(),
            })
            .to_string(),
            out,
        ),
        Err(e) => status_of(&e),
    }
}

fn formula_dispatch(rule: &str, params: &str) -> Result<QPoly, Error> {
    let mut map = std::collections::BTreeMap::new();
    for tok in params.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{}'", tok)))?;
        map.insert(k.to_string(), v.to_string());
    }
    let geti = |k: &str| -> Result<i64, Error> {
        map.get(k)
            .ok_or_else(|| Error::Parse(format!("missing parameter '{}'", k)))?
            .parse()
            .map_err(|e: std::num::ParseIntError| Error::Parse(format!("{}: {}", k, e)))
    };
    let gets = |k: &str| -> Result<SymCoweight, Error> {
        SymCoweight::parse(
            map.get(k)
                .ok_or_else(|| Error::Parse(format!("missing parameter '{}'", k)))?,
        )
    };
    match rule {
        "computen" => Ok(h_computen(geti("n")?, geti("i")?, geti("j")?, geti("k")?)),
        "compute1" => Ok(h_compute1(
            geti("n1")?,
            geti("n2")?,
            geti("a")?,
            geti("b")?,
            geti("c")?,
        )),
        "mainthm" => h_mainthm(geti("l")? as usize, &gets("nu")?, &gets("lambda")?),
        "corollary" => h_corollary(geti("l")? as usize, &gets("nu")?, &gets("lambda")?),
        "young" => h_young(geti("l")? as usize, &gets("nu")?, &gets("lambda")?),
        "dual-n" => p_dual(geti("n")?, geti("l")?, geti("i")?, geti("j")?),
        "dual-1" => h_dual1(geti("l")?, geti("j")?),
        other => Err(Error::Parse(format!("unknown rule '{}'", other))),
    }
}

/// Evaluate a closed formula. `rule` is one of computen, compute1, mainthm,
/// corollary, young, dual-n, dual-1; `params` is space-separated key=value
/// pairs (shapes as comma lists, e.g. "l=1 nu=3,0 lambda=4,0"). The result is
/// JSON {"poly": [[deg, coeff], ...], "display": "..."}.
///
/// # Safety
/// `rule`, `params`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sh_formula(
    rule: *const c_char,
    params: *const c_char,
    out: *mut *mut c_char,
) -> ShStatus {
    if out.is_null() {
        return ShStatus::ShErrNullArgument;
    }
    let rule = match read_str(rule) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let params = match read_str(params) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match formula_dispatch(rule, params) {
        Ok(poly) => out_string(
            serde_json::json!({ "poly": poly.to_json(), "display": poly.to_string() })
                .to_string(),
            out,
        ),
        Err(e) => status_of(&e),
    }
}

/// Brute-force structure constants: counts of sigma(X * Pi^nu) over the mu
/// family, as JSON {"counts": {"lambda": count, ...}, "total": n}.
/// `threads` = 0 selects single-threaded operation.
///
/// # Safety
/// `mu`, `nu`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sh_brute(
    prime: u64,
    mu: *const c_char,
    nu: *const c_char,
    threads: u32,
    out: *mut *mut c_char,
) -> ShStatus {
    if out.is_null() {
        return ShStatus::ShErrNullArgument;
    }
    let mu = match read_str(mu) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let nu = match read_str(nu) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let inner = || -> Result<String, Error> {
        let field = PrimeField::new(prime)?;
        let mu = MuFamily::parse(mu)?;
        let nu = SymCoweight::parse(nu)?;
        let hv = h_bruteforce(field, mu, &nu, threads.max(1) as usize, false)?;
        let counts: serde_json::Map<String, serde_json::Value> = hv
            .counts
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        Ok(serde_json::json!({ "counts": counts, "total": hv.total() }).to_string())
    };
    match inner() {
        Ok(s) => out_string(s, out),
        Err(e) => status_of(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn take_string(ptr: *mut c_char) -> String {
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        sh_string_free(ptr);
        s
    }

    #[test]
    fn matrix_round_trip_and_invariants() {
        let json =
            CString::new(r#"{"p":3,"dim":2,"entries":[[0,0,[[0,1]]],[0,1,[[1,1]]],[1,1,[[3,1]]]]}"#)
                .unwrap();
        let mut handle: *mut ShMatrix = ptr::null_mut();
        unsafe {
            assert_eq!(sh_matrix_parse(json.as_ptr(), &mut handle), ShStatus::ShOk);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(sh_rho(handle, &mut out), ShStatus::ShOk);
            let rho = take_string(out);
            assert!(rho.contains("[3,0]"), "{}", rho);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(sh_sigma(handle, 0, &mut out), ShStatus::ShOk);
            let sigma = take_string(out);
            assert!(sigma.contains("\"blocks\":[3]"), "{}", sigma);
            sh_matrix_free(handle);
        }
    }

    #[test]
    fn parse_errors_map_to_status() {
        let json = CString::new("{not json").unwrap();
        let mut handle: *mut ShMatrix = ptr::null_mut();
        unsafe {
            assert_eq!(
                sh_matrix_parse(json.as_ptr(), &mut handle),
                ShStatus::ShErrParse
            );
        }
        // characteristic 2 rejected
        let json = CString::new(r#"{"p":2,"dim":1,"entries":[[0,0,[[0,1]]]]}"#).unwrap();
        unsafe {
            assert_eq!(
                sh_matrix_parse(json.as_ptr(), &mut handle),
                ShStatus::ShErrParse
            );
        }
    }

    #[test]
    fn singular_matrix_status() {
        let json = CString::new(r#"{"p":3,"dim":2,"entries":[[0,0,[[0,1]]]]}"#).unwrap();
        let mut handle: *mut ShMatrix = ptr::null_mut();
        unsafe {
            assert_eq!(sh_matrix_parse(json.as_ptr(), &mut handle), ShStatus::ShOk);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(sh_rho(handle, &mut out), ShStatus::ShErrSingular);
            sh_matrix_free(handle);
        }
    }

    #[test]
    fn formula_and_brute_agree() {
        unsafe {
            let rule = CString::new("mainthm").unwrap();
            let params = CString::new("l=1 nu=3,0 lambda=4,0").unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                sh_formula(rule.as_ptr(), params.as_ptr(), &mut out),
                ShStatus::ShOk
            );
            let formula = take_string(out);
            assert!(formula.contains("\"display\":\"q\""), "{}", formula);

            let mu = CString::new("-1^1").unwrap();
            let nu = CString::new("3,0").unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                sh_brute(3, mu.as_ptr(), nu.as_ptr(), 2, &mut out),
                ShStatus::ShOk
            );
            let brute = take_string(out);
            assert!(brute.contains("\"4,0\":3"), "{}", brute);
        }
    }

    #[test]
    fn version_and_messages_are_static() {
        unsafe {
            let v = CStr::from_ptr(sh_version()).to_str().unwrap();
            assert!(!v.is_empty());
            let m = CStr::from_ptr(sh_status_message(ShStatus::ShErrBudget))
                .to_str()
                .unwrap();
            assert!(m.contains("budget"));
        }
    }
}
