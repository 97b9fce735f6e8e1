//! C interface to `torushms`.
//!
//! Objects cross the boundary as opaque handles returned through out
//! pointers and released with the matching `*_free`. Every fallible
//! function returns a [`TorushmsStatus`]; on failure the message is available
//! from [`torushms_last_error`] until the next call on the same thread.
//! Strings returned through `char **` outputs are owned by the caller and
//! released with [`torushms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use torushms::cli;
use torushms::expr::parse_expr;
use torushms::floer::{cf, mu2, FloerElement};
use torushms::mirror::{theta_sharp, zeta_injectivity_witness, Step1Config};
use torushms::novikov::{Complex, NovikovSeries};
use torushms::tate::SectionCoeffs;
use torushms::torus::Brane;
use torushms::{Error, Rational};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorushmsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    NonTransverse = 5,
    DegenerateConfiguration = 6,
    MarkerCollision = 7,
    UnanchoredSlope = 8,
    NonUnit = 9,
    OtherDomainError = 10,
    Panic = 11,
}

/// A parsed brane.
pub struct TorushmsBrane(Brane);

/// A truncated series with complex coefficients.
pub struct TorushmsSeries(NovikovSeries);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn domain_status(e: &Error) -> TorushmsStatus {
    match e {
        Error::InvalidArgument(_) => TorushmsStatus::InvalidArgument,
        Error::NonTransverse(_) => TorushmsStatus::NonTransverse,
        Error::DegenerateConfiguration(_) => TorushmsStatus::DegenerateConfiguration,
        Error::MarkerCollision(_) => TorushmsStatus::MarkerCollision,
        Error::UnanchoredSlope(_) => TorushmsStatus::UnanchoredSlope,
        Error::NonUnit(_) | Error::ZeroSeries => TorushmsStatus::NonUnit,
        _ => TorushmsStatus::OtherDomainError,
    }
}

struct Fail(TorushmsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(domain_status(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TorushmsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TorushmsStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TorushmsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TorushmsStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(TorushmsStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn brane_ref<'a>(p: *const TorushmsBrane) -> Result<&'a Brane, Fail> {
    p.as_ref().map(|b| &b.0).ok_or_else(|| Fail(TorushmsStatus::NullPointer, "null brane handle".into()))
}

fn check_out<T>(p: *mut T) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(TorushmsStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn ratio(num: i64, den: i64) -> Result<Rational, Fail> {
    if den == 0 {
        return Err(Fail(TorushmsStatus::InvalidArgument, "zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

fn cutoff(num: i64, den: i64) -> Result<Rational, Fail> {
    let c = ratio(num, den)?;
    if c <= Rational::from_integer(0) {
        return Err(Fail(TorushmsStatus::InvalidArgument, "cutoff must be positive".into()));
    }
    Ok(c)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn torushms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread (empty if none). Valid
/// until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn torushms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Accepts null.
///
/// # Safety
/// `s` must be null or a string obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn torushms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a brane literal such as `L(0,-1;1/3){M=phase 1/5}`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torushms_brane_parse(text: *const c_char, out: *mut *mut TorushmsBrane) -> TorushmsStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(text)?;
        let e = parse_expr(text).map_err(|e| Fail(TorushmsStatus::ParseError, e.to_string()))?;
        let b = e.brane()?;
        *out = Box::into_raw(Box::new(TorushmsBrane(b)));
        Ok(())
    })
}

/// Releases a brane handle. Accepts null.
///
/// # Safety
/// `b` must be null or a handle from [`torushms_brane_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn torushms_brane_free(b: *mut TorushmsBrane) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Number of generators of `CF(l0, l1)` and their common degree.
///
/// # Safety
/// Handles must be live; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_cf_generators(
    l0: *const TorushmsBrane,
    l1: *const TorushmsBrane,
    out_count: *mut usize,
    out_degree: *mut i64,
) -> TorushmsStatus {
    guard(|| {
        check_out(out_count)?;
        check_out(out_degree)?;
        let space = cf(brane_ref(l0)?, brane_ref(l1)?)?;
        *out_count = space.generators.len();
        *out_degree = space.degree();
        Ok(())
    })
}

/// Coefficient at generator `index` of `μ²(φ₂, φ₁)` where `φ₁`, `φ₂` have
/// coefficient 1 on every generator. All three branes must have rank one.
///
/// # Safety
/// Handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_mu2_unit(
    l0: *const TorushmsBrane,
    l1: *const TorushmsBrane,
    l2: *const TorushmsBrane,
    index: usize,
    cutoff_num: i64,
    cutoff_den: i64,
    out: *mut *mut TorushmsSeries,
) -> TorushmsStatus {
    guard(|| {
        check_out(out)?;
        let (b0, b1, b2) = (brane_ref(l0)?, brane_ref(l1)?, brane_ref(l2)?);
        if b0.rank() != 1 || b1.rank() != 1 || b2.rank() != 1 {
            return Err(Fail(TorushmsStatus::InvalidArgument, "branes must carry rank-one local systems".into()));
        }
        let c = cutoff(cutoff_num, cutoff_den)?;
        let s01 = cf(b0, b1)?;
        let s12 = cf(b1, b2)?;
        let p1 = FloerElement::from_scalars(&s01, vec![NovikovSeries::one(); s01.generators.len()])?;
        let p2 = FloerElement::from_scalars(&s12, vec![NovikovSeries::one(); s12.generators.len()])?;
        let r = mu2(&p2, &p1, c)?;
        let m = r
            .components()
            .get(index)
            .ok_or_else(|| Fail(TorushmsStatus::InvalidArgument, format!("generator {index} out of range")))?;
        *out = Box::into_raw(Box::new(TorushmsSeries(m.get(0, 0).clone())));
        Ok(())
    })
}

/// The product of the section with coefficients `σ = (s0, s1)` and the
/// generator of `CF(L_{(0,−1),x}, L_{(1,2)})` with monodromy `e^{2πi·phase}`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_step1_series(
    x_num: i64,
    x_den: i64,
    phase_num: i64,
    phase_den: i64,
    s0_re: f64,
    s0_im: f64,
    s1_re: f64,
    s1_im: f64,
    cutoff_num: i64,
    cutoff_den: i64,
    out: *mut *mut TorushmsSeries,
) -> TorushmsStatus {
    guard(|| {
        check_out(out)?;
        let x = ratio(x_num, x_den)?;
        let m = NovikovSeries::phase(ratio(phase_num, phase_den)?);
        let sigma = SectionCoeffs::constant(Complex::new(s0_re, s0_im), Complex::new(s1_re, s1_im))?;
        let s = Step1Config::new(x, &m)?.product(&sigma, cutoff(cutoff_num, cutoff_den)?)?;
        *out = Box::into_raw(Box::new(TorushmsSeries(s)));
        Ok(())
    })
}

/// Number of stored terms.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn torushms_series_len(s: *const TorushmsSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.terms().len())
}

/// The `i`-th term in increasing exponent order.
///
/// # Safety
/// `s` must be a live handle; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_series_term(
    s: *const TorushmsSeries,
    i: usize,
    exp_num: *mut i64,
    exp_den: *mut i64,
    re: *mut f64,
    im: *mut f64,
) -> TorushmsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| Fail(TorushmsStatus::NullPointer, "null series handle".into()))?;
        check_out(exp_num)?;
        check_out(exp_den)?;
        check_out(re)?;
        check_out(im)?;
        let (e, c) = s
            .0
            .terms()
            .get(i)
            .ok_or_else(|| Fail(TorushmsStatus::InvalidArgument, format!("term {i} out of range")))?;
        *exp_num = *e.numer();
        *exp_den = *e.denom();
        *re = c.re;
        *im = c.im;
        Ok(())
    })
}

/// Releases a series handle. Accepts null.
///
/// # Safety
/// `s` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn torushms_series_free(s: *mut TorushmsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Rank and degree of the K-theory class of an anchored brane.
///
/// # Safety
/// `b` must be live; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_theta_sharp(b: *const TorushmsBrane, out_rank: *mut i64, out_degree: *mut i64) -> TorushmsStatus {
    guard(|| {
        check_out(out_rank)?;
        check_out(out_degree)?;
        let c = theta_sharp(brane_ref(b)?)?;
        *out_rank = c.rk;
        *out_degree = c.deg;
        Ok(())
    })
}

/// Whether the injectivity witness at `x` is nonzero (1) or zero (0).
///
/// # Safety
/// `out_nonzero` must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_witness_nonzero(x_num: i64, x_den: i64, tol: f64, out_nonzero: *mut i32) -> TorushmsStatus {
    guard(|| {
        check_out(out_nonzero)?;
        let c = zeta_injectivity_witness(ratio(x_num, x_den)?)?;
        *out_nonzero = i32::from(!c.is_zero(tol));
        Ok(())
    })
}

/// Runs a command-line invocation (`argv[0]` is the program name) and
/// returns its exit code, stdout and stderr. Output strings are always set
/// on success and must be released with [`torushms_string_free`].
///
/// # Safety
/// `argv` must hold `argc` valid NUL-terminated strings; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn torushms_cli_run(
    argc: usize,
    argv: *const *const c_char,
    out_exit: *mut i32,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> TorushmsStatus {
    guard(|| {
        check_out(out_exit)?;
        check_out(out_stdout)?;
        check_out(out_stderr)?;
        if argc > 0 && argv.is_null() {
            return Err(Fail(TorushmsStatus::NullPointer, "null argv".into()));
        }
        let mut args = Vec::with_capacity(argc);
        for i in 0..argc {
            args.push(read_str(*argv.add(i))?.to_string());
        }
        let (code, out, err) = cli::run(args);
        let to_c = |s: String| CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw();
        *out_exit = code;
        *out_stdout = to_c(out);
        *out_stderr = to_c(err);
        Ok(())
    })
}
