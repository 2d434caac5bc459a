//! C ABI over the core library: opaque handles, integer status codes, and
//! caller-freed C strings. The header is generated into include/nadic.h at
//! build time.
//!
//! Conventions: every fallible call returns `NadicStatus` and writes its
//! result through an out pointer, which is left untouched on error. Handles
//! are created and released by the matching `_new`/`_free` pair; strings
//! returned through `char**` must be released with `nadic_string_free`.

use std::ffi::{c_char, CStr, CString};

use nadic::prng::{seed_state, PrngState};
use nadic::{analytic, Error, NadicContext, NadicInt};

/// Status codes mirroring the library's error names.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NadicStatus {
    NadicOk = 0,
    NadicInvalidArgument = 1,
    NadicNotInvertible = 2,
    NadicDenominatorNotUnit = 3,
    NadicInvalidDigit = 4,
    NadicUnsupportedPrime2 = 5,
    NadicNonUnit = 6,
    NadicNoSquareRoot = 7,
    NadicOutsideConvergenceRadius = 8,
    NadicNotPeriodic = 9,
    NadicInvalidFamily = 10,
    NadicDegenerateSquare = 11,
    NadicInvalidCharacter = 12,
    NadicNotCoprime = 13,
    NadicUnsupportedShape = 14,
    NadicParseError = 15,
    NadicInternalError = 16,
    /// A required pointer argument was null.
    NadicNullPointer = 17,
}

fn status_of(e: &Error) -> NadicStatus {
    match e.name() {
        "invalid-argument" => NadicStatus::NadicInvalidArgument,
        "not-invertible" => NadicStatus::NadicNotInvertible,
        "denominator-not-unit" => NadicStatus::NadicDenominatorNotUnit,
        "invalid-digit" => NadicStatus::NadicInvalidDigit,
        "unsupported-prime-2" => NadicStatus::NadicUnsupportedPrime2,
        "non-unit" => NadicStatus::NadicNonUnit,
        "no-square-root" => NadicStatus::NadicNoSquareRoot,
        "outside-convergence-radius" => NadicStatus::NadicOutsideConvergenceRadius,
        "not-periodic" => NadicStatus::NadicNotPeriodic,
        "invalid-family" => NadicStatus::NadicInvalidFamily,
        "degenerate-square" => NadicStatus::NadicDegenerateSquare,
        "invalid-character" => NadicStatus::NadicInvalidCharacter,
        "not-coprime" => NadicStatus::NadicNotCoprime,
        "unsupported-shape" => NadicStatus::NadicUnsupportedShape,
        "parse-error" => NadicStatus::NadicParseError,
        _ => NadicStatus::NadicInternalError,
    }
}

/// Short stable name for a status code ("ok", "not-invertible", ...).
#[no_mangle]
pub extern "C" fn nadic_status_name(status: NadicStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        NadicStatus::NadicOk => b"ok\0",
        NadicStatus::NadicInvalidArgument => b"invalid-argument\0",
        NadicStatus::NadicNotInvertible => b"not-invertible\0",
        NadicStatus::NadicDenominatorNotUnit => b"denominator-not-unit\0",
        NadicStatus::NadicInvalidDigit => b"invalid-digit\0",
        NadicStatus::NadicUnsupportedPrime2 => b"unsupported-prime-2\0",
        NadicStatus::NadicNonUnit => b"non-unit\0",
        NadicStatus::NadicNoSquareRoot => b"no-square-root\0",
        NadicStatus::NadicOutsideConvergenceRadius => b"outside-convergence-radius\0",
        NadicStatus::NadicNotPeriodic => b"not-periodic\0",
        NadicStatus::NadicInvalidFamily => b"invalid-family\0",
        NadicStatus::NadicDegenerateSquare => b"degenerate-square\0",
        NadicStatus::NadicInvalidCharacter => b"invalid-character\0",
        NadicStatus::NadicNotCoprime => b"not-coprime\0",
        NadicStatus::NadicUnsupportedShape => b"unsupported-shape\0",
        NadicStatus::NadicParseError => b"parse-error\0",
        NadicStatus::NadicInternalError => b"internal-error\0",
        NadicStatus::NadicNullPointer => b"null-pointer\0",
    };
    name.as_ptr() as *const c_char
}

/// Opaque ring handle (base n, precision k).
pub struct NadicCtx(NadicContext);
/// Opaque ring-element handle.
pub struct NadicElem(NadicInt);
/// Opaque generator handle.
pub struct NadicPrng(PrngState);

macro_rules! nonnull {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(r) => r,
            None => return NadicStatus::NadicNullPointer,
        }
    };
}

fn emit_string(s: String, out: *mut *mut c_char) -> NadicStatus {
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            NadicStatus::NadicOk
        }
        Err(_) => NadicStatus::NadicInternalError,
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nadic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Create the ring Z/base^precision Z.
#[no_mangle]
pub extern "C" fn nadic_ctx_new(base: u64, precision: u32, out: *mut *mut NadicCtx) -> NadicStatus {
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    match NadicContext::new(base, precision) {
        Ok(ctx) => {
            unsafe { *out = Box::into_raw(Box::new(NadicCtx(ctx))) };
            NadicStatus::NadicOk
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `ctx` must come from `nadic_ctx_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nadic_ctx_free(ctx: *mut NadicCtx) {
    if !ctx.is_null() {
        drop(unsafe { Box::from_raw(ctx) });
    }
}

#[no_mangle]
pub extern "C" fn nadic_ctx_base(ctx: *const NadicCtx, out: *mut u64) -> NadicStatus {
    let ctx = nonnull!(ctx);
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    unsafe { *out = ctx.0.base() };
    NadicStatus::NadicOk
}

#[no_mangle]
pub extern "C" fn nadic_ctx_precision(ctx: *const NadicCtx, out: *mut u32) -> NadicStatus {
    let ctx = nonnull!(ctx);
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    unsafe { *out = ctx.0.precision() };
    NadicStatus::NadicOk
}

/// Parse a (possibly signed) decimal integer into its canonical residue.
#[no_mangle]
pub extern "C" fn nadic_elem_from_decimal(
    ctx: *const NadicCtx,
    decimal: *const c_char,
    out: *mut *mut NadicElem,
) -> NadicStatus {
    let ctx = nonnull!(ctx);
    if decimal.is_null() || out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    let s = match unsafe { CStr::from_ptr(decimal) }.to_str() {
        Ok(s) => s,
        Err(_) => return NadicStatus::NadicParseError,
    };
    let z: num_bigint::BigInt = match s.trim().parse() {
        Ok(z) => z,
        Err(_) => return NadicStatus::NadicParseError,
    };
    let elem = NadicInt::from_integer(&ctx.0, &z);
    unsafe { *out = Box::into_raw(Box::new(NadicElem(elem))) };
    NadicStatus::NadicOk
}

/// # Safety
/// `elem` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nadic_elem_free(elem: *mut NadicElem) {
    if !elem.is_null() {
        drop(unsafe { Box::from_raw(elem) });
    }
}

/// Canonical residue as a decimal string; free with `nadic_string_free`.
#[no_mangle]
pub extern "C" fn nadic_elem_to_decimal(
    elem: *const NadicElem,
    out: *mut *mut c_char,
) -> NadicStatus {
    let elem = nonnull!(elem);
    emit_string(elem.0.residue().to_string(), out)
}

/// Base-n digit expansion, most-significant digit first, exactly k digits.
#[no_mangle]
pub extern "C" fn nadic_elem_digits(elem: *const NadicElem, out: *mut *mut c_char) -> NadicStatus {
    let elem = nonnull!(elem);
    emit_string(elem.0.digits().to_string(), out)
}

fn binop(
    a: *const NadicElem,
    b: *const NadicElem,
    out: *mut *mut NadicElem,
    f: impl Fn(&NadicInt, &NadicInt) -> Result<NadicInt, Error>,
) -> NadicStatus {
    let a = nonnull!(a);
    let b = nonnull!(b);
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    match f(&a.0, &b.0) {
        Ok(r) => {
            unsafe { *out = Box::into_raw(Box::new(NadicElem(r))) };
            NadicStatus::NadicOk
        }
        Err(e) => status_of(&e),
    }
}

#[no_mangle]
pub extern "C" fn nadic_elem_add(
    a: *const NadicElem,
    b: *const NadicElem,
    out: *mut *mut NadicElem,
) -> NadicStatus {
    binop(a, b, out, |x, y| x.add(y))
}

#[no_mangle]
pub extern "C" fn nadic_elem_sub(
    a: *const NadicElem,
    b: *const NadicElem,
    out: *mut *mut NadicElem,
) -> NadicStatus {
    binop(a, b, out, |x, y| x.sub(y))
}

#[no_mangle]
pub extern "C" fn nadic_elem_mul(
    a: *const NadicElem,
    b: *const NadicElem,
    out: *mut *mut NadicElem,
) -> NadicStatus {
    binop(a, b, out, |x, y| x.mul(y))
}

/// Multiplicative inverse; fails with `not-invertible` on non-units.
#[no_mangle]
pub extern "C" fn nadic_elem_invert(
    elem: *const NadicElem,
    out: *mut *mut NadicElem,
) -> NadicStatus {
    let elem = nonnull!(elem);
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    match elem.0.invert() {
        Ok(r) => {
            unsafe { *out = Box::into_raw(Box::new(NadicElem(r))) };
            NadicStatus::NadicOk
        }
        Err(e) => status_of(&e),
    }
}

/// Hensel-lifted square root on the default branch (smallest root mod each
/// prime); `iterations` receives the Newton step count and may be null.
#[no_mangle]
pub extern "C" fn nadic_elem_sqrt(
    elem: *const NadicElem,
    out: *mut *mut NadicElem,
    iterations: *mut u32,
) -> NadicStatus {
    let elem = nonnull!(elem);
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    match analytic::nadic_sqrt(&elem.0, None) {
        Ok(r) => {
            if !iterations.is_null() {
                unsafe { *iterations = r.iterations };
            }
            unsafe { *out = Box::into_raw(Box::new(NadicElem(r.root))) };
            NadicStatus::NadicOk
        }
        Err(e) => status_of(&e),
    }
}

/// Last `digits` decimal digits of Graham's number, most-significant first.
#[no_mangle]
pub extern "C" fn nadic_graham_last_digits(digits: u32, out: *mut *mut c_char) -> NadicStatus {
    match nadic::tower::graham_last_digits(digits) {
        Ok(d) => emit_string(d.to_string(), out),
        Err(e) => status_of(&e),
    }
}

/// Seed the square-root generator; base must be odd-prime-only, k >= 8,
/// seed >= 1.
#[no_mangle]
pub extern "C" fn nadic_prng_new(
    ctx: *const NadicCtx,
    seed: u64,
    out: *mut *mut NadicPrng,
) -> NadicStatus {
    let ctx = nonnull!(ctx);
    if out.is_null() {
        return NadicStatus::NadicNullPointer;
    }
    match seed_state(&ctx.0, seed) {
        Ok(s) => {
            unsafe { *out = Box::into_raw(Box::new(NadicPrng(s))) };
            NadicStatus::NadicOk
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `prng` must come from `nadic_prng_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nadic_prng_free(prng: *mut NadicPrng) {
    if !prng.is_null() {
        drop(unsafe { Box::from_raw(prng) });
    }
}

/// Next six-digit block as text, most-significant digit first.
#[no_mangle]
pub extern "C" fn nadic_prng_next_block(
    prng: *mut NadicPrng,
    out: *mut *mut c_char,
) -> NadicStatus {
    let prng = match unsafe { prng.as_mut() } {
        Some(r) => r,
        None => return NadicStatus::NadicNullPointer,
    };
    emit_string(prng.0.next_block().to_string(), out)
}
