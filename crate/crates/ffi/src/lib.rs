//! C ABI over the certificate model, length math, and chain verification.
//!
//! Conventions: every function returns an [`ScmsStatus`] unless the result
//! is a plain value; decoded certificates are opaque handles freed with
//! [`scms_cert_free`]; byte output goes through caller-provided buffers with
//! a written-length out-parameter. No function panics across the boundary.

use std::os::raw::c_char;
use std::ptr;
use std::slice;

use scms_core::cert::{
    cert_length, decode_certificate, encode_certificate, verify_certificate, Certificate,
    LengthProfile,
};
use scms_core::crypto::hashed_id8;
use scms_core::pki::{verify_chain, CertificateChainFile};
use scms_core::report::{render_lengths, table1_rows, ReportFormat};
use scms_core::spdu::{check_wsm_limit, spdu_length};
use scms_core::Provider;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScmsStatus {
    /// Success.
    ScmsOk = 0,
    /// A required pointer argument was null.
    ScmsErrNullArg = 1,
    /// Input bytes failed to decode.
    ScmsErrDecode = 2,
    /// Cryptographic verification failed.
    ScmsErrVerify = 3,
    /// The caller buffer is too small; the required size is in `written`.
    ScmsErrBufferTooSmall = 4,
    /// An argument value is out of range.
    ScmsErrInvalidArg = 5,
}

/// Opaque decoded certificate.
pub struct ScmsCertificate {
    inner: Certificate,
}

fn provider() -> &'static Provider {
    use std::sync::OnceLock;
    static PROVIDER: OnceLock<Provider> = OnceLock::new();
    PROVIDER.get_or_init(Provider::standard)
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn scms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn input<'a>(bytes: *const u8, len: usize) -> Option<&'a [u8]> {
    if bytes.is_null() && len != 0 {
        None
    } else if len == 0 {
        Some(&[])
    } else {
        Some(slice::from_raw_parts(bytes, len))
    }
}

unsafe fn write_out(
    data: &[u8],
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> ScmsStatus {
    if written.is_null() {
        return ScmsStatus::ScmsErrNullArg;
    }
    *written = data.len();
    if data.len() > cap {
        return ScmsStatus::ScmsErrBufferTooSmall;
    }
    if buf.is_null() {
        return ScmsStatus::ScmsErrNullArg;
    }
    ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    ScmsStatus::ScmsOk
}

/// Decodes a canonical certificate into an opaque handle.
///
/// # Safety
/// `bytes` must point to `len` readable bytes and `out` must be a valid
/// pointer; the handle must be released with [`scms_cert_free`].
#[no_mangle]
pub unsafe extern "C" fn scms_cert_decode(
    bytes: *const u8,
    len: usize,
    out: *mut *mut ScmsCertificate,
) -> ScmsStatus {
    if out.is_null() {
        return ScmsStatus::ScmsErrNullArg;
    }
    let Some(input) = input(bytes, len) else {
        return ScmsStatus::ScmsErrNullArg;
    };
    match decode_certificate(input) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(ScmsCertificate { inner }));
            ScmsStatus::ScmsOk
        }
        Err(_) => ScmsStatus::ScmsErrDecode,
    }
}

/// Releases a certificate handle. Null is ignored.
///
/// # Safety
/// `cert` must have come from [`scms_cert_decode`] and not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn scms_cert_free(cert: *mut ScmsCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Re-encodes a certificate handle into `buf`.
///
/// # Safety
/// Pointer arguments must be valid; `buf` must hold `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn scms_cert_encode(
    cert: *const ScmsCertificate,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> ScmsStatus {
    let Some(cert) = cert.as_ref() else {
        return ScmsStatus::ScmsErrNullArg;
    };
    write_out(&encode_certificate(&cert.inner), buf, cap, written)
}

/// Certificate kind code: 1 pure-ECC, 2 pure-PQC, 3 hybrid.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn scms_cert_kind(
    cert: *const ScmsCertificate,
    out: *mut u8,
) -> ScmsStatus {
    let (Some(cert), Some(out)) = (cert.as_ref(), out.as_mut()) else {
        return ScmsStatus::ScmsErrNullArg;
    };
    *out = cert.inner.tbs.kind.code();
    ScmsStatus::ScmsOk
}

/// Total encoded length of a certificate handle.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn scms_cert_encoded_len(
    cert: *const ScmsCertificate,
    out: *mut usize,
) -> ScmsStatus {
    let (Some(cert), Some(out)) = (cert.as_ref(), out.as_mut()) else {
        return ScmsStatus::ScmsErrNullArg;
    };
    *out = cert.inner.encoded_len();
    ScmsStatus::ScmsOk
}

/// Low-order 8 bytes of SHA-256 over arbitrary bytes (the certificate
/// digest when applied to a canonical certificate encoding).
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out8` to 8 writable bytes.
#[no_mangle]
pub unsafe extern "C" fn scms_hashed_id8(
    bytes: *const u8,
    len: usize,
    out8: *mut u8,
) -> ScmsStatus {
    let Some(input) = input(bytes, len) else {
        return ScmsStatus::ScmsErrNullArg;
    };
    if out8.is_null() {
        return ScmsStatus::ScmsErrNullArg;
    }
    let digest = hashed_id8(input);
    ptr::copy_nonoverlapping(digest.as_ptr(), out8, 8);
    ScmsStatus::ScmsOk
}

/// Verifies `cert` against `issuer` (signature, issuer reference, validity
/// nesting).
///
/// # Safety
/// Both handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn scms_cert_verify(
    cert: *const ScmsCertificate,
    issuer: *const ScmsCertificate,
) -> ScmsStatus {
    let (Some(cert), Some(issuer)) = (cert.as_ref(), issuer.as_ref()) else {
        return ScmsStatus::ScmsErrNullArg;
    };
    if verify_certificate(provider(), &cert.inner, &issuer.inner) {
        ScmsStatus::ScmsOk
    } else {
        ScmsStatus::ScmsErrVerify
    }
}

/// Analytic certificate length C = c + k + s1.
#[no_mangle]
pub extern "C" fn scms_cert_length(c: u32, k: u32, s1: u32) -> u64 {
    cert_length(&LengthProfile {
        c,
        u: 0,
        k,
        s1,
        s2: 0,
    })
}

/// Analytic SPDU length U = u + (c + k + s1) + s2.
#[no_mangle]
pub extern "C" fn scms_spdu_length(u: u32, c: u32, k: u32, s1: u32, s2: u32) -> u64 {
    spdu_length(&LengthProfile { c, u, k, s1, s2 })
}

/// True iff `length` fits the 1400-byte WSM budget.
#[no_mangle]
pub extern "C" fn scms_check_wsm_limit(length: u64) -> bool {
    check_wsm_limit(length)
}

/// Writes the 7-row length table as CSV text (not NUL-terminated).
///
/// # Safety
/// `buf` must hold `cap` writable bytes; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scms_table_lengths_csv(
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> ScmsStatus {
    let csv = render_lengths(&table1_rows(), ReportFormat::Csv);
    write_out(csv.as_bytes(), buf, cap, written)
}

/// Decodes and fully verifies a certificate chain file.
///
/// # Safety
/// `bytes` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn scms_ccf_verify(bytes: *const u8, len: usize) -> ScmsStatus {
    let Some(input) = input(bytes, len) else {
        return ScmsStatus::ScmsErrNullArg;
    };
    let Ok(ccf) = CertificateChainFile::from_bytes(input) else {
        return ScmsStatus::ScmsErrDecode;
    };
    if verify_chain(provider(), &ccf) {
        ScmsStatus::ScmsOk
    } else {
        ScmsStatus::ScmsErrVerify
    }
}
