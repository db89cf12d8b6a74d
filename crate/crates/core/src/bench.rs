//! Timing harness for the signature and KEM backends.
//!
//! Absolute numbers are hardware-dependent and are reported, never compared
//! against published figures. Methodology: a warmup block is discarded, then
//! each operation is timed per iteration and summarized as median and mean.

use std::time::Instant;

use rand_core::CryptoRngCore;

use crate::crypto::{Provider, SchemeId, SchemeProfile};
use crate::error::Result;
use crate::report::{render_table, ReportFormat};

/// Benchmark message: a BSM-sized payload.
const BENCH_MESSAGE: [u8; 48] = [0xB5; 48];

/// KEM-DEM benchmark plaintext: the 32-byte randomizer scalar.
const BENCH_PLAINTEXT: [u8; 32] = [0x5A; 32];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub median_ms: f64,
    pub mean_ms: f64,
}

impl Stats {
    fn from_samples(mut samples: Vec<f64>) -> Stats {
        assert!(!samples.is_empty());
        samples.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
        let mid = samples.len() / 2;
        let median_ms = if samples.len().is_multiple_of(2) {
            (samples[mid - 1] + samples[mid]) / 2.0
        } else {
            samples[mid]
        };
        let mean_ms = samples.iter().sum::<f64>() / samples.len() as f64;
        Stats { median_ms, mean_ms }
    }

    pub fn positive(&self) -> bool {
        self.median_ms > 0.0 && self.mean_ms > 0.0
    }
}

/// Keygen/sign/verify timings for one signature scheme.
#[derive(Debug, Clone)]
pub struct SignTimingRow {
    pub scheme: SchemeId,
    pub security_level: u8,
    pub iterations: u32,
    pub keygen: Stats,
    pub sign: Stats,
    pub verify: Stats,
    /// Every timed signature verified.
    pub round_trips_ok: bool,
}

/// Keygen/encrypt/decrypt timings for the KEM.
#[derive(Debug, Clone)]
pub struct KemTimingRow {
    pub scheme: SchemeId,
    pub security_level: u8,
    pub iterations: u32,
    pub keygen: Stats,
    pub encrypt: Stats,
    pub decrypt: Stats,
    /// Every timed encrypt/decrypt round trip returned the plaintext.
    pub round_trips_ok: bool,
}

fn time_ms(f: impl FnOnce()) -> f64 {
    let start = Instant::now();
    f();
    start.elapsed().as_secs_f64() * 1_000.0
}

/// Times keygen, sign, and verify for all four signature schemes.
pub fn bench_signatures(
    provider: &Provider,
    iterations: u32,
    rng: &mut dyn CryptoRngCore,
) -> Result<Vec<SignTimingRow>> {
    let iterations = iterations.max(1);
    SchemeId::SIGNATURE_SCHEMES
        .iter()
        .map(|&scheme| bench_one_signature(provider, scheme, iterations, rng))
        .collect()
}

fn bench_one_signature(
    provider: &Provider,
    scheme: SchemeId,
    iterations: u32,
    rng: &mut dyn CryptoRngCore,
) -> Result<SignTimingRow> {
    let backend = provider.signature_backend(scheme)?;
    let warmup = (iterations / 10).max(1);
    for _ in 0..warmup {
        let kp = backend.generate(rng)?;
        let sig = backend.sign(&kp, &BENCH_MESSAGE, rng)?;
        let _ = backend.verify(&kp.public_key, &BENCH_MESSAGE, &sig);
    }

    let mut keygen = Vec::with_capacity(iterations as usize);
    let mut sign = Vec::with_capacity(iterations as usize);
    let mut verify = Vec::with_capacity(iterations as usize);
    let mut round_trips_ok = true;
    for _ in 0..iterations {
        let mut kp = None;
        keygen.push(time_ms(|| kp = Some(backend.generate(rng))));
        let kp = kp.unwrap()?;
        let mut sig = None;
        sign.push(time_ms(|| sig = Some(backend.sign(&kp, &BENCH_MESSAGE, rng))));
        let sig = sig.unwrap()?;
        let mut ok = false;
        verify.push(time_ms(|| ok = backend.verify(&kp.public_key, &BENCH_MESSAGE, &sig)));
        round_trips_ok &= ok;
    }
    Ok(SignTimingRow {
        scheme,
        security_level: SchemeProfile::default_for(scheme).security_level,
        iterations,
        keygen: Stats::from_samples(keygen),
        sign: Stats::from_samples(sign),
        verify: Stats::from_samples(verify),
        round_trips_ok,
    })
}

/// Times keygen, KEM-DEM encrypt, and decrypt for the KEM scheme with a
/// 32-byte plaintext.
pub fn bench_kem(
    provider: &Provider,
    iterations: u32,
    rng: &mut dyn CryptoRngCore,
) -> Result<KemTimingRow> {
    let iterations = iterations.max(1);
    let scheme = SchemeId::Kyber512;
    let warmup = (iterations / 10).max(1);
    for _ in 0..warmup {
        let kp = provider.generate_kem_keypair(scheme, rng)?;
        let ct = provider.kem_encrypt(scheme, &kp.public_key, &BENCH_PLAINTEXT, rng)?;
        let _ = provider.kem_decrypt(&kp, &ct)?;
    }

    let mut keygen = Vec::with_capacity(iterations as usize);
    let mut encrypt = Vec::with_capacity(iterations as usize);
    let mut decrypt = Vec::with_capacity(iterations as usize);
    let mut round_trips_ok = true;
    for _ in 0..iterations {
        let backend = provider.kem_backend(scheme)?;
        let mut kp = None;
        keygen.push(time_ms(|| kp = Some(backend.generate(rng))));
        let kp = kp.unwrap()?;
        let mut ct = None;
        encrypt.push(time_ms(|| {
            ct = Some(provider.kem_encrypt(scheme, &kp.public_key, &BENCH_PLAINTEXT, rng))
        }));
        let ct = ct.unwrap()?;
        let mut pt = None;
        decrypt.push(time_ms(|| pt = Some(provider.kem_decrypt(&kp, &ct))));
        round_trips_ok &= matches!(pt.unwrap(), Ok(p) if p == BENCH_PLAINTEXT);
    }
    Ok(KemTimingRow {
        scheme,
        security_level: SchemeProfile::default_for(scheme).security_level,
        iterations,
        keygen: Stats::from_samples(keygen),
        encrypt: Stats::from_samples(encrypt),
        decrypt: Stats::from_samples(decrypt),
        round_trips_ok,
    })
}

fn fmt_ms(v: f64) -> String {
    format!("{v:.3}")
}

pub fn render_sign_report(rows: &[SignTimingRow], format: ReportFormat) -> String {
    let header = [
        "scheme",
        "security_level",
        "iterations",
        "keygen_median_ms",
        "keygen_mean_ms",
        "sign_median_ms",
        "sign_mean_ms",
        "verify_median_ms",
        "verify_mean_ms",
        "status",
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.scheme.display_name().to_string(),
                r.security_level.to_string(),
                r.iterations.to_string(),
                fmt_ms(r.keygen.median_ms),
                fmt_ms(r.keygen.mean_ms),
                fmt_ms(r.sign.median_ms),
                fmt_ms(r.sign.mean_ms),
                fmt_ms(r.verify.median_ms),
                fmt_ms(r.verify.mean_ms),
                if r.round_trips_ok { "OK" } else { "FAILED" }.to_string(),
            ]
        })
        .collect();
    render_table(&header, &cells, format)
}

pub fn render_kem_report(row: &KemTimingRow, format: ReportFormat) -> String {
    let header = [
        "scheme",
        "security_level",
        "iterations",
        "keygen_median_ms",
        "keygen_mean_ms",
        "encrypt_median_ms",
        "encrypt_mean_ms",
        "decrypt_median_ms",
        "decrypt_mean_ms",
        "status",
    ];
    let cells = vec![vec![
        row.scheme.display_name().to_string(),
        row.security_level.to_string(),
        row.iterations.to_string(),
        fmt_ms(row.keygen.median_ms),
        fmt_ms(row.keygen.mean_ms),
        fmt_ms(row.encrypt.median_ms),
        fmt_ms(row.encrypt.mean_ms),
        fmt_ms(row.decrypt.median_ms),
        fmt_ms(row.decrypt.mean_ms),
        if row.round_trips_ok { "OK" } else { "FAILED" }.to_string(),
    ]];
    render_table(&header, &cells, format)
}
