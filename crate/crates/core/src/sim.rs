//! Deterministic two-vehicle BSM exchange simulation.
//!
//! The exchange runs on a virtual clock advanced by the configured cadence,
//! so message counts, payload bytes, and verification verdicts depend only
//! on the seed and configuration. Wall-clock time is sampled only for the
//! latency report.

use std::time::Instant;

use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use crate::bench::Stats;
use crate::cert::{issue_certificate, CertKind, Certificate, TbsCertificate};
use crate::crypto::{EcScalar, Provider, SchemeId, SigKeyPair};
use crate::error::{Error, Result};
use crate::butterfly::{run_provisioning, RaOptions};
use crate::pki::{
    build_hierarchy, ee_eca_cert_request, CanonicalIdentity, CertStore, Entity, EntityRole,
    Hierarchy, HierarchyConfig,
};
use crate::spdu::{
    build_spdu, build_spdu_with_keypair, check_wsm_limit, decode_spdu, encode_spdu, verify_spdu,
    SignerMode, Verdict, DEFAULT_BSM_PAYLOAD_LEN, DEFAULT_MAX_AGE_MICROS,
};

/// Full scenario configuration; the seed fixes all randomness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub root_scheme: SchemeId,
    pub ica_scheme: SchemeId,
    pub eca_scheme: SchemeId,
    pub aca_scheme: SchemeId,
    pub enrollment_scheme: SchemeId,
    pub authorization_mode: CertKind,
    pub batch_size: u32,
    pub bsm_cadence_ms: u32,
    pub full_cert_cadence_ms: u32,
    pub duration_s: u32,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            root_scheme: SchemeId::Falcon512,
            ica_scheme: SchemeId::Falcon512,
            eca_scheme: SchemeId::Falcon512,
            aca_scheme: SchemeId::Falcon512,
            enrollment_scheme: SchemeId::Falcon512,
            authorization_mode: CertKind::Hybrid,
            batch_size: 20,
            bsm_cadence_ms: 100,
            full_cert_cadence_ms: 450,
            duration_s: 5,
            seed: 42,
        }
    }
}

impl ScenarioConfig {
    fn validate(&self) -> Result<()> {
        if self.bsm_cadence_ms == 0 || self.full_cert_cadence_ms == 0 {
            return Err(Error::Config("cadences must be positive".into()));
        }
        if self.duration_s == 0 {
            return Err(Error::Config("duration must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        let authorities = [
            self.root_scheme,
            self.ica_scheme,
            self.eca_scheme,
            self.aca_scheme,
        ];
        match self.authorization_mode {
            CertKind::PureEcc => {
                if authorities.iter().any(|s| *s != SchemeId::EcdsaP256) {
                    return Err(Error::Config(
                        "pure-ECC mode requires every authority to use ECDSA P-256".into(),
                    ));
                }
            }
            CertKind::PurePqc | CertKind::Hybrid => {
                if authorities.iter().any(|s| !s.is_post_quantum()) {
                    return Err(Error::Config(
                        "PQC and hybrid modes require post-quantum authority schemes".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn hierarchy_config(&self) -> HierarchyConfig {
        let mut config = HierarchyConfig::uniform(self.root_scheme);
        config.ica_scheme = self.ica_scheme;
        config.eca_scheme = self.eca_scheme;
        config.aca_scheme = self.aca_scheme;
        config.ra_scheme = self.ica_scheme;
        config.elector_scheme = self.root_scheme;
        config.hybrid_policy = self.authorization_mode != CertKind::PureEcc;
        config
    }
}

/// Parses the flat `key=value` configuration format. Lines starting with `#`
/// and blank lines are ignored; unknown keys are an error.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::default();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", line_no + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let int = |what: &str| -> Result<u32> {
            value
                .parse::<u32>()
                .map_err(|_| Error::Config(format!("{what} must be an unsigned integer")))
        };
        match key {
            "root_scheme" => config.root_scheme = value.parse()?,
            "ica_scheme" => config.ica_scheme = value.parse()?,
            "eca_scheme" => config.eca_scheme = value.parse()?,
            "aca_scheme" => config.aca_scheme = value.parse()?,
            "enrollment_scheme" => config.enrollment_scheme = value.parse()?,
            "authorization_mode" => {
                config.authorization_mode = match value.to_ascii_lowercase().as_str() {
                    "pure_ecc" | "pure-ecc" => CertKind::PureEcc,
                    "pure_pqc" | "pure-pqc" => CertKind::PurePqc,
                    "hybrid" => CertKind::Hybrid,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown authorization mode `{other}`"
                        )))
                    }
                }
            }
            "batch_size" => config.batch_size = int("batch_size")?,
            "bsm_cadence_ms" => config.bsm_cadence_ms = int("bsm_cadence_ms")?,
            "full_cert_cadence_ms" => config.full_cert_cadence_ms = int("full_cert_cadence_ms")?,
            "duration_s" => config.duration_s = int("duration_s")?,
            "seed" => {
                config.seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::Config("seed must be an unsigned integer".into()))?
            }
            other => return Err(Error::Config(format!("unknown configuration key `{other}`"))),
        }
    }
    config.validate()?;
    Ok(config)
}

/// Credential an end entity signs SPDUs with.
enum SimCredential {
    Butterfly(EcScalar, Certificate),
    Pqc(SigKeyPair, Certificate),
}

/// Outcome of a simulation run.
#[derive(Debug, Clone)]
pub struct SimulationSummary {
    pub messages_sent: u64,
    pub messages_verified: u64,
    pub verify_failures: u64,
    pub full_cert_messages: u64,
    pub max_full_cert_spdu_len: u64,
    /// Every full-certificate SPDU fit the 1400-byte WSM budget.
    pub all_full_cert_within_wsm: bool,
    pub sign_latency: Stats,
    pub verify_latency: Stats,
    /// Fraction of verifications completing within the BSM cadence budget.
    pub within_cadence_fraction: f64,
    /// Digest over the concatenated payload stream; seed-stable.
    pub payload_stream_digest: [u8; 8],
    pub provisioned_certificates: u32,
}

/// Builds the hierarchy, provisions authorization certificates for two end
/// entities, and runs the timed BSM exchange.
pub fn run_simulation(provider: &Provider, config: &ScenarioConfig) -> Result<SimulationSummary> {
    config.validate()?;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(config.seed);
    let mut hierarchy = build_hierarchy(provider, &config.hierarchy_config(), &mut rng)?;

    let mut ee0 = enroll_end_entity(provider, &mut hierarchy, config, 0, &mut rng)?;
    let mut ee1 = enroll_end_entity(provider, &mut hierarchy, config, 1, &mut rng)?;
    let creds0 = provision(provider, &mut hierarchy, &mut ee0, config, &mut rng)?;
    let creds1 = provision(provider, &mut hierarchy, &mut ee1, config, &mut rng)?;
    let provisioned = (creds0.len() + creds1.len()) as u32;

    // Receivers trust the chain; sender certificates are learned from
    // full-certificate SPDUs during the exchange.
    let mut store0 = CertStore::new();
    let mut store1 = CertStore::new();
    for cert in &hierarchy.ccf.certs {
        store0.insert(cert.clone());
        store1.insert(cert.clone());
    }

    let mut payload_hash = Sha256::new();
    let mut sign_samples = Vec::new();
    let mut verify_samples = Vec::new();
    let mut summary = SimulationSummary {
        messages_sent: 0,
        messages_verified: 0,
        verify_failures: 0,
        full_cert_messages: 0,
        max_full_cert_spdu_len: 0,
        all_full_cert_within_wsm: true,
        sign_latency: Stats {
            median_ms: 0.0,
            mean_ms: 0.0,
        },
        verify_latency: Stats {
            median_ms: 0.0,
            mean_ms: 0.0,
        },
        within_cadence_fraction: 0.0,
        payload_stream_digest: [0; 8],
        provisioned_certificates: provisioned,
    };

    let cadence_us = u64::from(config.bsm_cadence_ms) * 1_000;
    let full_every_us = u64::from(config.full_cert_cadence_ms) * 1_000;
    let duration_us = u64::from(config.duration_s) * 1_000_000;
    let cadence_budget_ms = f64::from(config.bsm_cadence_ms);
    let mut within_budget = 0u64;

    // The full-certificate schedule is not phase-locked to the BSM tick:
    // the next tick at or after the due time carries the full certificate.
    let mut next_full_at = 0u64;
    let mut now = 0u64;
    while now < duration_us {
        let mode = if now >= next_full_at {
            while next_full_at <= now {
                next_full_at += full_every_us;
            }
            SignerMode::FullCert
        } else {
            SignerMode::Digest
        };
        for direction in 0..2 {
            let (cred, peer_store) = if direction == 0 {
                (&creds0[0], &mut store1)
            } else {
                (&creds1[0], &mut store0)
            };
            let mut payload = vec![0u8; DEFAULT_BSM_PAYLOAD_LEN];
            rng.fill_bytes(&mut payload);
            payload_hash.update(&payload);

            let sign_start = Instant::now();
            let spdu = match cred {
                SimCredential::Butterfly(private, cert) => {
                    build_spdu(&payload, cert, private, mode, now)?
                }
                SimCredential::Pqc(kp, cert) => {
                    build_spdu_with_keypair(provider, &payload, cert, kp, mode, now, &mut rng)?
                }
            };
            sign_samples.push(sign_start.elapsed().as_secs_f64() * 1_000.0);

            let wire = encode_spdu(&spdu)?;
            if mode == SignerMode::FullCert {
                summary.full_cert_messages += 1;
                let len = wire.len() as u64;
                summary.max_full_cert_spdu_len = summary.max_full_cert_spdu_len.max(len);
                summary.all_full_cert_within_wsm &= check_wsm_limit(len);
            }
            summary.messages_sent += 1;

            let verify_start = Instant::now();
            let received = decode_spdu(&wire)?;
            let verdict = verify_spdu(
                provider,
                &received,
                peer_store,
                &hierarchy.ccf,
                now,
                DEFAULT_MAX_AGE_MICROS,
            );
            let verify_ms = verify_start.elapsed().as_secs_f64() * 1_000.0;
            verify_samples.push(verify_ms);
            if verify_ms <= cadence_budget_ms {
                within_budget += 1;
            }

            match verdict {
                Verdict::Accept => {
                    summary.messages_verified += 1;
                    if let crate::spdu::SignerIdentifier::FullCert(cert) = &received.signer {
                        peer_store.insert(cert.clone());
                    }
                }
                Verdict::Reject(_) => summary.verify_failures += 1,
            }
        }
        now += cadence_us;
    }

    summary.sign_latency = Stats::from_sample_vec(sign_samples);
    summary.verify_latency = Stats::from_sample_vec(verify_samples);
    summary.within_cadence_fraction = if summary.messages_sent == 0 {
        1.0
    } else {
        within_budget as f64 / summary.messages_sent as f64
    };
    let digest = payload_hash.finalize();
    summary
        .payload_stream_digest
        .copy_from_slice(&digest[24..32]);
    Ok(summary)
}

fn enroll_end_entity(
    provider: &Provider,
    hierarchy: &mut Hierarchy,
    config: &ScenarioConfig,
    index: u32,
    rng: &mut rand_chacha::ChaCha20Rng,
) -> Result<Entity> {
    let canonical = CanonicalIdentity {
        canonical_id: format!("obu-sim-{index:04}").into_bytes(),
        keypair: provider.generate_signing_keypair(
            if config.authorization_mode == CertKind::PureEcc {
                SchemeId::EcdsaP256
            } else {
                config.enrollment_scheme
            },
            rng,
        )?,
    };
    hierarchy.eca.register_device(
        canonical.canonical_id.clone(),
        canonical.keypair.scheme,
        canonical.keypair.public_key.clone(),
    );

    let eca_tbs = &hierarchy.eca.entity.certificate.tbs;
    let (start, duration, psid) = (eca_tbs.validity_start, 2 * 365 * 86_400, eca_tbs.psid);

    if config.authorization_mode == CertKind::PureEcc {
        // Baseline IEEE mode: the enrollment certificate is pure-ECC and is
        // issued directly (the authenticated request flow requires PQC
        // enrollment keys).
        let kp = provider.generate_signing_keypair(SchemeId::EcdsaP256, rng)?;
        let issuer_id = hierarchy.eca.entity.certificate.digest();
        let tbs = TbsCertificate::new(
            issuer_id,
            start,
            duration,
            psid,
            kp.scheme,
            hierarchy.eca.entity.keypair.scheme,
            kp.public_key.clone(),
        )?;
        let cert = issue_certificate(
            provider,
            &hierarchy.eca.entity.keypair,
            issuer_id,
            tbs,
            rng,
        )?;
        return Ok(Entity::new(EntityRole::Ee, kp, cert));
    }

    let enrollment_kp = provider.generate_signing_keypair(config.enrollment_scheme, rng)?;
    let request = ee_eca_cert_request(
        provider,
        &canonical,
        &enrollment_kp,
        psid,
        start,
        duration,
        rng,
    )?;
    let response = hierarchy.eca.process_request(provider, &request, rng);
    let cert = response
        .status
        .map_err(|reason| Error::Denied(format!("enrollment denied: {reason:?}")))?;
    let mut ee = Entity::new(EntityRole::Ee, enrollment_kp, cert);
    for chain_cert in &hierarchy.ccf.certs {
        ee.store.insert(chain_cert.clone());
    }
    Ok(ee)
}

fn provision(
    provider: &Provider,
    hierarchy: &mut Hierarchy,
    ee: &mut Entity,
    config: &ScenarioConfig,
    rng: &mut rand_chacha::ChaCha20Rng,
) -> Result<Vec<SimCredential>> {
    match config.authorization_mode {
        CertKind::Hybrid | CertKind::PureEcc => {
            let run = run_provisioning(
                provider,
                ee,
                &mut hierarchy.ra,
                &mut hierarchy.aca,
                config.batch_size,
                &RaOptions::default(),
                rng,
            )?;
            Ok(run
                .credentials
                .into_iter()
                .map(|(private, cert)| SimCredential::Butterfly(private, cert))
                .collect())
        }
        CertKind::PurePqc => {
            // No butterfly expansion for PQC subject keys (and no anonymity):
            // the authorization CA issues directly over fresh PQC keys.
            let mut out = Vec::with_capacity(config.batch_size as usize);
            let issuer_id = hierarchy.aca.certificate.digest();
            let aca_tbs_start = hierarchy.aca.certificate.tbs.validity_start;
            for _ in 0..config.batch_size {
                let kp = provider.generate_signing_keypair(config.aca_scheme, rng)?;
                let tbs = TbsCertificate::new(
                    issuer_id,
                    aca_tbs_start,
                    7 * 86_400,
                    ee.certificate.tbs.psid,
                    kp.scheme,
                    hierarchy.aca.keypair.scheme,
                    kp.public_key.clone(),
                )?;
                let cert = issue_certificate(
                    provider,
                    &hierarchy.aca.keypair,
                    issuer_id,
                    tbs,
                    rng,
                )?;
                out.push(SimCredential::Pqc(kp, cert));
            }
            Ok(out)
        }
    }
}

impl Stats {
    fn from_sample_vec(samples: Vec<f64>) -> Stats {
        if samples.is_empty() {
            return Stats {
                median_ms: 0.0,
                mean_ms: 0.0,
            };
        }
        let mut sorted = samples;
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
        let mid = sorted.len() / 2;
        let median_ms = if sorted.len().is_multiple_of(2) {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        } else {
            sorted[mid]
        };
        Stats {
            median_ms,
            mean_ms: sorted.iter().sum::<f64>() / sorted.len() as f64,
        }
    }
}

impl SimulationSummary {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("messages_sent: {}\n", self.messages_sent));
        out.push_str(&format!("messages_verified: {}\n", self.messages_verified));
        out.push_str(&format!("verify_failures: {}\n", self.verify_failures));
        out.push_str(&format!(
            "provisioned_certificates: {}\n",
            self.provisioned_certificates
        ));
        out.push_str(&format!("full_cert_messages: {}\n", self.full_cert_messages));
        out.push_str(&format!(
            "max_full_cert_spdu_len: {}\n",
            self.max_full_cert_spdu_len
        ));
        out.push_str(&format!(
            "all_full_cert_within_wsm: {}\n",
            self.all_full_cert_within_wsm
        ));
        out.push_str(&format!(
            "sign_latency_ms: median={:.3} mean={:.3}\n",
            self.sign_latency.median_ms, self.sign_latency.mean_ms
        ));
        out.push_str(&format!(
            "verify_latency_ms: median={:.3} mean={:.3}\n",
            self.verify_latency.median_ms, self.verify_latency.mean_ms
        ));
        out.push_str(&format!(
            "within_cadence_fraction: {:.4}\n",
            self.within_cadence_fraction
        ));
        out.push_str(&format!(
            "payload_stream_digest: {}\n",
            hex::encode(self.payload_stream_digest)
        ));
        out
    }
}
