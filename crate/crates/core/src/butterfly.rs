//! Anonymous authorization-certificate provisioning via butterfly key
//! expansion.
//!
//! The end entity generates a caterpillar keypair (a, A = aG), a symmetric
//! expansion key ck, and one KEM keypair per requested certificate. The
//! registration authority expands each index i into a cocoon public key
//! B_i = A + f1(ck, i)·G and forwards it — without A or ck — to the
//! authorization CA, which picks a fresh randomizer r, certifies the
//! butterfly public key B_i + R (R = rG), and returns r encrypted to the
//! end entity's KEM key. The end entity reconstructs the butterfly private
//! key (a + f1(ck, i) + r) mod n and checks it against the certified key.
//!
//! Every value an entity sends or receives is recorded in its transcript;
//! [`check_unlinkability`] turns the protocol's anonymity argument into
//! structural assertions over those records.

use rand_core::CryptoRngCore;

use crate::cert::{
    encode_certificate, decode_certificate, issue_certificate, verify_certificate, Certificate,
    TbsCertificate,
};
use crate::codec::{Reader, Writer};
use crate::crypto::{
    f1_expand, EcPoint, EcScalar, ExpansionKey, HybridCiphertext, KemKeyPair, Provider, SchemeId,
};
use crate::error::{Error, Result};
use crate::pki::Entity;
use crate::transcript::Transcript;

const EE_RA_REQUEST_TAG: u8 = 0x03;
const RA_EE_ACK_TAG: u8 = 0x06;
const DOWNLOAD_REQUEST_TAG: u8 = 0x07;

/// End-entity secrets for one provisioning batch.
pub struct ButterflyState {
    pub ck: ExpansionKey,
    caterpillar_secret: EcScalar,
    pub caterpillar_public: EcPoint,
    pub kem_pairs: Vec<KemKeyPair>,
    pub requested_count: u32,
}

impl ButterflyState {
    pub fn caterpillar_secret(&self) -> &EcScalar {
        &self.caterpillar_secret
    }
}

impl std::fmt::Debug for ButterflyState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ButterflyState")
            .field("requested_count", &self.requested_count)
            .finish_non_exhaustive()
    }
}

/// Certificate parameters proposed by the end entity; the issuing authority
/// clamps the window into its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TbsTemplate {
    pub psid: u32,
    pub validity_start: u32,
    pub validity_duration: u32,
}

impl TbsTemplate {
    pub fn to_bytes(&self) -> [u8; 12] {
        let mut out = [0u8; 12];
        out[0..4].copy_from_slice(&self.psid.to_be_bytes());
        out[4..8].copy_from_slice(&self.validity_start.to_be_bytes());
        out[8..12].copy_from_slice(&self.validity_duration.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8; 12]) -> TbsTemplate {
        TbsTemplate {
            psid: u32::from_be_bytes(bytes[0..4].try_into().unwrap()),
            validity_start: u32::from_be_bytes(bytes[4..8].try_into().unwrap()),
            validity_duration: u32::from_be_bytes(bytes[8..12].try_into().unwrap()),
        }
    }
}

/// Batch request from the end entity to the registration authority.
#[derive(Debug, Clone)]
pub struct EeRaCertRequest {
    pub ck: ExpansionKey,
    pub caterpillar_public: [u8; 33],
    pub kem_public_keys: Vec<Vec<u8>>,
    pub template: TbsTemplate,
    pub enrollment_certificate: Certificate,
    /// Enrollment-key signature over [`Self::body_bytes`].
    pub signature: Vec<u8>,
}

impl EeRaCertRequest {
    pub fn body_bytes(&self) -> Result<Vec<u8>> {
        let mut w = Writer::new();
        w.put_u8(EE_RA_REQUEST_TAG);
        w.put_bytes(self.ck.as_bytes());
        w.put_bytes(&self.caterpillar_public);
        w.put_u16(self.kem_public_keys.len() as u16);
        for pk in &self.kem_public_keys {
            w.put_var16("kem public key", pk)?;
        }
        w.put_bytes(&self.template.to_bytes());
        w.put_var16(
            "enrollment certificate",
            &encode_certificate(&self.enrollment_certificate),
        )?;
        Ok(w.into_bytes())
    }
}

/// Per-index cocoon forwarded from the registration authority to the
/// authorization CA. Deliberately excludes the caterpillar public key and
/// the expansion key: forwarding either would let the authorization CA link
/// all cocoons of one end entity.
#[derive(Debug, Clone)]
pub struct RaAcaRequest {
    pub index: u64,
    pub cocoon_public_key: [u8; 33],
    pub kem_public_key: Vec<u8>,
    pub template: TbsTemplate,
    /// Test hook for the unlinkability negative control; never set in
    /// honest operation.
    pub leaked_caterpillar_public: Option<[u8; 33]>,
}

/// Authorization CA response for one index.
#[derive(Debug, Clone)]
pub struct AcaResponse {
    pub certificate: Certificate,
    pub randomizer_ciphertext: HybridCiphertext,
    /// ACA signature over certificate bytes followed by ciphertext bytes.
    pub aca_signature: Vec<u8>,
}

impl AcaResponse {
    pub fn signed_bytes(&self) -> Vec<u8> {
        let mut bytes = encode_certificate(&self.certificate);
        bytes.extend_from_slice(&self.randomizer_ciphertext.to_bytes());
        bytes
    }
}

/// Registration authority acknowledgment of a batch request.
#[derive(Debug, Clone)]
pub struct RaEeCertAck {
    pub status: u8,
    pub archive_digest: [u8; 8],
    pub signature: Vec<u8>,
}

pub const ACK_STATUS_OK: u8 = 0;

impl RaEeCertAck {
    pub fn body_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(RA_EE_ACK_TAG);
        w.put_u8(self.status);
        w.put_bytes(&self.archive_digest);
        w.into_bytes()
    }
}

/// End-entity request to download the finished batch.
#[derive(Debug, Clone)]
pub struct EeRaDownloadRequest {
    pub archive_digest: [u8; 8],
    pub signature: Vec<u8>,
}

impl EeRaDownloadRequest {
    pub fn body_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(DOWNLOAD_REQUEST_TAG);
        w.put_bytes(&self.archive_digest);
        w.into_bytes()
    }
}

/// One entry of the download archive.
#[derive(Debug, Clone)]
pub struct ArchiveRecord {
    pub certificate: Certificate,
    pub randomizer_ciphertext: HybridCiphertext,
    pub aca_signature: Vec<u8>,
}

/// Deterministic flat download container: count header, then per-index
/// records of length-prefixed certificate, randomizer ciphertext, and ACA
/// signature.
#[derive(Debug, Clone, Default)]
pub struct DownloadArchive {
    pub records: Vec<ArchiveRecord>,
}

impl DownloadArchive {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = Writer::new();
        w.put_u16(self.records.len() as u16);
        for rec in &self.records {
            w.put_var16("archive certificate", &encode_certificate(&rec.certificate))?;
            w.put_var16(
                "archive randomizer ciphertext",
                &rec.randomizer_ciphertext.to_bytes(),
            )?;
            w.put_var16("archive aca signature", &rec.aca_signature)?;
        }
        Ok(w.into_bytes())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<DownloadArchive> {
        let mut r = Reader::new(bytes);
        let count = r.u16("archive record count")? as usize;
        let mut records = Vec::with_capacity(count);
        for _ in 0..count {
            let certificate = decode_certificate(r.var16("archive certificate")?)?;
            let randomizer_ciphertext =
                HybridCiphertext::from_bytes(r.var16("archive randomizer ciphertext")?)?;
            let aca_signature = r.var16("archive aca signature")?.to_vec();
            records.push(ArchiveRecord {
                certificate,
                randomizer_ciphertext,
                aca_signature,
            });
        }
        r.finish("download archive")?;
        Ok(DownloadArchive { records })
    }
}

/// Registration authority knobs; the leak flag is a negative-control test
/// hook and defaults off.
#[derive(Debug, Clone, Copy, Default)]
pub struct RaOptions {
    pub leak_caterpillar_to_aca: bool,
}

/// Everything the end entity legitimately learns during a run; the
/// unlinkability checker compares transcripts against these.
#[derive(Debug, Clone, Default)]
pub struct SensitiveValues {
    pub caterpillar_public: Vec<u8>,
    pub ck: Vec<u8>,
    pub randomizer_scalars: Vec<[u8; 32]>,
    pub randomizer_points: Vec<[u8; 33]>,
    pub butterfly_privates: Vec<[u8; 32]>,
    pub butterfly_publics: Vec<[u8; 33]>,
}

/// Finalized credentials plus the values needed for anonymity checking.
#[derive(Debug)]
pub struct ProvisioningRun {
    pub credentials: Vec<(EcScalar, Certificate)>,
    pub sensitive: SensitiveValues,
}

/// Step (1): fresh expansion key, caterpillar keypair, and one KEM pair per
/// requested certificate.
pub fn ee_init_butterfly(
    provider: &Provider,
    count: u32,
    rng: &mut dyn CryptoRngCore,
) -> Result<ButterflyState> {
    if count == 0 {
        return Err(Error::InvalidCount);
    }
    let ck = ExpansionKey::random(rng);
    let caterpillar_secret = EcScalar::random(rng);
    let caterpillar_public = EcPoint::base_mul(&caterpillar_secret);
    let mut kem_pairs = Vec::with_capacity(count as usize);
    for _ in 0..count {
        kem_pairs.push(provider.generate_kem_keypair(SchemeId::Kyber512, rng)?);
    }
    Ok(ButterflyState {
        ck,
        caterpillar_secret,
        caterpillar_public,
        kem_pairs,
        requested_count: count,
    })
}

/// Step (3): cocoon public key B_i = A + f1(ck, i)·G.
pub fn ra_expand_cocoon(ck: &ExpansionKey, caterpillar_public: &EcPoint, index: u64) -> EcPoint {
    caterpillar_public.add(&EcPoint::base_mul(&f1_expand(ck, index)))
}

/// Step (8): cocoon private key b_i = (a + f1(ck, i)) mod n.
pub fn ee_cocoon_private(a: &EcScalar, ck: &ExpansionKey, index: u64) -> EcScalar {
    a.add_mod_n(f1_expand(ck, index))
}

/// Builds the signed batch request of step (2).
pub fn ee_build_ra_request(
    provider: &Provider,
    state: &ButterflyState,
    ee: &Entity,
    template: TbsTemplate,
    rng: &mut dyn CryptoRngCore,
) -> Result<EeRaCertRequest> {
    let mut req = EeRaCertRequest {
        ck: state.ck,
        caterpillar_public: state.caterpillar_public.encode()?,
        kem_public_keys: state
            .kem_pairs
            .iter()
            .map(|kp| kp.public_key.clone())
            .collect(),
        template,
        enrollment_certificate: ee.certificate.clone(),
        signature: Vec::new(),
    };
    req.signature = provider.sign(&ee.keypair, &req.body_bytes()?, rng)?;
    Ok(req)
}

/// Steps (5)-(6): the authorization CA randomizes the cocoon into a
/// butterfly key, certifies it, and encrypts the randomizer to the end
/// entity's KEM key.
pub fn aca_issue(
    aca: &mut Entity,
    provider: &Provider,
    req: &RaAcaRequest,
    rng: &mut dyn CryptoRngCore,
) -> Result<AcaResponse> {
    record_ra_aca_request(&mut aca.transcript, req, false);

    let cocoon = EcPoint::decode(&req.cocoon_public_key)?;
    let own = &aca.certificate.tbs;

    // Fresh randomizer; retried in the negligible case that the butterfly
    // point degenerates to the identity.
    let (randomizer, butterfly_public) = loop {
        let r = EcScalar::random(rng);
        let point = cocoon.add(&EcPoint::base_mul(&r));
        if !point.is_identity() {
            break (r, point);
        }
    };

    let start = req.template.validity_start.max(own.validity_start);
    let end = (u64::from(req.template.validity_start)
        + u64::from(req.template.validity_duration))
    .min(own.validity_end());
    if end <= u64::from(start) {
        return Err(Error::Denied("requested validity window is empty".into()));
    }

    let issuer_id = aca.certificate.digest();
    let tbs = TbsCertificate::new(
        issuer_id,
        start,
        (end - u64::from(start)) as u32,
        req.template.psid,
        SchemeId::EcdsaP256,
        aca.keypair.scheme,
        butterfly_public.encode()?.to_vec(),
    )?;
    let certificate = issue_certificate(provider, &aca.keypair, issuer_id, tbs, rng)?;

    let randomizer_ciphertext = provider.kem_encrypt(
        SchemeId::Kyber512,
        &req.kem_public_key,
        &randomizer.to_bytes(),
        rng,
    )?;

    let mut response = AcaResponse {
        certificate,
        randomizer_ciphertext,
        aca_signature: Vec::new(),
    };
    response.aca_signature = provider.sign(&aca.keypair, &response.signed_bytes(), rng)?;

    record_aca_response(&mut aca.transcript, &response, true);
    Ok(response)
}

/// Step (9): verify, decrypt the randomizer, derive the butterfly private
/// key, and check it against the certified key.
pub fn ee_finalize(
    provider: &Provider,
    state: &ButterflyState,
    index: u64,
    response: &AcaResponse,
    aca_cert: &Certificate,
) -> Result<(EcScalar, Certificate)> {
    let (private, certificate, _) = finalize_internal(provider, state, index, response, aca_cert)?;
    Ok((private, certificate))
}

fn finalize_internal(
    provider: &Provider,
    state: &ButterflyState,
    index: u64,
    response: &AcaResponse,
    aca_cert: &Certificate,
) -> Result<(EcScalar, Certificate, EcScalar)> {
    if !provider.verify(
        aca_cert.tbs.vki_scheme,
        &aca_cert.tbs.vki_key,
        &response.signed_bytes(),
        &response.aca_signature,
    ) {
        return Err(Error::SignatureInvalid);
    }
    if !verify_certificate(provider, &response.certificate, aca_cert) {
        return Err(Error::SignatureInvalid);
    }

    let kem_pair = state
        .kem_pairs
        .get(index as usize)
        .ok_or(Error::InvalidCount)?;
    let plaintext = provider.kem_decrypt(kem_pair, &response.randomizer_ciphertext)?;
    let scalar_bytes: [u8; 32] = plaintext
        .as_slice()
        .try_into()
        .map_err(|_| Error::DecryptionFailure)?;
    let randomizer = EcScalar::from_bytes(&scalar_bytes).map_err(|_| Error::DecryptionFailure)?;

    let cocoon_private = ee_cocoon_private(state.caterpillar_secret(), &state.ck, index);
    if cocoon_private.is_zero() {
        return Err(Error::ZeroKey(index));
    }
    let butterfly_private = cocoon_private.add_mod_n(randomizer);
    if butterfly_private.is_zero() {
        return Err(Error::ZeroKey(index));
    }

    let expected = EcPoint::decode(&response.certificate.tbs.vki_key)?;
    if EcPoint::base_mul(&butterfly_private) != expected {
        return Err(Error::KeyMismatch);
    }
    Ok((butterfly_private, response.certificate.clone(), randomizer))
}

fn record_ee_ra_request(t: &mut Transcript, req: &EeRaCertRequest, sent: bool) {
    let mut rec = |field: String, value: &[u8]| {
        if sent {
            t.record_sent(field, value)
        } else {
            t.record_received(field, value)
        }
    };
    rec("ck".into(), req.ck.as_bytes());
    rec("caterpillar_public_key".into(), &req.caterpillar_public);
    for (i, pk) in req.kem_public_keys.iter().enumerate() {
        rec(format!("kem_public_key[{i}]"), pk);
    }
    rec("tbs_template".into(), &req.template.to_bytes());
    rec(
        "enrollment_certificate".into(),
        &encode_certificate(&req.enrollment_certificate),
    );
    rec("request_signature".into(), &req.signature);
}

fn record_ra_aca_request(t: &mut Transcript, req: &RaAcaRequest, sent: bool) {
    let mut rec = |field: &'static str, value: &[u8]| {
        if sent {
            t.record_sent(field, value)
        } else {
            t.record_received(field, value)
        }
    };
    rec("cocoon_index", &req.index.to_be_bytes());
    rec("cocoon_public_key", &req.cocoon_public_key);
    rec("kem_public_key", &req.kem_public_key);
    rec("tbs_template", &req.template.to_bytes());
    if let Some(leaked) = &req.leaked_caterpillar_public {
        rec("leaked_caterpillar_public_key", leaked);
    }
}

fn record_aca_response(t: &mut Transcript, resp: &AcaResponse, sent: bool) {
    let mut rec = |field: &'static str, value: &[u8]| {
        if sent {
            t.record_sent(field, value)
        } else {
            t.record_received(field, value)
        }
    };
    rec("certificate", &encode_certificate(&resp.certificate));
    rec(
        "randomizer_ciphertext",
        &resp.randomizer_ciphertext.to_bytes(),
    );
    rec("aca_signature", &resp.aca_signature);
}

/// Registration-authority side of the batch: authenticate the request,
/// expand every cocoon, collect authorization CA responses, and package the
/// download archive.
pub fn ra_process_request(
    provider: &Provider,
    ra: &mut Entity,
    aca: &mut Entity,
    req: &EeRaCertRequest,
    options: &RaOptions,
    rng: &mut dyn CryptoRngCore,
) -> Result<(RaEeCertAck, DownloadArchive)> {
    record_ee_ra_request(&mut ra.transcript, req, false);

    // The enrollment certificate must chain to an issuer the RA trusts.
    let enrollment = &req.enrollment_certificate;
    let issuer = ra
        .store
        .get(&enrollment.tbs.issuer_id)
        .ok_or_else(|| Error::Denied("unknown enrollment certificate issuer".into()))?;
    if !verify_certificate(provider, enrollment, issuer) {
        return Err(Error::SignatureInvalid);
    }
    if !provider.verify(
        enrollment.tbs.vki_scheme,
        &enrollment.tbs.vki_key,
        &req.body_bytes()?,
        &req.signature,
    ) {
        return Err(Error::SignatureInvalid);
    }

    let caterpillar = EcPoint::decode(&req.caterpillar_public)?;
    let mut records = Vec::with_capacity(req.kem_public_keys.len());
    for (i, kem_pk) in req.kem_public_keys.iter().enumerate() {
        let index = i as u64;
        let cocoon = ra_expand_cocoon(&req.ck, &caterpillar, index);
        let aca_req = RaAcaRequest {
            index,
            cocoon_public_key: cocoon.encode()?,
            kem_public_key: kem_pk.clone(),
            template: req.template,
            leaked_caterpillar_public: options
                .leak_caterpillar_to_aca
                .then_some(req.caterpillar_public),
        };
        record_ra_aca_request(&mut ra.transcript, &aca_req, true);
        let response = aca_issue(aca, provider, &aca_req, rng)?;
        record_aca_response(&mut ra.transcript, &response, false);
        records.push(ArchiveRecord {
            certificate: response.certificate,
            randomizer_ciphertext: response.randomizer_ciphertext,
            aca_signature: response.aca_signature,
        });
    }

    let archive = DownloadArchive { records };
    let mut ack = RaEeCertAck {
        status: ACK_STATUS_OK,
        archive_digest: crate::crypto::hashed_id8(&archive.to_bytes()?),
        signature: Vec::new(),
    };
    ack.signature = provider.sign(&ra.keypair, &ack.body_bytes(), rng)?;
    ra.transcript.record_sent("ack_status", &[ack.status]);
    ra.transcript.record_sent("archive_digest", &ack.archive_digest);
    ra.transcript.record_sent("ack_signature", &ack.signature);
    Ok((ack, archive))
}

/// Runs steps (1)-(9) end to end, including the acknowledgment and download
/// exchange, and returns the finalized credentials.
pub fn run_provisioning(
    provider: &Provider,
    ee: &mut Entity,
    ra: &mut Entity,
    aca: &mut Entity,
    count: u32,
    options: &RaOptions,
    rng: &mut dyn CryptoRngCore,
) -> Result<ProvisioningRun> {
    let template = TbsTemplate {
        psid: ee.certificate.tbs.psid,
        validity_start: ee.certificate.tbs.validity_start,
        validity_duration: 7 * 86_400,
    };

    let state = ee_init_butterfly(provider, count, rng)?;
    let request = ee_build_ra_request(provider, &state, ee, template, rng)?;
    record_ee_ra_request(&mut ee.transcript, &request, true);

    let (ack, archive) = ra_process_request(provider, ra, aca, &request, options, rng)?;

    ee.transcript.record_received("ack_status", &[ack.status]);
    ee.transcript.record_received("archive_digest", &ack.archive_digest);
    ee.transcript.record_received("ack_signature", &ack.signature);
    let ra_cert = ra.certificate.clone();
    if !provider.verify(
        ra_cert.tbs.vki_scheme,
        &ra_cert.tbs.vki_key,
        &ack.body_bytes(),
        &ack.signature,
    ) || ack.status != ACK_STATUS_OK
    {
        return Err(Error::SignatureInvalid);
    }

    // Download exchange.
    let mut download = EeRaDownloadRequest {
        archive_digest: ack.archive_digest,
        signature: Vec::new(),
    };
    download.signature = provider.sign(&ee.keypair, &download.body_bytes(), rng)?;
    ee.transcript
        .record_sent("download_archive_digest", &download.archive_digest);
    ee.transcript.record_sent("download_signature", &download.signature);
    ra.transcript
        .record_received("download_archive_digest", &download.archive_digest);
    ra.transcript
        .record_received("download_signature", &download.signature);
    if !provider.verify(
        request.enrollment_certificate.tbs.vki_scheme,
        &request.enrollment_certificate.tbs.vki_key,
        &download.body_bytes(),
        &download.signature,
    ) {
        return Err(Error::SignatureInvalid);
    }
    let archive_bytes = archive.to_bytes()?;
    ra.transcript.record_sent("download_archive", &archive_bytes);
    ee.transcript.record_received("download_archive", &archive_bytes);
    if crate::crypto::hashed_id8(&archive_bytes) != ack.archive_digest {
        return Err(Error::SignatureInvalid);
    }

    let aca_cert = aca.certificate.clone();
    let mut credentials = Vec::with_capacity(archive.records.len());
    let mut sensitive = SensitiveValues {
        caterpillar_public: request.caterpillar_public.to_vec(),
        ck: state.ck.as_bytes().to_vec(),
        ..SensitiveValues::default()
    };
    for (i, record) in archive.records.iter().enumerate() {
        let response = AcaResponse {
            certificate: record.certificate.clone(),
            randomizer_ciphertext: record.randomizer_ciphertext.clone(),
            aca_signature: record.aca_signature.clone(),
        };
        let (private, certificate, randomizer) =
            finalize_internal(provider, &state, i as u64, &response, &aca_cert)?;
        sensitive.randomizer_scalars.push(randomizer.to_bytes());
        sensitive
            .randomizer_points
            .push(EcPoint::base_mul(&randomizer).encode()?);
        sensitive.butterfly_privates.push(private.to_bytes());
        sensitive
            .butterfly_publics
            .push(EcPoint::base_mul(&private).encode()?);
        credentials.push((private, certificate));
    }

    Ok(ProvisioningRun {
        credentials,
        sensitive,
    })
}

/// Result of the transcript-level anonymity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnlinkabilityReport {
    /// (a) The registration authority never handles the plaintext
    /// randomizer r, its point R, or any butterfly private key, anywhere
    /// inside any value it sends or receives.
    pub ra_never_sees_randomizer: bool,
    /// (b) The authorization CA never receives the expansion key or the
    /// caterpillar public key, anywhere inside any received value.
    pub aca_never_sees_caterpillar: bool,
    /// (c) No non-end-entity transcript handles both the caterpillar public
    /// key and a butterfly public key as protocol field values of their own
    /// (certificates relayed as sealed units do not count).
    pub no_party_links_caterpillar_to_butterfly: bool,
}

impl UnlinkabilityReport {
    pub fn all_hold(&self) -> bool {
        self.ra_never_sees_randomizer
            && self.aca_never_sees_caterpillar
            && self.no_party_links_caterpillar_to_butterfly
    }
}

/// Evaluates the three structural anonymity assertions over the
/// registration-authority and authorization-CA transcripts of a run.
pub fn check_unlinkability(
    ra_transcript: &Transcript,
    aca_transcript: &Transcript,
    sensitive: &SensitiveValues,
) -> UnlinkabilityReport {
    let ra_never_sees_randomizer = sensitive
        .randomizer_scalars
        .iter()
        .all(|r| !ra_transcript.any_value_contains(r))
        && sensitive
            .randomizer_points
            .iter()
            .all(|p| !ra_transcript.any_value_contains(p))
        && sensitive
            .butterfly_privates
            .iter()
            .all(|k| !ra_transcript.any_value_contains(k));

    let aca_never_sees_caterpillar = !aca_transcript
        .any_value_contains(&sensitive.caterpillar_public)
        && !aca_transcript.any_value_contains(&sensitive.ck);

    let no_party_links_caterpillar_to_butterfly =
        [ra_transcript, aca_transcript].iter().all(|t| {
            let has_caterpillar = t.any_value_equals(&sensitive.caterpillar_public);
            let has_butterfly = sensitive
                .butterfly_publics
                .iter()
                .any(|p| t.any_value_equals(p));
            !(has_caterpillar && has_butterfly)
        });

    UnlinkabilityReport {
        ra_never_sees_randomizer,
        aca_never_sees_caterpillar,
        no_party_links_caterpillar_to_butterfly,
    }
}
