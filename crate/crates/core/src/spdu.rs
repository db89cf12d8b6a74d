//! Signed secure protocol data units and the WSM length budget.
//!
//! Wire layout: tag byte, header (psid, generation time), 2-byte payload
//! length, payload, signer variant tag, 2-byte signer length, signer bytes
//! (an 8-byte digest or a full certificate), 2-byte signature length,
//! signature. With the default 48-byte sample payload all bytes outside the
//! certificate and the signature total u = 68, so a full-certificate SPDU
//! measures exactly U = u + C + s2.

use rand_core::CryptoRngCore;

use crate::cert::{
    cert_length, decode_certificate, encode_certificate, verify_certificate, Certificate,
    LengthProfile,
};
use crate::codec::{Reader, Writer};
use crate::crypto::{ecc, EcPoint, EcScalar, Provider, SchemeId, SigKeyPair};
use crate::error::{Error, Result};
use crate::pki::{CertStore, CertificateChainFile};

const SPDU_TAG: u8 = 0x53;
const SIGNER_DIGEST_TAG: u8 = 0x01;
const SIGNER_FULL_CERT_TAG: u8 = 0x02;

/// WAVE short message default size limit, bytes.
pub const WSM_LIMIT: u64 = 1400;

/// Sample BSM payload size that makes the non-certificate, non-signature
/// portion of an encoded SPDU exactly 68 bytes.
pub const DEFAULT_BSM_PAYLOAD_LEN: usize = 48;

/// Default verification freshness window, microseconds.
pub const DEFAULT_MAX_AGE_MICROS: u64 = 500_000;

/// Header information of the to-be-signed data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeaderInfo {
    pub psid: u32,
    /// Microseconds.
    pub generation_time: u64,
}

/// How the sender identifies itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignerIdentifier {
    Digest([u8; 8]),
    FullCert(Certificate),
}

/// Signer mode requested at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignerMode {
    Digest,
    FullCert,
}

/// A signed SPDU.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spdu {
    pub header: HeaderInfo,
    pub payload: Vec<u8>,
    pub signer: SignerIdentifier,
    pub signature: Vec<u8>,
}

impl Spdu {
    /// Canonical bytes covered by the signature.
    pub fn tbs_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u32(self.header.psid);
        w.put_u64(self.header.generation_time);
        w.put_u16(self.payload.len() as u16);
        w.put_bytes(&self.payload);
        w.into_bytes()
    }

    pub fn encoded_len(&self) -> usize {
        let signer_len = match &self.signer {
            SignerIdentifier::Digest(_) => 8,
            SignerIdentifier::FullCert(cert) => cert.encoded_len(),
        };
        // tag + header(12) + payload length + payload + signer tag +
        // signer length + signer + signature length + signature
        1 + 12 + 2 + self.payload.len() + 1 + 2 + signer_len + 2 + self.signature.len()
    }
}

pub fn encode_spdu(spdu: &Spdu) -> Result<Vec<u8>> {
    let mut w = Writer::new();
    w.put_u8(SPDU_TAG);
    w.put_u32(spdu.header.psid);
    w.put_u64(spdu.header.generation_time);
    w.put_var16("payload", &spdu.payload)?;
    match &spdu.signer {
        SignerIdentifier::Digest(d) => {
            w.put_u8(SIGNER_DIGEST_TAG);
            w.put_var16("signer", d)?;
        }
        SignerIdentifier::FullCert(cert) => {
            w.put_u8(SIGNER_FULL_CERT_TAG);
            w.put_var16("signer", &encode_certificate(cert))?;
        }
    }
    w.put_var16("signature", &spdu.signature)?;
    Ok(w.into_bytes())
}

pub fn decode_spdu(bytes: &[u8]) -> Result<Spdu> {
    let mut r = Reader::new(bytes);
    if r.u8("spdu tag")? != SPDU_TAG {
        return Err(Error::Decode("not an spdu".into()));
    }
    let psid = r.u32("psid")?;
    let generation_time = r.u64("generation_time")?;
    let payload = r.var16("payload")?.to_vec();
    let signer_tag = r.u8("signer tag")?;
    let signer_bytes = r.var16("signer")?;
    let signer = match signer_tag {
        SIGNER_DIGEST_TAG => {
            let digest: [u8; 8] = signer_bytes
                .try_into()
                .map_err(|_| Error::Decode("signer digest must be 8 bytes".into()))?;
            SignerIdentifier::Digest(digest)
        }
        SIGNER_FULL_CERT_TAG => SignerIdentifier::FullCert(decode_certificate(signer_bytes)?),
        other => return Err(Error::Decode(format!("unknown signer tag {other}"))),
    };
    let signature = r.var16("signature")?.to_vec();
    r.finish("spdu")?;
    Ok(Spdu {
        header: HeaderInfo {
            psid,
            generation_time,
        },
        payload,
        signer,
        signature,
    })
}

/// Builds a signed SPDU with the butterfly (EC) private key belonging to the
/// authorization certificate.
pub fn build_spdu(
    payload: &[u8],
    auth_cert: &Certificate,
    ec_private: &EcScalar,
    mode: SignerMode,
    generation_time: u64,
) -> Result<Spdu> {
    if auth_cert.tbs.vki_scheme != SchemeId::EcdsaP256 {
        return Err(Error::UnsupportedScheme(auth_cert.tbs.vki_scheme));
    }
    let public = EcPoint::base_mul(ec_private).encode()?;
    if public.as_slice() != auth_cert.tbs.vki_key.as_slice() {
        return Err(Error::KeyMismatch);
    }
    let mut spdu = assemble(payload, auth_cert, mode, generation_time)?;
    spdu.signature = ecc::ecdsa_sign(&ec_private.to_bytes(), &spdu.tbs_bytes())?.to_vec();
    Ok(spdu)
}

/// Builds a signed SPDU with an arbitrary signature keypair (used when the
/// authorization certificate carries a PQC key instead of a butterfly key).
pub fn build_spdu_with_keypair(
    provider: &Provider,
    payload: &[u8],
    auth_cert: &Certificate,
    keypair: &SigKeyPair,
    mode: SignerMode,
    generation_time: u64,
    rng: &mut dyn CryptoRngCore,
) -> Result<Spdu> {
    if keypair.scheme != auth_cert.tbs.vki_scheme
        || keypair.public_key != auth_cert.tbs.vki_key
    {
        return Err(Error::KeyMismatch);
    }
    let mut spdu = assemble(payload, auth_cert, mode, generation_time)?;
    spdu.signature = provider.sign(keypair, &spdu.tbs_bytes(), rng)?;
    Ok(spdu)
}

fn assemble(
    payload: &[u8],
    auth_cert: &Certificate,
    mode: SignerMode,
    generation_time: u64,
) -> Result<Spdu> {
    if payload.len() > u16::MAX as usize {
        return Err(Error::FieldOverflow("payload"));
    }
    let signer = match mode {
        SignerMode::Digest => SignerIdentifier::Digest(auth_cert.digest()),
        SignerMode::FullCert => SignerIdentifier::FullCert(auth_cert.clone()),
    };
    Ok(Spdu {
        header: HeaderInfo {
            psid: auth_cert.tbs.psid,
            generation_time,
        },
        payload: payload.to_vec(),
        signer,
        signature: Vec::new(),
    })
}

/// Verification verdict; rejections carry the first failing check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    UnknownSigner,
    BadChain,
    BadSignature,
    Stale,
}

/// Verifies an SPDU: signer resolution, chain to a trust-list root,
/// signature, and freshness — in that order.
pub fn verify_spdu(
    provider: &Provider,
    spdu: &Spdu,
    store: &CertStore,
    chain: &CertificateChainFile,
    now_micros: u64,
    max_age_micros: u64,
) -> Verdict {
    let cert = match &spdu.signer {
        SignerIdentifier::Digest(d) => match store.get(d) {
            Some(cert) => cert.clone(),
            None => return Verdict::Reject(RejectReason::UnknownSigner),
        },
        SignerIdentifier::FullCert(cert) => cert.clone(),
    };

    if !chains_to_trusted_root(provider, &cert, store, chain) {
        return Verdict::Reject(RejectReason::BadChain);
    }

    let tbs = spdu.tbs_bytes();
    let signature_ok = match cert.tbs.vki_scheme {
        SchemeId::EcdsaP256 => ecc::ecdsa_verify(&cert.tbs.vki_key, &tbs, &spdu.signature),
        scheme => provider.verify(scheme, &cert.tbs.vki_key, &tbs, &spdu.signature),
    };
    if !signature_ok {
        return Verdict::Reject(RejectReason::BadSignature);
    }

    if now_micros.saturating_sub(spdu.header.generation_time) > max_age_micros {
        return Verdict::Reject(RejectReason::Stale);
    }

    Verdict::Accept
}

fn chains_to_trusted_root(
    provider: &Provider,
    cert: &Certificate,
    store: &CertStore,
    chain: &CertificateChainFile,
) -> bool {
    if !chain.ctl.quorum_satisfied(provider) {
        return false;
    }
    let mut current = cert.clone();
    for _ in 0..8 {
        if current.tbs.is_self_signed() {
            return chain.ctl.root_digests.contains(&current.digest())
                && verify_certificate(provider, &current, &current);
        }
        let issuer = match chain
            .find_by_digest(&current.tbs.issuer_id)
            .or_else(|| store.get(&current.tbs.issuer_id))
        {
            Some(issuer) => issuer.clone(),
            None => return false,
        };
        if !verify_certificate(provider, &current, &issuer) {
            return false;
        }
        current = issuer;
    }
    false
}

/// Total SPDU length: U = u + C + s2, with C the certificate total.
pub fn spdu_length(profile: &LengthProfile) -> u64 {
    u64::from(profile.u) + cert_length(profile) + u64::from(profile.s2)
}

/// True iff `length` fits the WAVE short message budget (inclusive).
pub fn check_wsm_limit(length: u64) -> bool {
    length <= WSM_LIMIT
}
