//! Certificate model, canonical encoding, issuance and verification.
//!
//! A certificate encodes as a fixed 34-byte header, the verify-key-indicator
//! bytes, and the issuer signature running to the end of the buffer. Every
//! byte outside the subject key and the signature lives in the header, so an
//! encoded certificate is exactly `c + k + s1` bytes with `c = 34`.
//! Certificates are not self-delimiting; containers that embed one (SPDUs,
//! chain files, protocol messages) carry an explicit length.

use crate::codec::{Reader, Writer};
use crate::crypto::{hashed_id8, Provider, SchemeId, SigKeyPair};
use crate::error::{Error, Result};

use rand_core::CryptoRngCore;

/// Certificate format version emitted by this implementation.
pub const CERT_VERSION: u8 = 1;

/// Bytes in the fixed to-be-signed header (everything except the subject key
/// and the signature).
pub const FIXED_HEADER_LEN: usize = 34;

/// Issuer id used by self-signed certificates.
pub const SELF_SIGNED_ISSUER: [u8; 8] = [0u8; 8];

/// The three certificate kinds, determined by the (subject key scheme,
/// issuer signature scheme) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum CertKind {
    /// ECC subject key, ECC issuer signature.
    PureEcc = 1,
    /// PQC subject key, PQC issuer signature.
    PurePqc = 2,
    /// ECC subject key, PQC issuer signature.
    Hybrid = 3,
}

impl CertKind {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<CertKind> {
        match code {
            1 => Ok(CertKind::PureEcc),
            2 => Ok(CertKind::PurePqc),
            3 => Ok(CertKind::Hybrid),
            other => Err(Error::Decode(format!("unknown certificate kind {other}"))),
        }
    }

    /// Kind implied by the scheme pair. A PQC subject key under an ECC
    /// issuer signature is not a defined kind.
    pub fn for_schemes(vki_scheme: SchemeId, sig_scheme: SchemeId) -> Result<CertKind> {
        match (vki_scheme.is_post_quantum(), sig_scheme.is_post_quantum()) {
            (false, false) => Ok(CertKind::PureEcc),
            (true, true) => Ok(CertKind::PurePqc),
            (false, true) => Ok(CertKind::Hybrid),
            (true, false) => Err(Error::PolicyViolation(
                "PQC subject key under an ECC issuer signature is not a defined kind".into(),
            )),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CertKind::PureEcc => "pure-ECC",
            CertKind::PurePqc => "pure-PQC",
            CertKind::Hybrid => "PQC+ECC hybrid",
        }
    }
}

/// To-be-signed certificate content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TbsCertificate {
    pub version: u8,
    pub kind: CertKind,
    /// Digest of the issuer certificate, or all zeros for self-signed.
    pub issuer_id: [u8; 8],
    pub subject_id: [u8; 8],
    /// Seconds; start of the validity window.
    pub validity_start: u32,
    /// Seconds from `validity_start`.
    pub validity_duration: u32,
    pub psid: u32,
    /// Scheme of the subject's verification key.
    pub vki_scheme: SchemeId,
    /// Scheme of the issuer's signature.
    pub sig_scheme: SchemeId,
    /// Subject verification key bytes (the VKI).
    pub vki_key: Vec<u8>,
}

impl TbsCertificate {
    pub fn new(
        issuer_id: [u8; 8],
        validity_start: u32,
        validity_duration: u32,
        psid: u32,
        vki_scheme: SchemeId,
        sig_scheme: SchemeId,
        vki_key: Vec<u8>,
    ) -> Result<TbsCertificate> {
        Ok(TbsCertificate {
            version: CERT_VERSION,
            kind: CertKind::for_schemes(vki_scheme, sig_scheme)?,
            issuer_id,
            subject_id: hashed_id8(&vki_key),
            validity_start,
            validity_duration,
            psid,
            vki_scheme,
            sig_scheme,
            vki_key,
        })
    }

    /// Canonical bytes covered by the issuer signature: the 34-byte fixed
    /// header followed by the subject key.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = Writer::new();
        w.put_u8(self.version);
        w.put_u8(self.kind.code());
        w.put_bytes(&self.issuer_id);
        w.put_bytes(&self.subject_id);
        w.put_u32(self.validity_start);
        w.put_u32(self.validity_duration);
        w.put_u32(self.psid);
        w.put_u8(self.vki_scheme.code());
        w.put_u8(self.sig_scheme.code());
        w.put_var16("vki_key", &self.vki_key)?;
        Ok(w.into_bytes())
    }

    fn read(r: &mut Reader<'_>) -> Result<TbsCertificate> {
        let version = r.u8("version")?;
        let kind = CertKind::from_code(r.u8("kind")?)?;
        let issuer_id = r.array::<8>("issuer_id")?;
        let subject_id = r.array::<8>("subject_id")?;
        let validity_start = r.u32("validity_start")?;
        let validity_duration = r.u32("validity_duration")?;
        let psid = r.u32("psid")?;
        let vki_scheme = SchemeId::from_code(r.u8("vki_scheme")?)?;
        let sig_scheme = SchemeId::from_code(r.u8("sig_scheme")?)?;
        let vki_key = r.var16("vki_key")?.to_vec();
        if CertKind::for_schemes(vki_scheme, sig_scheme)? != kind {
            return Err(Error::Decode(
                "certificate kind does not match its scheme pair".into(),
            ));
        }
        Ok(TbsCertificate {
            version,
            kind,
            issuer_id,
            subject_id,
            validity_start,
            validity_duration,
            psid,
            vki_scheme,
            sig_scheme,
            vki_key,
        })
    }

    pub fn validity_end(&self) -> u64 {
        u64::from(self.validity_start) + u64::from(self.validity_duration)
    }

    pub fn is_self_signed(&self) -> bool {
        self.issuer_id == SELF_SIGNED_ISSUER
    }
}

/// A signed certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub tbs: TbsCertificate,
    pub signature: Vec<u8>,
}

impl Certificate {
    /// Encoded length: 34 header bytes + subject key + signature.
    pub fn encoded_len(&self) -> usize {
        FIXED_HEADER_LEN + self.tbs.vki_key.len() + self.signature.len()
    }

    pub fn digest(&self) -> [u8; 8] {
        hashed_id8(&encode_certificate(self))
    }
}

/// Deterministic canonical encoding.
pub fn encode_certificate(cert: &Certificate) -> Vec<u8> {
    let mut bytes = cert
        .tbs
        .to_bytes()
        .expect("certificate was validated at construction");
    bytes.extend_from_slice(&cert.signature);
    bytes
}

/// Decodes one certificate occupying the whole buffer.
pub fn decode_certificate(bytes: &[u8]) -> Result<Certificate> {
    let mut r = Reader::new(bytes);
    let tbs = TbsCertificate::read(&mut r)?;
    let signature = r.rest().to_vec();
    if signature.is_empty() {
        return Err(Error::Decode("certificate carries no signature".into()));
    }
    Ok(Certificate { tbs, signature })
}

/// Signs `tbs` with the issuer keypair.
pub fn issue_certificate(
    provider: &Provider,
    issuer_keypair: &SigKeyPair,
    issuer_cert_id: [u8; 8],
    tbs: TbsCertificate,
    rng: &mut dyn CryptoRngCore,
) -> Result<Certificate> {
    if tbs.sig_scheme != issuer_keypair.scheme {
        return Err(Error::SchemeMismatch {
            requested: tbs.sig_scheme,
            actual: issuer_keypair.scheme,
        });
    }
    if tbs.issuer_id != issuer_cert_id && !tbs.is_self_signed() {
        return Err(Error::PolicyViolation(
            "tbs issuer id names a different issuer".into(),
        ));
    }
    let body = tbs.to_bytes()?;
    let signature = provider.sign(issuer_keypair, &body, rng)?;
    Ok(Certificate { tbs, signature })
}

/// Full verification of `cert` against its issuer certificate: issuer
/// reference, signature, and validity nesting. Failures return false.
pub fn verify_certificate(provider: &Provider, cert: &Certificate, issuer: &Certificate) -> bool {
    if cert.tbs.is_self_signed() {
        // A self-signed certificate only verifies against itself.
        if cert != issuer {
            return false;
        }
    } else if cert.tbs.issuer_id != issuer.digest() {
        return false;
    }
    if cert.tbs.sig_scheme != issuer.tbs.vki_scheme {
        return false;
    }
    if cert.tbs.validity_start < issuer.tbs.validity_start
        || cert.tbs.validity_end() > issuer.tbs.validity_end()
    {
        return false;
    }
    let Ok(body) = cert.tbs.to_bytes() else {
        return false;
    };
    provider.verify(cert.tbs.sig_scheme, &issuer.tbs.vki_key, &body, &cert.signature)
}

/// Analytic length parameters for one certificate/SPDU configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthProfile {
    /// Certificate bytes that are neither the subject key nor the signature.
    pub c: u32,
    /// SPDU bytes that are neither the certificate nor the SPDU signature.
    pub u: u32,
    /// Subject public-key length.
    pub k: u32,
    /// Certificate (issuer) signature length.
    pub s1: u32,
    /// SPDU signature length.
    pub s2: u32,
}

impl LengthProfile {
    pub const DEFAULT_C: u32 = 34;
    pub const DEFAULT_U: u32 = 68;

    pub fn new(k: u32, s1: u32, s2: u32) -> LengthProfile {
        LengthProfile {
            c: Self::DEFAULT_C,
            u: Self::DEFAULT_U,
            k,
            s1,
            s2,
        }
    }
}

/// Total certificate length: C = c + k + s1.
pub fn cert_length(profile: &LengthProfile) -> u64 {
    u64::from(profile.c) + u64::from(profile.k) + u64::from(profile.s1)
}

/// Persists a certificate as a raw binary file named by its hex digest
/// (no extension) inside `dir`. Returns the file path.
pub fn write_certificate_file(
    dir: &std::path::Path,
    cert: &Certificate,
) -> std::io::Result<std::path::PathBuf> {
    let path = dir.join(hex::encode(cert.digest()));
    std::fs::write(&path, encode_certificate(cert))?;
    Ok(path)
}

/// Reads a certificate persisted by [`write_certificate_file`].
pub fn read_certificate_file(path: &std::path::Path) -> Result<Certificate> {
    let bytes = std::fs::read(path)?;
    decode_certificate(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::SeedableRng;

    fn rng() -> rand_chacha::ChaCha20Rng {
        rand_chacha::ChaCha20Rng::seed_from_u64(21)
    }

    fn sample_tbs(vki_scheme: SchemeId, sig_scheme: SchemeId, vki_key: Vec<u8>) -> TbsCertificate {
        TbsCertificate::new([1; 8], 1_700_000_000, 86_400, 0x20, vki_scheme, sig_scheme, vki_key)
            .unwrap()
    }

    #[test]
    fn fixed_header_is_exactly_34_bytes() {
        let tbs = sample_tbs(SchemeId::EcdsaP256, SchemeId::Falcon512, vec![0x02; 33]);
        let bytes = tbs.to_bytes().unwrap();
        assert_eq!(bytes.len(), FIXED_HEADER_LEN + 33);
    }

    #[test]
    fn kind_follows_scheme_pair() {
        assert_eq!(
            CertKind::for_schemes(SchemeId::EcdsaP256, SchemeId::EcdsaP256).unwrap(),
            CertKind::PureEcc
        );
        assert_eq!(
            CertKind::for_schemes(SchemeId::Dilithium2, SchemeId::Dilithium2).unwrap(),
            CertKind::PurePqc
        );
        assert_eq!(
            CertKind::for_schemes(SchemeId::EcdsaP256, SchemeId::Falcon512).unwrap(),
            CertKind::Hybrid
        );
        assert!(CertKind::for_schemes(SchemeId::Falcon512, SchemeId::EcdsaP256).is_err());
    }

    #[test]
    fn encode_decode_round_trip() {
        let provider = Provider::standard();
        let mut rng = rng();
        let issuer = provider
            .generate_signing_keypair(SchemeId::Falcon512, &mut rng)
            .unwrap();
        let tbs = sample_tbs(SchemeId::EcdsaP256, SchemeId::Falcon512, vec![0x02; 33]);
        let cert = issue_certificate(&provider, &issuer, [1; 8], tbs, &mut rng).unwrap();
        let bytes = encode_certificate(&cert);
        assert_eq!(bytes.len(), cert.encoded_len());
        let decoded = decode_certificate(&bytes).unwrap();
        assert_eq!(decoded, cert);
    }

    #[test]
    fn hybrid_falcon_encoding_is_733_bytes() {
        let provider = Provider::standard();
        let mut rng = rng();
        let issuer = provider
            .generate_signing_keypair(SchemeId::Falcon512, &mut rng)
            .unwrap();
        let tbs = sample_tbs(SchemeId::EcdsaP256, SchemeId::Falcon512, vec![0x02; 33]);
        let cert = issue_certificate(&provider, &issuer, [1; 8], tbs, &mut rng).unwrap();
        // 34 + 33 + 666
        assert_eq!(encode_certificate(&cert).len(), 733);
    }

    #[test]
    fn issue_rejects_scheme_mismatch() {
        let provider = Provider::standard();
        let mut rng = rng();
        let issuer = provider
            .generate_signing_keypair(SchemeId::Dilithium2, &mut rng)
            .unwrap();
        let tbs = sample_tbs(SchemeId::EcdsaP256, SchemeId::Falcon512, vec![0x02; 33]);
        assert!(matches!(
            issue_certificate(&provider, &issuer, [1; 8], tbs, &mut rng),
            Err(Error::SchemeMismatch { .. })
        ));
    }

    #[test]
    fn self_signed_root_verifies_against_itself() {
        let provider = Provider::standard();
        let mut rng = rng();
        let kp = provider
            .generate_signing_keypair(SchemeId::Dilithium2, &mut rng)
            .unwrap();
        let tbs = TbsCertificate::new(
            SELF_SIGNED_ISSUER,
            1_700_000_000,
            10 * 365 * 86_400,
            0x20,
            SchemeId::Dilithium2,
            SchemeId::Dilithium2,
            kp.public_key.clone(),
        )
        .unwrap();
        let root = issue_certificate(&provider, &kp, SELF_SIGNED_ISSUER, tbs, &mut rng).unwrap();
        assert!(verify_certificate(&provider, &root, &root));
    }

    #[test]
    fn chain_link_verifies_and_tamper_fails() {
        let provider = Provider::standard();
        let mut rng = rng();
        let root_kp = provider
            .generate_signing_keypair(SchemeId::Falcon512, &mut rng)
            .unwrap();
        let root_tbs = TbsCertificate::new(
            SELF_SIGNED_ISSUER,
            1_700_000_000,
            10 * 365 * 86_400,
            0x20,
            SchemeId::Falcon512,
            SchemeId::Falcon512,
            root_kp.public_key.clone(),
        )
        .unwrap();
        let root =
            issue_certificate(&provider, &root_kp, SELF_SIGNED_ISSUER, root_tbs, &mut rng).unwrap();

        let child_kp = provider
            .generate_signing_keypair(SchemeId::EcdsaP256, &mut rng)
            .unwrap();
        let child_tbs = TbsCertificate::new(
            root.digest(),
            1_700_000_000,
            365 * 86_400,
            0x20,
            SchemeId::EcdsaP256,
            SchemeId::Falcon512,
            child_kp.public_key.clone(),
        )
        .unwrap();
        let child =
            issue_certificate(&provider, &root_kp, root.digest(), child_tbs, &mut rng).unwrap();
        assert!(verify_certificate(&provider, &child, &root));

        let mut tampered = child.clone();
        tampered.tbs.psid ^= 1;
        assert!(!verify_certificate(&provider, &tampered, &root));
    }

    #[test]
    fn validity_must_nest_within_issuer() {
        let provider = Provider::standard();
        let mut rng = rng();
        let root_kp = provider
            .generate_signing_keypair(SchemeId::Falcon512, &mut rng)
            .unwrap();
        let root_tbs = TbsCertificate::new(
            SELF_SIGNED_ISSUER,
            1_700_000_000,
            1000,
            0x20,
            SchemeId::Falcon512,
            SchemeId::Falcon512,
            root_kp.public_key.clone(),
        )
        .unwrap();
        let root =
            issue_certificate(&provider, &root_kp, SELF_SIGNED_ISSUER, root_tbs, &mut rng).unwrap();

        // Child validity extends one second past the issuer's.
        let child_kp = provider
            .generate_signing_keypair(SchemeId::EcdsaP256, &mut rng)
            .unwrap();
        let child_tbs = TbsCertificate::new(
            root.digest(),
            1_700_000_000,
            1001,
            0x20,
            SchemeId::EcdsaP256,
            SchemeId::Falcon512,
            child_kp.public_key.clone(),
        )
        .unwrap();
        let child =
            issue_certificate(&provider, &root_kp, root.digest(), child_tbs, &mut rng).unwrap();
        assert!(!verify_certificate(&provider, &child, &root));
    }

    #[test]
    fn cert_length_reproduces_published_rows() {
        assert_eq!(cert_length(&LengthProfile::new(33, 65, 65)), 132);
        assert_eq!(cert_length(&LengthProfile::new(1312, 2420, 2420)), 3766);
        let zero = LengthProfile {
            c: 0,
            u: 0,
            k: 0,
            s1: 0,
            s2: 0,
        };
        assert_eq!(cert_length(&zero), 0);
    }

    #[test]
    fn oversized_vki_is_rejected() {
        let tbs = sample_tbs(SchemeId::Dilithium2, SchemeId::Dilithium2, vec![0; 70_000]);
        assert!(matches!(tbs.to_bytes(), Err(Error::FieldOverflow("vki_key"))));
    }
}
