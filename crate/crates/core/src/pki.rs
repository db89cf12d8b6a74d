//! SCMS entity hierarchy, elector-signed trust list, certificate chain file,
//! and the enrollment flow.

use std::collections::{BTreeMap, BTreeSet};

use rand_core::CryptoRngCore;

use crate::cert::{
    encode_certificate, decode_certificate, issue_certificate, verify_certificate, CertKind,
    Certificate, TbsCertificate, SELF_SIGNED_ISSUER,
};
use crate::codec::{Reader, Writer};
use crate::crypto::{Provider, SchemeId, SigKeyPair};
use crate::error::{Error, Result};
use crate::transcript::Transcript;

pub const ELECTOR_COUNT: usize = 3;
pub const ELECTOR_QUORUM: usize = 2;

const CTL_TAG: u8 = 0x30;
const EE_ECA_REQUEST_TAG: u8 = 0x01;

/// Roles in the credential management hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityRole {
    /// Root certificate authority.
    Rca,
    /// Intermediate certificate authority.
    Ica,
    /// Enrollment certificate authority.
    Eca,
    /// Authorization (pseudonym) certificate authority.
    Aca,
    /// Registration authority.
    Ra,
    /// End entity (on-board or road-side unit).
    Ee,
}

impl EntityRole {
    /// Issuance edges of the hierarchy.
    pub fn may_issue_for(self, subject: EntityRole) -> bool {
        matches!(
            (self, subject),
            (EntityRole::Rca, EntityRole::Rca)
                | (EntityRole::Rca, EntityRole::Ica)
                | (EntityRole::Ica, EntityRole::Eca)
                | (EntityRole::Ica, EntityRole::Aca)
                | (EntityRole::Ica, EntityRole::Ra)
                | (EntityRole::Eca, EntityRole::Ee)
                | (EntityRole::Aca, EntityRole::Ee)
        )
    }

    pub fn is_certificate_authority(self) -> bool {
        matches!(
            self,
            EntityRole::Rca | EntityRole::Ica | EntityRole::Eca | EntityRole::Aca
        )
    }
}

/// Certificates held by an entity, keyed by digest.
#[derive(Debug, Clone, Default)]
pub struct CertStore {
    certs: BTreeMap<[u8; 8], Certificate>,
}

impl CertStore {
    pub fn new() -> CertStore {
        CertStore::default()
    }

    pub fn insert(&mut self, cert: Certificate) -> [u8; 8] {
        let digest = cert.digest();
        self.certs.insert(digest, cert);
        digest
    }

    pub fn get(&self, digest: &[u8; 8]) -> Option<&Certificate> {
        self.certs.get(digest)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Certificate> {
        self.certs.values()
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }
}

/// One entity of the hierarchy with its key material, certificate, trusted
/// store, and protocol transcript. Entities are single-owner mutable state;
/// they exchange messages by value.
#[derive(Debug, Clone)]
pub struct Entity {
    pub role: EntityRole,
    pub keypair: SigKeyPair,
    pub certificate: Certificate,
    pub store: CertStore,
    pub transcript: Transcript,
}

impl Entity {
    pub fn new(role: EntityRole, keypair: SigKeyPair, certificate: Certificate) -> Entity {
        Entity {
            role,
            keypair,
            certificate,
            store: CertStore::new(),
            transcript: Transcript::new(),
        }
    }

    pub fn sign(
        &self,
        provider: &Provider,
        message: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<Vec<u8>> {
        provider.sign(&self.keypair, message, rng)
    }
}

/// Factory-provisioned device identity known to the enrollment authority.
#[derive(Debug, Clone)]
pub struct CanonicalIdentity {
    pub canonical_id: Vec<u8>,
    pub keypair: SigKeyPair,
}

/// One elector endorsement of the trust list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectorSignature {
    pub scheme: SchemeId,
    pub public_key: Vec<u8>,
    pub signature: Vec<u8>,
}

/// Elector-signed list of trusted root digests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateTrustList {
    pub root_digests: Vec<[u8; 8]>,
    pub elector_signatures: Vec<ElectorSignature>,
}

impl CertificateTrustList {
    /// Canonical bytes the electors sign: tag, digest count, digests.
    pub fn body_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(CTL_TAG);
        w.put_u16(self.root_digests.len() as u16);
        for d in &self.root_digests {
            w.put_bytes(d);
        }
        w.into_bytes()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = Writer::new();
        w.put_bytes(&self.body_bytes());
        w.put_u8(self.elector_signatures.len() as u8);
        for e in &self.elector_signatures {
            w.put_u8(e.scheme.code());
            w.put_var16("elector public key", &e.public_key)?;
            w.put_var16("elector signature", &e.signature)?;
        }
        Ok(w.into_bytes())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<CertificateTrustList> {
        let mut r = Reader::new(bytes);
        if r.u8("ctl tag")? != CTL_TAG {
            return Err(Error::Decode("not a certificate trust list".into()));
        }
        let count = r.u16("root digest count")? as usize;
        let mut root_digests = Vec::with_capacity(count);
        for _ in 0..count {
            root_digests.push(r.array::<8>("root digest")?);
        }
        let sig_count = r.u8("elector signature count")? as usize;
        let mut elector_signatures = Vec::with_capacity(sig_count);
        for _ in 0..sig_count {
            let scheme = SchemeId::from_code(r.u8("elector scheme")?)?;
            let public_key = r.var16("elector public key")?.to_vec();
            let signature = r.var16("elector signature")?.to_vec();
            elector_signatures.push(ElectorSignature {
                scheme,
                public_key,
                signature,
            });
        }
        r.finish("certificate trust list")?;
        Ok(CertificateTrustList {
            root_digests,
            elector_signatures,
        })
    }

    /// At least [`ELECTOR_QUORUM`] signatures from distinct elector keys
    /// verify over the canonical body.
    pub fn quorum_satisfied(&self, provider: &Provider) -> bool {
        let body = self.body_bytes();
        let mut valid_keys = BTreeSet::new();
        for e in &self.elector_signatures {
            if provider.verify(e.scheme, &e.public_key, &body, &e.signature) {
                valid_keys.insert(e.public_key.clone());
            }
        }
        valid_keys.len() >= ELECTOR_QUORUM
    }
}

/// Trust list plus the CA certificate chain distributed to end entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateChainFile {
    pub ctl: CertificateTrustList,
    /// Root first; every later certificate's issuer precedes it.
    pub certs: Vec<Certificate>,
}

impl CertificateChainFile {
    /// Single-file binary form: length-prefixed trust list, certificate
    /// count, then length-prefixed canonical certificate encodings.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = Writer::new();
        w.put_var16("trust list", &self.ctl.to_bytes()?)?;
        w.put_u16(self.certs.len() as u16);
        for cert in &self.certs {
            w.put_var16("chain certificate", &encode_certificate(cert))?;
        }
        Ok(w.into_bytes())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<CertificateChainFile> {
        let mut r = Reader::new(bytes);
        let ctl = CertificateTrustList::from_bytes(r.var16("trust list")?)?;
        let count = r.u16("certificate count")? as usize;
        let mut certs = Vec::with_capacity(count);
        for _ in 0..count {
            certs.push(decode_certificate(r.var16("chain certificate")?)?);
        }
        r.finish("certificate chain file")?;
        Ok(CertificateChainFile { ctl, certs })
    }

    pub fn find_by_digest(&self, digest: &[u8; 8]) -> Option<&Certificate> {
        self.certs.iter().find(|c| &c.digest() == digest)
    }
}

/// Full chain verification: elector quorum, listed root, and every link.
pub fn verify_chain(provider: &Provider, ccf: &CertificateChainFile) -> bool {
    if !ccf.ctl.quorum_satisfied(provider) {
        return false;
    }
    let Some(root) = ccf.certs.first() else {
        return false;
    };
    if !root.tbs.is_self_signed()
        || !ccf.ctl.root_digests.contains(&root.digest())
        || !verify_certificate(provider, root, root)
    {
        return false;
    }
    let mut verified: BTreeMap<[u8; 8], &Certificate> = BTreeMap::new();
    verified.insert(root.digest(), root);
    for cert in &ccf.certs[1..] {
        let Some(issuer) = verified.get(&cert.tbs.issuer_id) else {
            return false;
        };
        if !verify_certificate(provider, cert, issuer) {
            return false;
        }
        verified.insert(cert.digest(), cert);
    }
    true
}

/// Scheme assignment and validity windows for [`build_hierarchy`].
#[derive(Debug, Clone)]
pub struct HierarchyConfig {
    pub root_scheme: SchemeId,
    pub ica_scheme: SchemeId,
    pub eca_scheme: SchemeId,
    pub aca_scheme: SchemeId,
    pub ra_scheme: SchemeId,
    pub elector_scheme: SchemeId,
    pub psid: u32,
    /// Start of every validity window, seconds.
    pub validity_start: u32,
    /// Root validity in seconds; subordinate windows nest inside it.
    pub root_validity: u32,
    /// When set, certificate-authority and registration-authority roles must
    /// use post-quantum signature schemes.
    pub hybrid_policy: bool,
}

impl HierarchyConfig {
    /// All authority roles on one scheme.
    pub fn uniform(scheme: SchemeId) -> HierarchyConfig {
        HierarchyConfig {
            root_scheme: scheme,
            ica_scheme: scheme,
            eca_scheme: scheme,
            aca_scheme: scheme,
            ra_scheme: scheme,
            elector_scheme: scheme,
            psid: 0x20,
            validity_start: 1_700_000_000,
            root_validity: 20 * 365 * 86_400,
            hybrid_policy: true,
        }
    }
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        HierarchyConfig::uniform(SchemeId::Falcon512)
    }
}

/// The built hierarchy: entities, electors, and the distributable chain file.
#[derive(Debug)]
pub struct Hierarchy {
    pub rca: Entity,
    pub ica: Entity,
    pub eca: EnrollmentAuthority,
    pub aca: Entity,
    pub ra: Entity,
    pub electors: Vec<SigKeyPair>,
    pub ccf: CertificateChainFile,
}

/// Builds the full entity set with a mutually verifying chain.
pub fn build_hierarchy(
    provider: &Provider,
    config: &HierarchyConfig,
    rng: &mut dyn CryptoRngCore,
) -> Result<Hierarchy> {
    let authority_roles = [
        ("root", config.root_scheme),
        ("intermediate", config.ica_scheme),
        ("enrollment", config.eca_scheme),
        ("authorization", config.aca_scheme),
        ("registration", config.ra_scheme),
    ];
    for (role, scheme) in authority_roles {
        if !scheme.is_signature() {
            return Err(Error::UnsupportedScheme(scheme));
        }
        if config.hybrid_policy && !scheme.is_post_quantum() {
            return Err(Error::PolicyViolation(format!(
                "{role} authority assigned {scheme}, but policy requires a post-quantum scheme"
            )));
        }
    }

    let start = config.validity_start;
    let day = 86_400u32;
    let issue_sub = |provider: &Provider,
                     issuer: &Entity,
                     scheme: SchemeId,
                     validity: u32,
                     rng: &mut dyn CryptoRngCore|
     -> Result<(SigKeyPair, Certificate)> {
        let kp = provider.generate_signing_keypair(scheme, rng)?;
        let tbs = TbsCertificate::new(
            issuer.certificate.digest(),
            start,
            validity,
            config.psid,
            scheme,
            issuer.keypair.scheme,
            kp.public_key.clone(),
        )?;
        let cert = issue_certificate(
            provider,
            &issuer.keypair,
            issuer.certificate.digest(),
            tbs,
            rng,
        )?;
        Ok((kp, cert))
    };

    // Root self-signs.
    let root_kp = provider.generate_signing_keypair(config.root_scheme, rng)?;
    let root_tbs = TbsCertificate::new(
        SELF_SIGNED_ISSUER,
        start,
        config.root_validity,
        config.psid,
        config.root_scheme,
        config.root_scheme,
        root_kp.public_key.clone(),
    )?;
    let root_cert = issue_certificate(provider, &root_kp, SELF_SIGNED_ISSUER, root_tbs, rng)?;
    let rca = Entity::new(EntityRole::Rca, root_kp, root_cert);

    let (ica_kp, ica_cert) = issue_sub(
        provider,
        &rca,
        config.ica_scheme,
        config.root_validity - day,
        rng,
    )?;
    let ica = Entity::new(EntityRole::Ica, ica_kp, ica_cert);

    let sub_validity = config.root_validity - 2 * day;
    let (eca_kp, eca_cert) = issue_sub(provider, &ica, config.eca_scheme, sub_validity, rng)?;
    let (aca_kp, aca_cert) = issue_sub(provider, &ica, config.aca_scheme, sub_validity, rng)?;
    let (ra_kp, ra_cert) = issue_sub(provider, &ica, config.ra_scheme, sub_validity, rng)?;

    let aca = Entity::new(EntityRole::Aca, aca_kp, aca_cert);
    let ra = Entity::new(EntityRole::Ra, ra_kp, ra_cert);
    let eca_entity = Entity::new(EntityRole::Eca, eca_kp, eca_cert);

    // Electors endorse the trust list.
    let mut electors = Vec::with_capacity(ELECTOR_COUNT);
    for _ in 0..ELECTOR_COUNT {
        electors.push(provider.generate_signing_keypair(config.elector_scheme, rng)?);
    }
    let mut ctl = CertificateTrustList {
        root_digests: vec![rca.certificate.digest()],
        elector_signatures: Vec::new(),
    };
    let body = ctl.body_bytes();
    for elector in &electors {
        let signature = provider.sign(elector, &body, rng)?;
        ctl.elector_signatures.push(ElectorSignature {
            scheme: elector.scheme,
            public_key: elector.public_key.clone(),
            signature,
        });
    }

    let ccf = CertificateChainFile {
        ctl,
        certs: vec![
            rca.certificate.clone(),
            ica.certificate.clone(),
            aca.certificate.clone(),
            eca_entity.certificate.clone(),
            ra.certificate.clone(),
        ],
    };
    if !verify_chain(provider, &ccf) {
        return Err(Error::BackendFailure(
            "freshly built chain failed verification".into(),
        ));
    }

    let mut hierarchy = Hierarchy {
        rca,
        ica,
        eca: EnrollmentAuthority::new(eca_entity),
        aca,
        ra,
        electors,
        ccf,
    };
    // Every entity trusts the chain certificates.
    for cert in &hierarchy.ccf.certs {
        hierarchy.rca.store.insert(cert.clone());
        hierarchy.ica.store.insert(cert.clone());
        hierarchy.eca.entity.store.insert(cert.clone());
        hierarchy.aca.store.insert(cert.clone());
        hierarchy.ra.store.insert(cert.clone());
    }
    Ok(hierarchy)
}

/// Why an enrollment request was denied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenyReason {
    UnknownId,
    BadSignature,
    ReplayedNonce,
    PolicyViolation,
}

/// Enrollment request authenticated by the device's canonical key.
#[derive(Debug, Clone)]
pub struct EeEcaCertRequest {
    pub nonce: [u8; 8],
    pub canonical_id: Vec<u8>,
    pub enrollment_scheme: SchemeId,
    pub enrollment_public_key: Vec<u8>,
    pub psid: u32,
    pub validity_start: u32,
    pub validity_duration: u32,
    /// Canonical-key signature over [`Self::body_bytes`].
    pub signature: Vec<u8>,
}

impl EeEcaCertRequest {
    pub fn body_bytes(&self) -> Result<Vec<u8>> {
        let mut w = Writer::new();
        w.put_u8(EE_ECA_REQUEST_TAG);
        w.put_bytes(&self.nonce);
        w.put_var16("canonical_id", &self.canonical_id)?;
        w.put_u8(self.enrollment_scheme.code());
        w.put_var16("enrollment_public_key", &self.enrollment_public_key)?;
        w.put_u32(self.psid);
        w.put_u32(self.validity_start);
        w.put_u32(self.validity_duration);
        Ok(w.into_bytes())
    }
}

/// Response to an enrollment request; denial is a response, not an error.
#[derive(Debug, Clone)]
pub struct EcaEeCertResponse {
    pub status: std::result::Result<Certificate, DenyReason>,
}

impl EcaEeCertResponse {
    pub fn granted(&self) -> Option<&Certificate> {
        self.status.as_ref().ok()
    }
}

/// Builds a signed enrollment request. The enrollment key must be
/// post-quantum.
pub fn ee_eca_cert_request(
    provider: &Provider,
    identity: &CanonicalIdentity,
    enrollment_keypair: &SigKeyPair,
    psid: u32,
    validity_start: u32,
    validity_duration: u32,
    rng: &mut dyn CryptoRngCore,
) -> Result<EeEcaCertRequest> {
    if !enrollment_keypair.scheme.is_post_quantum() {
        return Err(Error::PolicyViolation(
            "enrollment keys must use a post-quantum scheme".into(),
        ));
    }
    let mut nonce = [0u8; 8];
    rng.fill_bytes(&mut nonce);
    let mut req = EeEcaCertRequest {
        nonce,
        canonical_id: identity.canonical_id.clone(),
        enrollment_scheme: enrollment_keypair.scheme,
        enrollment_public_key: enrollment_keypair.public_key.clone(),
        psid,
        validity_start,
        validity_duration,
        signature: Vec::new(),
    };
    req.signature = provider.sign(&identity.keypair, &req.body_bytes()?, rng)?;
    Ok(req)
}

/// The enrollment authority: an entity plus its device registry and replay
/// tracking.
#[derive(Debug)]
pub struct EnrollmentAuthority {
    pub entity: Entity,
    registry: BTreeMap<Vec<u8>, (SchemeId, Vec<u8>)>,
    seen_nonces: BTreeSet<[u8; 8]>,
}

impl EnrollmentAuthority {
    pub fn new(entity: Entity) -> EnrollmentAuthority {
        EnrollmentAuthority {
            entity,
            registry: BTreeMap::new(),
            seen_nonces: BTreeSet::new(),
        }
    }

    /// Pre-stores a device's canonical id and public key.
    pub fn register_device(&mut self, canonical_id: Vec<u8>, scheme: SchemeId, public_key: Vec<u8>) {
        self.registry.insert(canonical_id, (scheme, public_key));
    }

    /// Authenticates the request against the registry and, on success,
    /// issues a pure-PQC enrollment certificate carrying the request's
    /// enrollment key.
    pub fn process_request(
        &mut self,
        provider: &Provider,
        req: &EeEcaCertRequest,
        rng: &mut dyn CryptoRngCore,
    ) -> EcaEeCertResponse {
        let t = &mut self.entity.transcript;
        t.record_received("enrollment_request_nonce", &req.nonce);
        t.record_received("enrollment_request_canonical_id", &req.canonical_id);
        t.record_received(
            "enrollment_request_scheme",
            &[req.enrollment_scheme.code()],
        );
        t.record_received("enrollment_request_public_key", &req.enrollment_public_key);
        t.record_received("enrollment_request_psid", &req.psid.to_be_bytes());
        t.record_received(
            "enrollment_request_validity_start",
            &req.validity_start.to_be_bytes(),
        );
        t.record_received(
            "enrollment_request_validity_duration",
            &req.validity_duration.to_be_bytes(),
        );
        t.record_received("enrollment_request_signature", &req.signature);

        let deny = |reason| EcaEeCertResponse { status: Err(reason) };

        if !self.seen_nonces.insert(req.nonce) {
            return deny(DenyReason::ReplayedNonce);
        }
        let Some((canonical_scheme, canonical_pk)) = self.registry.get(&req.canonical_id) else {
            return deny(DenyReason::UnknownId);
        };
        let Ok(body) = req.body_bytes() else {
            return deny(DenyReason::BadSignature);
        };
        if !provider.verify(*canonical_scheme, canonical_pk, &body, &req.signature) {
            return deny(DenyReason::BadSignature);
        }
        if !req.enrollment_scheme.is_post_quantum() || !req.enrollment_scheme.is_signature() {
            return deny(DenyReason::PolicyViolation);
        }

        // Clamp the requested window into the authority's own.
        let own = &self.entity.certificate.tbs;
        let start = req.validity_start.max(own.validity_start);
        let end = u64::from(req.validity_start)
            .saturating_add(u64::from(req.validity_duration))
            .min(own.validity_end());
        if end <= u64::from(start) {
            return deny(DenyReason::PolicyViolation);
        }
        let duration = (end - u64::from(start)) as u32;

        let issuer_id = self.entity.certificate.digest();
        let Ok(tbs) = TbsCertificate::new(
            issuer_id,
            start,
            duration,
            req.psid,
            req.enrollment_scheme,
            self.entity.keypair.scheme,
            req.enrollment_public_key.clone(),
        ) else {
            return deny(DenyReason::PolicyViolation);
        };
        debug_assert_eq!(tbs.kind, CertKind::PurePqc);
        match issue_certificate(provider, &self.entity.keypair, issuer_id, tbs, rng) {
            Ok(cert) => {
                self.entity
                    .transcript
                    .record_sent("enrollment_certificate", &encode_certificate(&cert));
                EcaEeCertResponse { status: Ok(cert) }
            }
            Err(_) => deny(DenyReason::PolicyViolation),
        }
    }
}
