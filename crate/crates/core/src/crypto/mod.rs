//! Uniform interface over the signature schemes, the KEM, P-256 arithmetic,
//! the AES-based expansion function, and hashing.

mod backends;
pub mod digest;
pub mod ecc;
pub mod expand;
pub mod kem;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand_core::CryptoRngCore;

use crate::error::{Error, Result};

pub use digest::hashed_id8;
pub use ecc::{EcPoint, EcScalar};
pub use expand::{f1_expand, ExpansionKey};
pub use kem::HybridCiphertext;

/// Probe message used for the keypair self-test after generation.
const KEYGEN_PROBE: &[u8] = b"scms keygen self-test probe";

/// Identifies one of the supported cryptographic schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum SchemeId {
    EcdsaP256 = 1,
    Dilithium2 = 2,
    Falcon512 = 3,
    SphincsSha2_128f = 4,
    Kyber512 = 5,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::EcdsaP256,
        SchemeId::Dilithium2,
        SchemeId::Falcon512,
        SchemeId::SphincsSha2_128f,
        SchemeId::Kyber512,
    ];

    pub const SIGNATURE_SCHEMES: [SchemeId; 4] = [
        SchemeId::EcdsaP256,
        SchemeId::Dilithium2,
        SchemeId::Falcon512,
        SchemeId::SphincsSha2_128f,
    ];

    pub fn is_signature(self) -> bool {
        self != SchemeId::Kyber512
    }

    pub fn is_kem(self) -> bool {
        self == SchemeId::Kyber512
    }

    /// ECDSA P-256 is the only elliptic-curve scheme; everything else is PQC.
    pub fn is_post_quantum(self) -> bool {
        self != SchemeId::EcdsaP256
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            1 => Ok(SchemeId::EcdsaP256),
            2 => Ok(SchemeId::Dilithium2),
            3 => Ok(SchemeId::Falcon512),
            4 => Ok(SchemeId::SphincsSha2_128f),
            5 => Ok(SchemeId::Kyber512),
            other => Err(Error::Decode(format!("unknown scheme code {other}"))),
        }
    }

    /// Human-readable algorithm name as used in the length/timing reports.
    pub fn display_name(self) -> &'static str {
        match self {
            SchemeId::EcdsaP256 => "ECDSA P-256",
            SchemeId::Dilithium2 => "Dilithium-2",
            SchemeId::Falcon512 => "Falcon-512",
            SchemeId::SphincsSha2_128f => "SPHINCS+ SHA2-128f",
            SchemeId::Kyber512 => "Kyber-512",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl std::str::FromStr for SchemeId {
    type Err = Error;

    /// Accepts the common spellings, case- and punctuation-insensitive
    /// (e.g. `falcon512`, `Falcon-512`, `fn-dsa-512`).
    fn from_str(s: &str) -> Result<SchemeId> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "ecdsa" | "ecdsap256" | "p256" => Ok(SchemeId::EcdsaP256),
            "dilithium2" | "mldsa44" => Ok(SchemeId::Dilithium2),
            "falcon512" | "fndsa512" => Ok(SchemeId::Falcon512),
            "sphincs" | "sphincssha2128f" | "slhdsasha2128f" => Ok(SchemeId::SphincsSha2_128f),
            "kyber512" | "mlkem512" => Ok(SchemeId::Kyber512),
            _ => Err(Error::Config(format!("unknown scheme `{s}`"))),
        }
    }
}

/// Analytic length parameters per algorithm.
///
/// These drive the length-table reproduction and are deliberately independent
/// of the live backend: a backend is free to emit slightly different sizes
/// (e.g. a different SPHINCS+ parameter revision) without touching the
/// analytic tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeProfile {
    pub scheme: SchemeId,
    /// NIST PQC security level; 0 means "not quantum-safe".
    pub security_level: u8,
    /// Public-key length in bytes.
    pub pk_len: u32,
    /// Signature length (signature schemes) or ciphertext length (KEM).
    pub sig_len: u32,
}

impl SchemeProfile {
    /// Default profile for a scheme, carrying the published table values.
    pub fn default_for(scheme: SchemeId) -> SchemeProfile {
        match scheme {
            SchemeId::EcdsaP256 => SchemeProfile {
                scheme,
                security_level: 0,
                pk_len: 33,
                sig_len: 65,
            },
            SchemeId::Dilithium2 => SchemeProfile {
                scheme,
                security_level: 2,
                pk_len: 1312,
                sig_len: 2420,
            },
            SchemeId::Falcon512 => SchemeProfile {
                scheme,
                security_level: 1,
                pk_len: 898,
                sig_len: 666,
            },
            SchemeId::SphincsSha2_128f => SchemeProfile {
                scheme,
                security_level: 1,
                pk_len: 33,
                sig_len: 16720,
            },
            SchemeId::Kyber512 => SchemeProfile {
                scheme,
                security_level: 1,
                pk_len: 800,
                sig_len: 768,
            },
        }
    }

    /// Profile carrying the live backend's actual lengths instead of the
    /// published ones. Security level is unchanged.
    pub fn backend_for(provider: &Provider, scheme: SchemeId) -> SchemeProfile {
        let mut p = Self::default_for(scheme);
        if scheme.is_kem() {
            let b = provider.kem_backend(scheme).expect("standard kem");
            p.pk_len = b.public_key_len() as u32;
            p.sig_len = b.ciphertext_len() as u32;
        } else {
            let b = provider.signature_backend(scheme).expect("standard sig");
            p.pk_len = b.public_key_len() as u32;
            p.sig_len = b.signature_len() as u32;
        }
        p
    }
}

/// A signature keypair. Secret key bytes are backend-opaque.
#[derive(Clone)]
pub struct SigKeyPair {
    pub scheme: SchemeId,
    pub public_key: Vec<u8>,
    pub(crate) secret_key: Vec<u8>,
}

impl fmt::Debug for SigKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigKeyPair")
            .field("scheme", &self.scheme)
            .field("public_key_len", &self.public_key.len())
            .finish_non_exhaustive()
    }
}

/// A KEM keypair.
#[derive(Clone)]
pub struct KemKeyPair {
    pub scheme: SchemeId,
    pub public_key: Vec<u8>,
    pub(crate) secret_key: Vec<u8>,
}

impl fmt::Debug for KemKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KemKeyPair")
            .field("scheme", &self.scheme)
            .field("public_key_len", &self.public_key.len())
            .finish_non_exhaustive()
    }
}

/// Backend contract for one signature scheme.
///
/// Any implementation satisfying these contracts may be injected into a
/// [`Provider`], so the scheme set is open for extension.
pub trait SignatureBackend: Send + Sync {
    fn scheme(&self) -> SchemeId;
    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<SigKeyPair>;
    fn sign(&self, kp: &SigKeyPair, message: &[u8], rng: &mut dyn CryptoRngCore)
        -> Result<Vec<u8>>;
    /// Never panics on malformed input; malformed keys or signatures verify
    /// as false.
    fn verify(&self, public_key: &[u8], message: &[u8], signature: &[u8]) -> bool;
    fn public_key_len(&self) -> usize;
    fn signature_len(&self) -> usize;
}

/// Backend contract for one KEM scheme.
pub trait KemBackend: Send + Sync {
    fn scheme(&self) -> SchemeId;
    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<KemKeyPair>;
    /// Returns `(shared_secret, kem_ciphertext)`.
    fn encapsulate(
        &self,
        public_key: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<(Vec<u8>, Vec<u8>)>;
    fn decapsulate(&self, kp: &KemKeyPair, ciphertext: &[u8]) -> Result<Vec<u8>>;
    fn public_key_len(&self) -> usize;
    fn ciphertext_len(&self) -> usize;
}

/// Registry of scheme backends. All operations are stateless per call; the
/// provider is safe to share across threads.
pub struct Provider {
    signatures: BTreeMap<SchemeId, Arc<dyn SignatureBackend>>,
    kems: BTreeMap<SchemeId, Arc<dyn KemBackend>>,
}

impl Provider {
    /// Provider with the standard backend for each of the five schemes.
    pub fn standard() -> Self {
        let mut p = Provider {
            signatures: BTreeMap::new(),
            kems: BTreeMap::new(),
        };
        p.register_signature(Arc::new(backends::EcdsaP256Backend));
        p.register_signature(Arc::new(backends::MlDsa44Backend));
        p.register_signature(Arc::new(backends::FnDsa512Backend));
        p.register_signature(Arc::new(backends::SlhDsaSha2128fBackend));
        p.register_kem(Arc::new(backends::MlKem512Backend));
        p
    }

    pub fn register_signature(&mut self, backend: Arc<dyn SignatureBackend>) {
        self.signatures.insert(backend.scheme(), backend);
    }

    pub fn register_kem(&mut self, backend: Arc<dyn KemBackend>) {
        self.kems.insert(backend.scheme(), backend);
    }

    pub fn signature_backend(&self, scheme: SchemeId) -> Result<&dyn SignatureBackend> {
        self.signatures
            .get(&scheme)
            .map(|b| b.as_ref())
            .ok_or(Error::UnsupportedScheme(scheme))
    }

    pub fn kem_backend(&self, scheme: SchemeId) -> Result<&dyn KemBackend> {
        self.kems
            .get(&scheme)
            .map(|b| b.as_ref())
            .ok_or(Error::UnsupportedScheme(scheme))
    }

    /// Generates a signing keypair and runs a sign/verify self-test on a
    /// fixed probe message before returning it.
    pub fn generate_signing_keypair(
        &self,
        scheme: SchemeId,
        rng: &mut dyn CryptoRngCore,
    ) -> Result<SigKeyPair> {
        let backend = self.signature_backend(scheme)?;
        let kp = backend.generate(rng)?;
        let sig = backend.sign(&kp, KEYGEN_PROBE, rng)?;
        if !backend.verify(&kp.public_key, KEYGEN_PROBE, &sig) {
            return Err(Error::BackendFailure(format!(
                "{scheme} keypair failed its sign/verify self-test"
            )));
        }
        Ok(kp)
    }

    pub fn sign(
        &self,
        kp: &SigKeyPair,
        message: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<Vec<u8>> {
        self.signature_backend(kp.scheme)?.sign(kp, message, rng)
    }

    /// Returns true iff the signature is valid; malformed input yields false.
    pub fn verify(
        &self,
        scheme: SchemeId,
        public_key: &[u8],
        message: &[u8],
        signature: &[u8],
    ) -> bool {
        match self.signature_backend(scheme) {
            Ok(b) => b.verify(public_key, message, signature),
            Err(_) => false,
        }
    }

    /// Generates a KEM keypair and checks an encapsulate/decapsulate round
    /// trip before returning it.
    pub fn generate_kem_keypair(
        &self,
        scheme: SchemeId,
        rng: &mut dyn CryptoRngCore,
    ) -> Result<KemKeyPair> {
        let backend = self.kem_backend(scheme)?;
        let kp = backend.generate(rng)?;
        let (ss, ct) = backend.encapsulate(&kp.public_key, rng)?;
        if backend.decapsulate(&kp, &ct)? != ss {
            return Err(Error::BackendFailure(format!(
                "{scheme} keypair failed its encapsulation self-test"
            )));
        }
        Ok(kp)
    }

    /// KEM-DEM encryption of an arbitrary short plaintext to a KEM public key.
    pub fn kem_encrypt(
        &self,
        scheme: SchemeId,
        recipient_pk: &[u8],
        plaintext: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<HybridCiphertext> {
        kem::kem_encrypt(self.kem_backend(scheme)?, recipient_pk, plaintext, rng)
    }

    pub fn kem_decrypt(&self, kp: &KemKeyPair, ct: &HybridCiphertext) -> Result<Vec<u8>> {
        kem::kem_decrypt(self.kem_backend(kp.scheme)?, kp, ct)
    }
}

impl Default for Provider {
    fn default() -> Self {
        Self::standard()
    }
}
