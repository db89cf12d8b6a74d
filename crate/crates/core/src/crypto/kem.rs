//! KEM-DEM hybrid encryption.
//!
//! The KEM is a key *encapsulation* mechanism, not a direct cipher, so
//! encrypting a value to a KEM public key is realized as: encapsulate to get
//! a 32-byte shared secret, then seal the plaintext with AES-256-GCM under
//! that secret and a fresh 12-byte nonce.

use aes_gcm::aead::{Aead, Payload};
use aes_gcm::{Aes256Gcm, KeyInit};
use rand_core::CryptoRngCore;

use crate::codec::{Reader, Writer};
use crate::crypto::{KemBackend, KemKeyPair, SchemeId};
use crate::error::{Error, Result};

pub const AEAD_NONCE_LEN: usize = 12;

/// Maximum plaintext accepted by KEM-DEM encryption.
pub const MAX_PLAINTEXT_LEN: usize = 1 << 16;

const AAD: &[u8] = b"scms kem-dem v1";

/// Ciphertext produced by KEM-DEM encryption.
#[derive(Clone, PartialEq, Eq)]
pub struct HybridCiphertext {
    pub kem_scheme: SchemeId,
    pub kem_ciphertext: Vec<u8>,
    pub nonce: [u8; AEAD_NONCE_LEN],
    pub aead_ciphertext: Vec<u8>,
}

impl std::fmt::Debug for HybridCiphertext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HybridCiphertext")
            .field("kem_scheme", &self.kem_scheme)
            .field("kem_ciphertext_len", &self.kem_ciphertext.len())
            .field("aead_ciphertext_len", &self.aead_ciphertext.len())
            .finish()
    }
}

impl HybridCiphertext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(self.kem_scheme.code());
        w.put_var16("kem_ciphertext", &self.kem_ciphertext)
            .expect("kem ciphertext fits u16");
        w.put_bytes(&self.nonce);
        w.put_var16("aead_ciphertext", &self.aead_ciphertext)
            .expect("bounded by MAX_PLAINTEXT_LEN at encryption");
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<HybridCiphertext> {
        let mut r = Reader::new(bytes);
        let kem_scheme = SchemeId::from_code(r.u8("kem scheme")?)?;
        let kem_ciphertext = r.var16("kem ciphertext")?.to_vec();
        let nonce = r.array::<AEAD_NONCE_LEN>("nonce")?;
        let aead_ciphertext = r.var16("aead ciphertext")?.to_vec();
        r.finish("hybrid ciphertext")?;
        Ok(HybridCiphertext {
            kem_scheme,
            kem_ciphertext,
            nonce,
            aead_ciphertext,
        })
    }
}

pub(crate) fn kem_encrypt(
    backend: &dyn KemBackend,
    recipient_pk: &[u8],
    plaintext: &[u8],
    rng: &mut dyn CryptoRngCore,
) -> Result<HybridCiphertext> {
    if plaintext.len() > MAX_PLAINTEXT_LEN {
        return Err(Error::FieldOverflow("kem plaintext"));
    }
    let (shared_secret, kem_ciphertext) = backend.encapsulate(recipient_pk, rng)?;
    let cipher = Aes256Gcm::new_from_slice(&shared_secret)
        .map_err(|e| Error::BackendFailure(format!("aead key: {e}")))?;
    let mut nonce = [0u8; AEAD_NONCE_LEN];
    rng.fill_bytes(&mut nonce);
    let aead_ciphertext = cipher
        .encrypt(
            (&nonce).into(),
            Payload {
                msg: plaintext,
                aad: AAD,
            },
        )
        .map_err(|e| Error::BackendFailure(format!("aead seal: {e}")))?;
    Ok(HybridCiphertext {
        kem_scheme: backend.scheme(),
        kem_ciphertext,
        nonce,
        aead_ciphertext,
    })
}

pub(crate) fn kem_decrypt(
    backend: &dyn KemBackend,
    kp: &KemKeyPair,
    ct: &HybridCiphertext,
) -> Result<Vec<u8>> {
    if ct.kem_scheme != kp.scheme {
        return Err(Error::DecryptionFailure);
    }
    let shared_secret = backend.decapsulate(kp, &ct.kem_ciphertext)?;
    let cipher =
        Aes256Gcm::new_from_slice(&shared_secret).map_err(|_| Error::DecryptionFailure)?;
    cipher
        .decrypt(
            (&ct.nonce).into(),
            Payload {
                msg: &ct.aead_ciphertext,
                aad: AAD,
            },
        )
        .map_err(|_| Error::DecryptionFailure)
}
