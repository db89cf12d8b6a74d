//! Short identifiers derived from SHA-256.

use sha2::{Digest, Sha256};

/// Low-order 8 bytes of SHA-256 over the input. Used as the certificate
/// digest (issuer reference) and for other short content identifiers.
pub fn hashed_id8(bytes: &[u8]) -> [u8; 8] {
    let digest = Sha256::digest(bytes);
    digest[24..32].try_into().expect("sha-256 is 32 bytes")
}
