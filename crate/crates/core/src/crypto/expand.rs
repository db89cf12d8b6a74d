//! The AES-based expansion function f1.
//!
//! f1 maps a symmetric key and a certificate index to a scalar in [1, n-1].
//! Construction (bit-exact so independent implementations interoperate):
//! for j in {0, 1}, block_j is the big-endian 128-bit encoding of
//! (index * 2 + j); the two blocks are encrypted with AES-128-ECB under ck,
//! concatenated, read as a big-endian 256-bit integer, reduced mod (n - 1),
//! and incremented by one.

use aes::cipher::{BlockEncrypt, KeyInit};
use aes::{Aes128, Block};
use num_bigint::BigUint;
use rand_core::CryptoRngCore;

use crate::crypto::ecc::{EcScalar, GROUP_ORDER};

pub const EXPANSION_KEY_LEN: usize = 16;

/// AES-128 key driving the cocoon expansion.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct ExpansionKey([u8; EXPANSION_KEY_LEN]);

impl ExpansionKey {
    pub fn new(bytes: [u8; EXPANSION_KEY_LEN]) -> ExpansionKey {
        ExpansionKey(bytes)
    }

    pub fn random(rng: &mut dyn CryptoRngCore) -> ExpansionKey {
        let mut bytes = [0u8; EXPANSION_KEY_LEN];
        rng.fill_bytes(&mut bytes);
        ExpansionKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; EXPANSION_KEY_LEN] {
        &self.0
    }
}

impl std::fmt::Debug for ExpansionKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExpansionKey(..)")
    }
}

/// Deterministic expansion of (ck, index) into a scalar in [1, n-1].
pub fn f1_expand(ck: &ExpansionKey, index: u64) -> EcScalar {
    let cipher = Aes128::new(ck.as_bytes().into());
    let mut wide = [0u8; 32];
    for j in 0..2u128 {
        let counter = u128::from(index) * 2 + j;
        let mut block = Block::from(counter.to_be_bytes());
        cipher.encrypt_block(&mut block);
        wide[j as usize * 16..(j as usize + 1) * 16].copy_from_slice(&block);
    }
    let n_minus_one = BigUint::from_bytes_be(&GROUP_ORDER) - 1u32;
    let reduced = BigUint::from_bytes_be(&wide) % n_minus_one + 1u32;
    let mut out = [0u8; 32];
    let reduced_bytes = reduced.to_bytes_be();
    out[32 - reduced_bytes.len()..].copy_from_slice(&reduced_bytes);
    EcScalar::from_bytes(&out).expect("value in [1, n-1] is a valid scalar")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::SeedableRng;

    #[test]
    fn deterministic() {
        let ck = ExpansionKey::new(*b"0123456789abcdef");
        assert_eq!(f1_expand(&ck, 0).to_bytes(), f1_expand(&ck, 0).to_bytes());
        assert_eq!(f1_expand(&ck, 17).to_bytes(), f1_expand(&ck, 17).to_bytes());
    }

    #[test]
    fn nonzero_and_distinct_across_indices() {
        let ck = ExpansionKey::new([0xA5; 16]);
        let mut seen = std::collections::HashSet::new();
        for i in 0..200 {
            let s = f1_expand(&ck, i);
            assert!(!s.is_zero());
            assert!(seen.insert(s.to_bytes()), "collision at index {i}");
        }
    }

    #[test]
    fn distinct_keys_give_distinct_scalars() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        for _ in 0..100 {
            let ck1 = ExpansionKey::random(&mut rng);
            let ck2 = ExpansionKey::random(&mut rng);
            assert_ne!(f1_expand(&ck1, 3).to_bytes(), f1_expand(&ck2, 3).to_bytes());
        }
    }

    #[test]
    fn max_index_does_not_overflow() {
        let ck = ExpansionKey::new([1; 16]);
        let s = f1_expand(&ck, u64::MAX);
        assert!(!s.is_zero());
    }
}
