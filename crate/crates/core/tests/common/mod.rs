#![allow(dead_code)] // each integration target uses a subset of the oracle API

//! Shared test support: independent oracles the implementation is checked
//! against. Nothing here may call into the crate's crypto backends.

pub mod aes_oracle;
pub mod ec_oracle;

/// Convenience: deterministic test rng.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha20Rng {
    use rand_core::SeedableRng;
    rand_chacha::ChaCha20Rng::seed_from_u64(seed)
}
