//! Hybrid post-quantum / elliptic-curve certificates for a V2X security
//! credential management system.
//!
//! The crate provides:
//!
//! - a pluggable crypto provider over four signature schemes (ECDSA P-256,
//!   Dilithium-2, Falcon-512, SPHINCS+ SHA2-128f) and one KEM (Kyber-512),
//!   plus P-256 arithmetic and the AES-based expansion function used for
//!   butterfly key derivation ([`crypto`]);
//! - a compact explicit-certificate format with three kinds — pure-ECC,
//!   pure-PQC, and hybrid (ECC subject key under a PQC issuer signature) —
//!   and its analytic length accounting ([`cert`]);
//! - the SCMS entity hierarchy, elector-signed trust list, certificate chain
//!   file, and enrollment flow ([`pki`]);
//! - the anonymous authorization-certificate provisioning flow built on
//!   butterfly key expansion, with per-entity transcripts and structural
//!   unlinkability checks ([`butterfly`]);
//! - signed SPDU construction and verification under the 1400-byte WSM
//!   budget ([`spdu`]);
//! - length/timing report generation and a deterministic two-vehicle BSM
//!   exchange simulator backing the `scms` command-line tool ([`report`],
//!   [`mod@bench`], [`sim`]).

pub mod bench;
pub mod butterfly;
pub mod cert;
pub mod codec;
pub mod crypto;
pub mod error;
pub mod pki;
pub mod report;
pub mod sim;
pub mod spdu;
pub mod transcript;

pub use crate::crypto::{Provider, SchemeId, SchemeProfile};
pub use crate::error::{Error, Result};
