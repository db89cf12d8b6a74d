use thiserror::Error;

use crate::crypto::SchemeId;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("scheme {0} is not supported for this operation")]
    UnsupportedScheme(SchemeId),

    #[error("crypto backend failure: {0}")]
    BackendFailure(String),

    #[error("decryption failed")]
    DecryptionFailure,

    #[error("not a valid curve point")]
    InvalidPoint,

    #[error("field `{0}` exceeds its encoded width")]
    FieldOverflow(&'static str),

    #[error("signing scheme {requested} does not match issuer keypair scheme {actual}")]
    SchemeMismatch {
        requested: SchemeId,
        actual: SchemeId,
    },

    #[error("policy violation: {0}")]
    PolicyViolation(String),

    #[error("certificate batch count must be at least 1")]
    InvalidCount,

    #[error("signature verification failed")]
    SignatureInvalid,

    #[error("derived private key does not match the certificate verify key")]
    KeyMismatch,

    #[error("derived private key is zero at index {0}")]
    ZeroKey(u64),

    #[error("malformed encoding: {0}")]
    Decode(String),

    #[error("request denied by peer: {0}")]
    Denied(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
