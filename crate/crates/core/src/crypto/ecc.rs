//! P-256 scalar/point arithmetic and point-form ECDSA.
//!
//! Points serialize as 33-byte SEC1 compressed encodings. ECDSA signatures
//! are 65 bytes: the compressed R point (its y parity recovered at signing
//! time) followed by the 32-byte s scalar. Verification uses only (r, s);
//! the parity byte exists so a signature occupies exactly one point plus one
//! integer on the wire.

use p256::ecdsa::signature::Verifier;
use p256::ecdsa::{Signature, SigningKey, VerifyingKey};
use p256::elliptic_curve::sec1::{FromEncodedPoint, ToEncodedPoint};
use p256::elliptic_curve::PrimeField;
use p256::{AffinePoint, EncodedPoint, NonZeroScalar, ProjectivePoint, Scalar};
use rand_core::CryptoRngCore;

use crate::error::{Error, Result};

pub const COMPRESSED_POINT_LEN: usize = 33;
pub const POINT_FORM_SIGNATURE_LEN: usize = 65;
pub const SCALAR_LEN: usize = 32;

/// The P-256 group order n, big-endian.
pub const GROUP_ORDER: [u8; 32] = [
    0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x00, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
    0xff, 0xbc, 0xe6, 0xfa, 0xad, 0xa7, 0x17, 0x9e, 0x84, 0xf3, 0xb9, 0xca, 0xc2, 0xfc, 0x63,
    0x25, 0x51,
];

/// An integer modulo the P-256 group order.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct EcScalar(Scalar);

impl EcScalar {
    /// Uniformly random nonzero scalar.
    pub fn random(rng: &mut dyn CryptoRngCore) -> EcScalar {
        EcScalar(*NonZeroScalar::random(&mut &mut *rng))
    }

    /// Big-endian 32-byte value; must be < n.
    pub fn from_bytes(bytes: &[u8; 32]) -> Result<EcScalar> {
        Option::<Scalar>::from(Scalar::from_repr((*bytes).into()))
            .map(EcScalar)
            .ok_or(Error::Decode("scalar out of range".into()))
    }

    pub fn to_bytes(self) -> [u8; 32] {
        self.0.to_repr().into()
    }

    /// (self + other) mod n.
    pub fn add_mod_n(self, other: EcScalar) -> EcScalar {
        EcScalar(self.0 + other.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == Scalar::ZERO
    }
}

impl std::fmt::Debug for EcScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EcScalar(..)")
    }
}

/// A point on P-256 (the identity included for arithmetic, though it has no
/// compressed serialization).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EcPoint(ProjectivePoint);

impl EcPoint {
    pub fn identity() -> EcPoint {
        EcPoint(ProjectivePoint::IDENTITY)
    }

    pub fn generator() -> EcPoint {
        EcPoint(ProjectivePoint::GENERATOR)
    }

    /// s·G.
    pub fn base_mul(s: &EcScalar) -> EcPoint {
        EcPoint(ProjectivePoint::GENERATOR * s.0)
    }

    /// Point addition.
    pub fn add(&self, other: &EcPoint) -> EcPoint {
        EcPoint(self.0 + other.0)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == ProjectivePoint::IDENTITY
    }

    /// 33-byte SEC1 compressed encoding. The identity is not encodable.
    pub fn encode(&self) -> Result<[u8; COMPRESSED_POINT_LEN]> {
        if self.is_identity() {
            return Err(Error::InvalidPoint);
        }
        let encoded = self.0.to_affine().to_encoded_point(true);
        Ok(encoded.as_bytes().try_into().expect("compressed length"))
    }

    /// Decodes a 33-byte compressed point, rejecting off-curve input.
    pub fn decode(bytes: &[u8]) -> Result<EcPoint> {
        if bytes.len() != COMPRESSED_POINT_LEN || (bytes[0] != 0x02 && bytes[0] != 0x03) {
            return Err(Error::InvalidPoint);
        }
        let encoded = EncodedPoint::from_bytes(bytes).map_err(|_| Error::InvalidPoint)?;
        Option::<AffinePoint>::from(AffinePoint::from_encoded_point(&encoded))
            .map(|p| EcPoint(ProjectivePoint::from(p)))
            .ok_or(Error::InvalidPoint)
    }
}

/// Fresh EC keypair as raw bytes: (secret scalar, compressed public point).
pub fn generate_ec_keypair(
    rng: &mut dyn CryptoRngCore,
) -> ([u8; SCALAR_LEN], [u8; COMPRESSED_POINT_LEN]) {
    let secret = EcScalar::random(rng);
    let public = EcPoint::base_mul(&secret)
        .encode()
        .expect("nonzero scalar times G is not the identity");
    (secret.to_bytes(), public)
}

/// Point-form ECDSA signature over `message` with the given secret scalar.
pub fn ecdsa_sign(secret: &[u8], message: &[u8]) -> Result<[u8; POINT_FORM_SIGNATURE_LEN]> {
    let sk = SigningKey::from_slice(secret)
        .map_err(|e| Error::BackendFailure(format!("ECDSA P-256 sign: {e}")))?;
    let (sig, recovery) = sk
        .sign_recoverable(message)
        .map_err(|e| Error::BackendFailure(format!("ECDSA P-256 sign: {e}")))?;
    let mut out = [0u8; POINT_FORM_SIGNATURE_LEN];
    out[0] = 0x02 | (recovery.to_byte() & 1);
    out[1..].copy_from_slice(&sig.to_bytes());
    Ok(out)
}

/// Verifies a point-form ECDSA signature; malformed input verifies false.
pub fn ecdsa_verify(public_key: &[u8], message: &[u8], signature: &[u8]) -> bool {
    if signature.len() != POINT_FORM_SIGNATURE_LEN
        || (signature[0] != 0x02 && signature[0] != 0x03)
    {
        return false;
    }
    let Ok(vk) = VerifyingKey::from_sec1_bytes(public_key) else {
        return false;
    };
    let Ok(sig) = Signature::from_slice(&signature[1..]) else {
        return false;
    };
    vk.verify(message, &sig).is_ok()
}
