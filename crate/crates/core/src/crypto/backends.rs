//! Standard backends for the five schemes.
//!
//! ECDSA signatures use the point-form encoding (compressed R point followed
//! by the s scalar, 65 bytes) so a signature counts as one curve point plus
//! one integer, matching the length accounting used throughout.

use rand_core::CryptoRngCore;

use crate::crypto::{ecc, KemBackend, KemKeyPair, SchemeId, SigKeyPair, SignatureBackend};
use crate::error::{Error, Result};

fn backend_err(scheme: SchemeId, what: &str, detail: impl std::fmt::Display) -> Error {
    Error::BackendFailure(format!("{scheme} {what}: {detail}"))
}

pub(crate) struct EcdsaP256Backend;

impl SignatureBackend for EcdsaP256Backend {
    fn scheme(&self) -> SchemeId {
        SchemeId::EcdsaP256
    }

    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<SigKeyPair> {
        let (secret, public) = ecc::generate_ec_keypair(rng);
        Ok(SigKeyPair {
            scheme: SchemeId::EcdsaP256,
            public_key: public.to_vec(),
            secret_key: secret.to_vec(),
        })
    }

    fn sign(
        &self,
        kp: &SigKeyPair,
        message: &[u8],
        _rng: &mut dyn CryptoRngCore,
    ) -> Result<Vec<u8>> {
        // RFC 6979 deterministic nonces; no rng needed.
        let sig = ecc::ecdsa_sign(&kp.secret_key, message)?;
        Ok(sig.to_vec())
    }

    fn verify(&self, public_key: &[u8], message: &[u8], signature: &[u8]) -> bool {
        ecc::ecdsa_verify(public_key, message, signature)
    }

    fn public_key_len(&self) -> usize {
        ecc::COMPRESSED_POINT_LEN
    }

    fn signature_len(&self) -> usize {
        ecc::POINT_FORM_SIGNATURE_LEN
    }
}

pub(crate) struct MlDsa44Backend;

impl SignatureBackend for MlDsa44Backend {
    fn scheme(&self) -> SchemeId {
        SchemeId::Dilithium2
    }

    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<SigKeyPair> {
        use fips204::ml_dsa_44;
        use fips204::traits::{KeyGen, SerDes};
        let (pk, sk) = ml_dsa_44::KG::try_keygen_with_rng(&mut &mut *rng)
            .map_err(|e| backend_err(self.scheme(), "keygen", e))?;
        Ok(SigKeyPair {
            scheme: self.scheme(),
            public_key: pk.into_bytes().to_vec(),
            secret_key: sk.into_bytes().to_vec(),
        })
    }

    fn sign(
        &self,
        kp: &SigKeyPair,
        message: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<Vec<u8>> {
        use fips204::ml_dsa_44;
        use fips204::traits::{SerDes, Signer};
        let bytes: [u8; ml_dsa_44::SK_LEN] = kp
            .secret_key
            .as_slice()
            .try_into()
            .map_err(|_| backend_err(self.scheme(), "sign", "bad secret key length"))?;
        let sk = ml_dsa_44::PrivateKey::try_from_bytes(bytes)
            .map_err(|e| backend_err(self.scheme(), "sign", e))?;
        let sig = sk
            .try_sign_with_rng(&mut &mut *rng, message, &[])
            .map_err(|e| backend_err(self.scheme(), "sign", e))?;
        Ok(sig.to_vec())
    }

    fn verify(&self, public_key: &[u8], message: &[u8], signature: &[u8]) -> bool {
        use fips204::ml_dsa_44;
        use fips204::traits::{SerDes, Verifier};
        let Ok(pk_bytes) = <[u8; ml_dsa_44::PK_LEN]>::try_from(public_key) else {
            return false;
        };
        let Ok(sig) = <[u8; ml_dsa_44::SIG_LEN]>::try_from(signature) else {
            return false;
        };
        let Ok(pk) = ml_dsa_44::PublicKey::try_from_bytes(pk_bytes) else {
            return false;
        };
        pk.verify(message, &sig, &[])
    }

    fn public_key_len(&self) -> usize {
        fips204::ml_dsa_44::PK_LEN
    }

    fn signature_len(&self) -> usize {
        fips204::ml_dsa_44::SIG_LEN
    }
}

pub(crate) struct FnDsa512Backend;

impl SignatureBackend for FnDsa512Backend {
    fn scheme(&self) -> SchemeId {
        SchemeId::Falcon512
    }

    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<SigKeyPair> {
        use fn_dsa::{KeyPairGenerator, KeyPairGeneratorStandard};
        let mut kg = KeyPairGeneratorStandard::default();
        let mut secret = vec![0u8; fn_dsa::sign_key_size(fn_dsa::FN_DSA_LOGN_512)];
        let mut public = vec![0u8; fn_dsa::vrfy_key_size(fn_dsa::FN_DSA_LOGN_512)];
        kg.keygen(fn_dsa::FN_DSA_LOGN_512, &mut &mut *rng, &mut secret, &mut public);
        Ok(SigKeyPair {
            scheme: self.scheme(),
            public_key: public,
            secret_key: secret,
        })
    }

    fn sign(
        &self,
        kp: &SigKeyPair,
        message: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<Vec<u8>> {
        use fn_dsa::{SigningKey, SigningKeyStandard};
        let mut sk = SigningKeyStandard::decode(&kp.secret_key)
            .ok_or_else(|| backend_err(self.scheme(), "sign", "bad secret key"))?;
        let mut sig = vec![0u8; fn_dsa::signature_size(fn_dsa::FN_DSA_LOGN_512)];
        sk.sign(
            &mut &mut *rng,
            &fn_dsa::DOMAIN_NONE,
            &fn_dsa::HASH_ID_RAW,
            message,
            &mut sig,
        );
        Ok(sig)
    }

    fn verify(&self, public_key: &[u8], message: &[u8], signature: &[u8]) -> bool {
        use fn_dsa::{VerifyingKey, VerifyingKeyStandard};
        let Some(pk) = VerifyingKeyStandard::decode(public_key) else {
            return false;
        };
        pk.verify(signature, &fn_dsa::DOMAIN_NONE, &fn_dsa::HASH_ID_RAW, message)
    }

    fn public_key_len(&self) -> usize {
        fn_dsa::vrfy_key_size(fn_dsa::FN_DSA_LOGN_512)
    }

    fn signature_len(&self) -> usize {
        fn_dsa::signature_size(fn_dsa::FN_DSA_LOGN_512)
    }
}

pub(crate) struct SlhDsaSha2128fBackend;

impl SignatureBackend for SlhDsaSha2128fBackend {
    fn scheme(&self) -> SchemeId {
        SchemeId::SphincsSha2_128f
    }

    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<SigKeyPair> {
        use fips205::slh_dsa_sha2_128f;
        use fips205::traits::{KeyGen, SerDes};
        let (pk, sk) = slh_dsa_sha2_128f::KG::try_keygen_with_rng(&mut &mut *rng)
            .map_err(|e| backend_err(self.scheme(), "keygen", e))?;
        Ok(SigKeyPair {
            scheme: self.scheme(),
            public_key: pk.into_bytes().to_vec(),
            secret_key: sk.into_bytes().to_vec(),
        })
    }

    fn sign(
        &self,
        kp: &SigKeyPair,
        message: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<Vec<u8>> {
        use fips205::slh_dsa_sha2_128f;
        use fips205::traits::{SerDes, Signer};
        let bytes: [u8; slh_dsa_sha2_128f::SK_LEN] = kp
            .secret_key
            .as_slice()
            .try_into()
            .map_err(|_| backend_err(self.scheme(), "sign", "bad secret key length"))?;
        let sk = slh_dsa_sha2_128f::PrivateKey::try_from_bytes(&bytes)
            .map_err(|e| backend_err(self.scheme(), "sign", e))?;
        let sig = sk
            .try_sign_with_rng(&mut &mut *rng, message, &[], true)
            .map_err(|e| backend_err(self.scheme(), "sign", e))?;
        Ok(sig.to_vec())
    }

    fn verify(&self, public_key: &[u8], message: &[u8], signature: &[u8]) -> bool {
        use fips205::slh_dsa_sha2_128f;
        use fips205::traits::{SerDes, Verifier};
        let Ok(pk_bytes) = <[u8; slh_dsa_sha2_128f::PK_LEN]>::try_from(public_key) else {
            return false;
        };
        let Ok(sig) = <[u8; slh_dsa_sha2_128f::SIG_LEN]>::try_from(signature) else {
            return false;
        };
        let Ok(pk) = slh_dsa_sha2_128f::PublicKey::try_from_bytes(&pk_bytes) else {
            return false;
        };
        pk.verify(message, &sig, &[])
    }

    fn public_key_len(&self) -> usize {
        fips205::slh_dsa_sha2_128f::PK_LEN
    }

    fn signature_len(&self) -> usize {
        fips205::slh_dsa_sha2_128f::SIG_LEN
    }
}

pub(crate) struct MlKem512Backend;

impl KemBackend for MlKem512Backend {
    fn scheme(&self) -> SchemeId {
        SchemeId::Kyber512
    }

    fn generate(&self, rng: &mut dyn CryptoRngCore) -> Result<KemKeyPair> {
        use fips203::ml_kem_512;
        use fips203::traits::{KeyGen, SerDes};
        let (ek, dk) = ml_kem_512::KG::try_keygen_with_rng(&mut &mut *rng)
            .map_err(|e| backend_err(self.scheme(), "keygen", e))?;
        Ok(KemKeyPair {
            scheme: self.scheme(),
            public_key: ek.into_bytes().to_vec(),
            secret_key: dk.into_bytes().to_vec(),
        })
    }

    fn encapsulate(
        &self,
        public_key: &[u8],
        rng: &mut dyn CryptoRngCore,
    ) -> Result<(Vec<u8>, Vec<u8>)> {
        use fips203::ml_kem_512;
        use fips203::traits::{Encaps, SerDes};
        let bytes: [u8; ml_kem_512::EK_LEN] = public_key
            .try_into()
            .map_err(|_| backend_err(self.scheme(), "encapsulate", "bad public key length"))?;
        let ek = ml_kem_512::EncapsKey::try_from_bytes(bytes)
            .map_err(|e| backend_err(self.scheme(), "encapsulate", e))?;
        let (ss, ct) = ek
            .try_encaps_with_rng(&mut &mut *rng)
            .map_err(|e| backend_err(self.scheme(), "encapsulate", e))?;
        Ok((ss.into_bytes().to_vec(), ct.into_bytes().to_vec()))
    }

    fn decapsulate(&self, kp: &KemKeyPair, ciphertext: &[u8]) -> Result<Vec<u8>> {
        use fips203::ml_kem_512;
        use fips203::traits::{Decaps, SerDes};
        let sk_bytes: [u8; ml_kem_512::DK_LEN] = kp
            .secret_key
            .as_slice()
            .try_into()
            .map_err(|_| backend_err(self.scheme(), "decapsulate", "bad secret key length"))?;
        let ct_bytes: [u8; ml_kem_512::CT_LEN] = ciphertext
            .try_into()
            .map_err(|_| Error::DecryptionFailure)?;
        let dk = ml_kem_512::DecapsKey::try_from_bytes(sk_bytes)
            .map_err(|e| backend_err(self.scheme(), "decapsulate", e))?;
        let ct = ml_kem_512::CipherText::try_from_bytes(ct_bytes)
            .map_err(|_| Error::DecryptionFailure)?;
        let ss = dk.try_decaps(&ct).map_err(|_| Error::DecryptionFailure)?;
        Ok(ss.into_bytes().to_vec())
    }

    fn public_key_len(&self) -> usize {
        fips203::ml_kem_512::EK_LEN
    }

    fn ciphertext_len(&self) -> usize {
        fips203::ml_kem_512::CT_LEN
    }
}
