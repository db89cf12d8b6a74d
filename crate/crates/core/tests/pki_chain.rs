//! Chain-construction and tamper-resistance properties across scheme
//! pairings.

mod common;

use common::seeded_rng;

use scms_core::cert::{
    decode_certificate, encode_certificate, issue_certificate, verify_certificate, CertKind,
    TbsCertificate, SELF_SIGNED_ISSUER,
};
use scms_core::pki::{build_hierarchy, verify_chain, CertificateChainFile, HierarchyConfig};
use scms_core::crypto::{Provider, SchemeId};

const PQC_SCHEMES: [SchemeId; 3] = [
    SchemeId::Dilithium2,
    SchemeId::Falcon512,
    SchemeId::SphincsSha2_128f,
];

#[test]
fn all_nine_root_times_ica_pairings_verify() {
    let provider = Provider::standard();
    let mut rng = seeded_rng(0x919);
    for root in PQC_SCHEMES {
        for ica in PQC_SCHEMES {
            let mut config = HierarchyConfig::uniform(SchemeId::Falcon512);
            config.root_scheme = root;
            config.ica_scheme = ica;
            config.elector_scheme = root;
            let hierarchy = build_hierarchy(&provider, &config, &mut rng).unwrap();
            assert!(
                verify_chain(&provider, &hierarchy.ccf),
                "root {root} / ica {ica}"
            );
            for cert in &hierarchy.ccf.certs {
                assert_eq!(cert.tbs.kind, CertKind::PurePqc);
            }
        }
    }
}

#[test]
fn issue_verify_holds_for_every_defined_scheme_pairing() {
    // Subject key scheme x issuer scheme. A PQC subject key under an ECC
    // issuer signature has no defined certificate kind and must be rejected
    // at construction; the other 13 pairings issue and verify.
    let provider = Provider::standard();
    let mut rng = seeded_rng(0x44);
    for issuer_scheme in SchemeId::SIGNATURE_SCHEMES {
        let issuer_kp = provider
            .generate_signing_keypair(issuer_scheme, &mut rng)
            .unwrap();
        let issuer_tbs = TbsCertificate::new(
            SELF_SIGNED_ISSUER,
            1_700_000_000,
            3650 * 86_400,
            0x20,
            issuer_scheme,
            issuer_scheme,
            issuer_kp.public_key.clone(),
        )
        .unwrap();
        let issuer_cert =
            issue_certificate(&provider, &issuer_kp, SELF_SIGNED_ISSUER, issuer_tbs, &mut rng)
                .unwrap();

        for subject_scheme in SchemeId::SIGNATURE_SCHEMES {
            let subject_kp = provider
                .generate_signing_keypair(subject_scheme, &mut rng)
                .unwrap();
            let tbs = TbsCertificate::new(
                issuer_cert.digest(),
                1_700_000_000,
                365 * 86_400,
                0x20,
                subject_scheme,
                issuer_scheme,
                subject_kp.public_key.clone(),
            );
            if subject_scheme.is_post_quantum() && !issuer_scheme.is_post_quantum() {
                assert!(tbs.is_err(), "{subject_scheme} under {issuer_scheme}");
                continue;
            }
            let cert = issue_certificate(
                &provider,
                &issuer_kp,
                issuer_cert.digest(),
                tbs.unwrap(),
                &mut rng,
            )
            .unwrap();
            assert!(
                verify_certificate(&provider, &cert, &issuer_cert),
                "{subject_scheme} under {issuer_scheme}"
            );
        }
    }
}

#[test]
fn single_byte_mutations_break_the_chain() {
    let provider = Provider::standard();
    let mut rng = seeded_rng(0x7A2);
    let hierarchy =
        build_hierarchy(&provider, &HierarchyConfig::default(), &mut rng).unwrap();
    let baseline = hierarchy.ccf.to_bytes().unwrap();

    use rand_core::RngCore;
    for trial in 0..25 {
        let mut ccf = CertificateChainFile::from_bytes(&baseline).unwrap();
        let cert_idx = (rng.next_u32() as usize) % ccf.certs.len();
        let mut bytes = encode_certificate(&ccf.certs[cert_idx]);
        let pos = (rng.next_u32() as usize) % bytes.len();
        let mask = [0x01, 0x10, 0x80][(rng.next_u32() % 3) as usize];
        bytes[pos] ^= mask;
        // Mutating scheme/kind/length bytes can make the encoding
        // undecodable, which is an equally hard failure.
        if let Ok(mutated) = decode_certificate(&bytes) {
            ccf.certs[cert_idx] = mutated;
            assert!(
                !verify_chain(&provider, &ccf),
                "trial {trial}: cert {cert_idx} byte {pos}"
            );
        }
    }
}

#[test]
fn empty_and_reordered_chains_fail() {
    let provider = Provider::standard();
    let mut rng = seeded_rng(0x0DD);
    let hierarchy =
        build_hierarchy(&provider, &HierarchyConfig::default(), &mut rng).unwrap();

    let mut empty = hierarchy.ccf.clone();
    empty.certs.clear();
    assert!(!verify_chain(&provider, &empty));

    // Root not first: the chain no longer anchors.
    let mut reordered = hierarchy.ccf.clone();
    reordered.certs.swap(0, 1);
    assert!(!verify_chain(&provider, &reordered));
}

#[test]
fn unknown_root_digest_fails() {
    let provider = Provider::standard();
    let mut rng = seeded_rng(0x0DE);
    let hierarchy =
        build_hierarchy(&provider, &HierarchyConfig::default(), &mut rng).unwrap();
    let mut ccf = hierarchy.ccf.clone();
    ccf.ctl.root_digests = vec![[0xEE; 8]];
    // The digests are inside the elector-signed body, so this also breaks
    // the quorum.
    assert!(!verify_chain(&provider, &ccf));
}
