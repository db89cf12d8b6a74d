//! End-to-end butterfly provisioning properties: algebraic identities
//! against the independent curve oracle, protocol correctness, corruption
//! detection, determinism, and the transcript anonymity checks.

mod common;

use common::ec_oracle::Curve;
use common::seeded_rng;

use num_bigint::BigUint;
use scms_core::butterfly::{
    aca_issue, check_unlinkability, ee_build_ra_request, ee_cocoon_private, ee_finalize,
    ee_init_butterfly, ra_expand_cocoon, run_provisioning, DownloadArchive, RaAcaRequest,
    RaOptions, TbsTemplate,
};
use scms_core::cert::CertKind;
use scms_core::crypto::{f1_expand, EcPoint, EcScalar, ExpansionKey, Provider, SchemeId};
use scms_core::pki::{
    build_hierarchy, ee_eca_cert_request, CanonicalIdentity, Entity, EntityRole, Hierarchy,
    HierarchyConfig,
};
use scms_core::Error;

/// Builds a hierarchy and an enrolled end entity on the given CA scheme.
fn setup(provider: &Provider, scheme: SchemeId, seed: u64) -> (Hierarchy, Entity) {
    let mut rng = seeded_rng(seed);
    let mut hierarchy =
        build_hierarchy(provider, &HierarchyConfig::uniform(scheme), &mut rng).unwrap();
    let canonical = CanonicalIdentity {
        canonical_id: b"obu-test".to_vec(),
        keypair: provider
            .generate_signing_keypair(scheme, &mut rng)
            .unwrap(),
    };
    hierarchy.eca.register_device(
        canonical.canonical_id.clone(),
        canonical.keypair.scheme,
        canonical.keypair.public_key.clone(),
    );
    let enrollment_kp = provider.generate_signing_keypair(scheme, &mut rng).unwrap();
    let request = ee_eca_cert_request(
        provider,
        &canonical,
        &enrollment_kp,
        0x20,
        1_700_000_000,
        2 * 365 * 86_400,
        &mut rng,
    )
    .unwrap();
    let response = hierarchy.eca.process_request(provider, &request, &mut rng);
    let cert = response.status.expect("enrollment granted");
    let mut ee = Entity::new(EntityRole::Ee, enrollment_kp, cert);
    for chain_cert in &hierarchy.ccf.certs {
        ee.store.insert(chain_cert.clone());
    }
    (hierarchy, ee)
}

#[test]
fn cocoon_private_matches_bigint_oracle_on_1000_inputs() {
    let curve = Curve::p256();
    let mut rng = seeded_rng(0x0C0);
    for i in 0..1000u64 {
        let a = EcScalar::random(&mut rng);
        let ck = ExpansionKey::random(&mut rng);
        let ours = ee_cocoon_private(&a, &ck, i).to_bytes();
        let f1 = f1_expand(&ck, i).to_bytes();
        let oracle = curve.scalar_add_bytes(&a.to_bytes(), &f1);
        assert_eq!(ours, oracle, "index {i}");
    }
}

#[test]
fn cocoon_expansion_matches_oracle_for_known_secrets() {
    // With a known caterpillar secret: B_i = (a + f1(ck, i) mod n) · G,
    // both sides computed by the independent oracle.
    let curve = Curve::p256();
    let mut rng = seeded_rng(0x0C1);
    for i in 0..100u64 {
        let a = EcScalar::random(&mut rng);
        let ck = ExpansionKey::random(&mut rng);
        let cocoon = ra_expand_cocoon(&ck, &EcPoint::base_mul(&a), i);
        let sum = curve.scalar_add_bytes(&a.to_bytes(), &f1_expand(&ck, i).to_bytes());
        let oracle_point = curve.base_mul_bytes(&sum);
        assert_eq!(cocoon.encode().unwrap(), curve.compress(&oracle_point));
    }
}

#[test]
fn butterfly_algebraic_identity_holds_against_oracle() {
    // (a + f1 + r)·G = A + f1·G + R, left side by the implementation,
    // right side entirely by the oracle.
    let curve = Curve::p256();
    let mut rng = seeded_rng(0x1DE);
    for i in 0..250u64 {
        let a = EcScalar::random(&mut rng);
        let r = EcScalar::random(&mut rng);
        let ck = ExpansionKey::random(&mut rng);
        let f1 = f1_expand(&ck, i);

        let private = a.add_mod_n(f1).add_mod_n(r);
        if private.is_zero() {
            continue;
        }
        let ours = EcPoint::base_mul(&private).encode().unwrap();

        let g = curve.generator();
        let lhs = curve.add(
            &curve.add(
                &curve.scalar_mul(&BigUint::from_bytes_be(&a.to_bytes()), &g),
                &curve.scalar_mul(&BigUint::from_bytes_be(&f1.to_bytes()), &g),
            ),
            &curve.scalar_mul(&BigUint::from_bytes_be(&r.to_bytes()), &g),
        );
        assert_eq!(ours, curve.compress(&lhs), "tuple {i}");
    }
}

#[test]
fn honest_batch_of_100_finalizes_with_consistent_keys() {
    let provider = Provider::standard();
    let (mut hierarchy, mut ee) = setup(&provider, SchemeId::Falcon512, 0xBA7C4);
    let mut rng = seeded_rng(0x100);
    let run = run_provisioning(
        &provider,
        &mut ee,
        &mut hierarchy.ra,
        &mut hierarchy.aca,
        100,
        &RaOptions::default(),
        &mut rng,
    )
    .unwrap();
    assert_eq!(run.credentials.len(), 100);
    let mut seen_keys = std::collections::HashSet::new();
    let mut seen_certs = std::collections::HashSet::new();
    for (private, cert) in &run.credentials {
        assert_eq!(cert.tbs.kind, CertKind::Hybrid);
        assert_eq!(
            EcPoint::base_mul(private).encode().unwrap().to_vec(),
            cert.tbs.vki_key
        );
        assert!(seen_keys.insert(private.to_bytes()));
        assert!(seen_certs.insert(cert.digest()));
    }
}

#[test]
fn repeat_issuance_for_one_cocoon_uses_fresh_randomizers() {
    let provider = Provider::standard();
    let (mut hierarchy, _) = setup(&provider, SchemeId::Falcon512, 0xACA);
    let mut rng = seeded_rng(0x101);
    let state = ee_init_butterfly(&provider, 1, &mut rng).unwrap();
    let cocoon = ra_expand_cocoon(&state.ck, &state.caterpillar_public, 0);
    let req = RaAcaRequest {
        index: 0,
        cocoon_public_key: cocoon.encode().unwrap(),
        kem_public_key: state.kem_pairs[0].public_key.clone(),
        template: TbsTemplate {
            psid: 0x20,
            validity_start: 1_700_000_000,
            validity_duration: 604_800,
        },
        leaked_caterpillar_public: None,
    };
    let mut vkis = std::collections::HashSet::new();
    for _ in 0..100 {
        let resp = aca_issue(&mut hierarchy.aca, &provider, &req, &mut rng).unwrap();
        assert!(vkis.insert(resp.certificate.tbs.vki_key.clone()));
    }
}

#[test]
fn substituted_randomizer_point_is_detected_as_key_mismatch() {
    let provider = Provider::standard();
    let (mut hierarchy, _) = setup(&provider, SchemeId::Falcon512, 0xBAD);
    let mut rng = seeded_rng(0x102);
    let state = ee_init_butterfly(&provider, 1, &mut rng).unwrap();
    let cocoon = ra_expand_cocoon(&state.ck, &state.caterpillar_public, 0);
    let req = RaAcaRequest {
        index: 0,
        cocoon_public_key: cocoon.encode().unwrap(),
        kem_public_key: state.kem_pairs[0].public_key.clone(),
        template: TbsTemplate {
            psid: 0x20,
            validity_start: 1_700_000_000,
            validity_duration: 604_800,
        },
        leaked_caterpillar_public: None,
    };
    let honest = aca_issue(&mut hierarchy.aca, &provider, &req, &mut rng).unwrap();

    // A malicious ACA certifies a key with a different randomizer but
    // encrypts the original r: re-issue and splice the old ciphertext in.
    let mut malicious = aca_issue(&mut hierarchy.aca, &provider, &req, &mut rng).unwrap();
    malicious.randomizer_ciphertext = honest.randomizer_ciphertext.clone();
    malicious.aca_signature = provider
        .sign(&hierarchy.aca.keypair, &malicious.signed_bytes(), &mut rng)
        .unwrap();
    let err = ee_finalize(
        &provider,
        &state,
        0,
        &malicious,
        &hierarchy.aca.certificate,
    )
    .unwrap_err();
    assert!(matches!(err, Error::KeyMismatch));

    // The honest response still finalizes.
    assert!(ee_finalize(&provider, &state, 0, &honest, &hierarchy.aca.certificate).is_ok());
}

#[test]
fn corrupted_vki_bit_is_detected() {
    let provider = Provider::standard();
    let (mut hierarchy, _) = setup(&provider, SchemeId::Falcon512, 0xC0B);
    let mut rng = seeded_rng(0x103);
    let state = ee_init_butterfly(&provider, 1, &mut rng).unwrap();
    let cocoon = ra_expand_cocoon(&state.ck, &state.caterpillar_public, 0);
    let req = RaAcaRequest {
        index: 0,
        cocoon_public_key: cocoon.encode().unwrap(),
        kem_public_key: state.kem_pairs[0].public_key.clone(),
        template: TbsTemplate {
            psid: 0x20,
            validity_start: 1_700_000_000,
            validity_duration: 604_800,
        },
        leaked_caterpillar_public: None,
    };
    let mut resp = aca_issue(&mut hierarchy.aca, &provider, &req, &mut rng).unwrap();
    // Corrupt one bit of the certified key's x coordinate and re-sign so the
    // failure isolates to the key consistency check.
    resp.certificate.tbs.vki_key[13] ^= 0x04;
    resp.certificate = scms_core::cert::issue_certificate(
        &provider,
        &hierarchy.aca.keypair,
        hierarchy.aca.certificate.digest(),
        resp.certificate.tbs.clone(),
        &mut rng,
    )
    .unwrap();
    resp.aca_signature = provider
        .sign(&hierarchy.aca.keypair, &resp.signed_bytes(), &mut rng)
        .unwrap();
    let err = ee_finalize(&provider, &state, 0, &resp, &hierarchy.aca.certificate).unwrap_err();
    // Either the mutated x no longer decodes to a point, or the derived key
    // no longer matches.
    assert!(matches!(err, Error::KeyMismatch | Error::InvalidPoint));
}

#[test]
fn tampered_archive_signature_is_rejected() {
    let provider = Provider::standard();
    let (mut hierarchy, ee) = setup(&provider, SchemeId::Falcon512, 0xA5C);
    let mut rng = seeded_rng(0x104);
    let state = ee_init_butterfly(&provider, 1, &mut rng).unwrap();
    let template = TbsTemplate {
        psid: 0x20,
        validity_start: 1_700_000_000,
        validity_duration: 604_800,
    };
    let request = ee_build_ra_request(&provider, &state, &ee, template, &mut rng).unwrap();
    let (_, archive) = scms_core::butterfly::ra_process_request(
        &provider,
        &mut hierarchy.ra,
        &mut hierarchy.aca,
        &request,
        &RaOptions::default(),
        &mut rng,
    )
    .unwrap();
    let mut bytes = archive.to_bytes().unwrap();
    let pos = bytes.len() - 3;
    bytes[pos] ^= 0x10;
    let tampered = DownloadArchive::from_bytes(&bytes).unwrap();
    let record = &tampered.records[0];
    let resp = scms_core::butterfly::AcaResponse {
        certificate: record.certificate.clone(),
        randomizer_ciphertext: record.randomizer_ciphertext.clone(),
        aca_signature: record.aca_signature.clone(),
    };
    assert!(matches!(
        ee_finalize(&provider, &state, 0, &resp, &hierarchy.aca.certificate),
        Err(Error::SignatureInvalid)
    ));
    let _ = ee; // the end entity's state is untouched by the failed download
}

#[test]
fn seeded_rerun_produces_identical_transcripts() {
    let provider = Provider::standard();
    let mut snapshots = Vec::new();
    for _ in 0..2 {
        let (mut hierarchy, mut ee) = setup(&provider, SchemeId::Falcon512, 0xD37);
        let mut rng = seeded_rng(0x105);
        let run = run_provisioning(
            &provider,
            &mut ee,
            &mut hierarchy.ra,
            &mut hierarchy.aca,
            5,
            &RaOptions::default(),
            &mut rng,
        )
        .unwrap();
        let render = |t: &scms_core::transcript::Transcript| {
            t.entries()
                .iter()
                .map(|e| format!("{:?}|{}|{}", e.direction, e.field, hex::encode(&e.value)))
                .collect::<Vec<_>>()
                .join("\n")
        };
        snapshots.push((
            render(&ee.transcript),
            render(&hierarchy.ra.transcript),
            render(&hierarchy.aca.transcript),
            run.credentials
                .iter()
                .map(|(_, c)| hex::encode(c.digest()))
                .collect::<Vec<_>>(),
        ));
    }
    assert_eq!(snapshots[0], snapshots[1]);
}

#[test]
fn honest_runs_pass_unlinkability_and_leak_is_caught() {
    let provider = Provider::standard();

    for seed in 0..5u64 {
        let (mut hierarchy, mut ee) = setup(&provider, SchemeId::Falcon512, 0x200 + seed);
        let mut rng = seeded_rng(0x300 + seed);
        let run = run_provisioning(
            &provider,
            &mut ee,
            &mut hierarchy.ra,
            &mut hierarchy.aca,
            4,
            &RaOptions::default(),
            &mut rng,
        )
        .unwrap();
        let report = check_unlinkability(
            &hierarchy.ra.transcript,
            &hierarchy.aca.transcript,
            &run.sensitive,
        );
        assert!(report.all_hold(), "seed {seed}: {report:?}");
    }

    // Negative control: deliberately leak the caterpillar key to the ACA.
    let (mut hierarchy, mut ee) = setup(&provider, SchemeId::Falcon512, 0x400);
    let mut rng = seeded_rng(0x401);
    let run = run_provisioning(
        &provider,
        &mut ee,
        &mut hierarchy.ra,
        &mut hierarchy.aca,
        4,
        &RaOptions {
            leak_caterpillar_to_aca: true,
        },
        &mut rng,
    )
    .unwrap();
    let report = check_unlinkability(
        &hierarchy.ra.transcript,
        &hierarchy.aca.transcript,
        &run.sensitive,
    );
    assert!(!report.aca_never_sees_caterpillar);
    assert!(report.ra_never_sees_randomizer);
}

#[test]
fn butterfly_public_keys_pairwise_distinct_over_1000_indices() {
    let provider = Provider::standard();
    let (mut hierarchy, mut ee) = setup(&provider, SchemeId::Falcon512, 0x1000);
    let mut rng = seeded_rng(0x1001);
    let run = run_provisioning(
        &provider,
        &mut ee,
        &mut hierarchy.ra,
        &mut hierarchy.aca,
        1000,
        &RaOptions::default(),
        &mut rng,
    )
    .unwrap();
    assert_eq!(run.credentials.len(), 1000);
    let distinct: std::collections::HashSet<_> =
        run.sensitive.butterfly_publics.iter().collect();
    assert_eq!(distinct.len(), 1000);
}

#[test]
fn archive_encoding_round_trips() {
    let provider = Provider::standard();
    let (mut hierarchy, ee) = setup(&provider, SchemeId::Dilithium2, 0xA2C);
    let mut rng = seeded_rng(0x500);
    let state = ee_init_butterfly(&provider, 3, &mut rng).unwrap();
    let template = TbsTemplate {
        psid: 0x20,
        validity_start: 1_700_000_000,
        validity_duration: 604_800,
    };
    let request = ee_build_ra_request(&provider, &state, &ee, template, &mut rng).unwrap();
    let (ack, archive) = scms_core::butterfly::ra_process_request(
        &provider,
        &mut hierarchy.ra,
        &mut hierarchy.aca,
        &request,
        &RaOptions::default(),
        &mut rng,
    )
    .unwrap();
    let bytes = archive.to_bytes().unwrap();
    assert_eq!(scms_core::crypto::hashed_id8(&bytes), ack.archive_digest);
    let decoded = DownloadArchive::from_bytes(&bytes).unwrap();
    assert_eq!(decoded.records.len(), 3);
    assert_eq!(decoded.to_bytes().unwrap(), bytes);
    let _ = ee.transcript;
}
