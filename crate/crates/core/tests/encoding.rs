//! Encoding round trips, size formulas and decoder robustness.

use aee_core::algebra::{G2Element, D224_WIDTHS};
use aee_core::prelude::*;
use aee_core::wire::{
    decode_group_signature, encode_event_signature, encode_group_signature, event_signature_len, from_framed,
    from_hex, group_signature_len, to_framed, to_hex, DecodeError,
};
use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_signature(rng: &mut ChaCha20Rng) -> GroupSignature {
    let mut p = || G1Element::random(rng).unwrap();
    let (d, b, t) = (p(), p(), p());
    let mut s = || Scalar::random(rng).unwrap();
    GroupSignature {
        d,
        b,
        t,
        c: s(),
        s_x: s(),
        s_y: s(),
        s_alpha: s(),
        s_delta: s(),
    }
}

#[test]
fn group_signatures_round_trip_in_both_modes() {
    let mut rng = ChaCha20Rng::seed_from_u64(200);
    let widths = BilinearSuite::bls12_381().widths;
    for _ in 0..1000 {
        let sigma = random_signature(&mut rng);
        for mode in [Mode::Full, Mode::Compressed] {
            let bytes = encode_group_signature(&sigma, mode);
            assert_eq!(bytes.len(), group_signature_len(&widths, mode));
            assert_eq!(decode_group_signature(&bytes).unwrap(), sigma);
        }
        assert_eq!(from_framed::<GroupSignature>(&to_framed(&sigma)).unwrap(), sigma);
    }
}

#[test]
fn d224_reference_sizes() {
    assert_eq!(group_signature_len(&D224_WIDTHS, Mode::Full), 308);
    assert_eq!(group_signature_len(&D224_WIDTHS, Mode::Compressed), 227);
    assert_eq!(event_signature_len(&D224_WIDTHS), 56);
}

#[test]
fn keys_and_protocol_messages_round_trip() {
    let mut rng = ChaCha20Rng::seed_from_u64(201);
    let (gpk, mik, mok) = gset(&mut rng, &BilinearSuite::bls12_381()).unwrap();
    let keys = ukg(&mut rng, &gpk).unwrap();
    let (req, state) = join_start(&gpk, &keys, &mut rng).unwrap();
    let mut reg = RegistrationTable::new();
    let resp = issue(&gpk, &mik, &mut reg, &MemberId::from("v"), &req, &mut rng).unwrap();
    let gsk = state.finish(&gpk, &keys, &resp).unwrap();

    assert_eq!(from_hex::<GroupPublicKey>(&to_hex(&gpk)).unwrap(), gpk);
    assert_eq!(from_hex::<MasterIssuingKey>(&to_hex(&mik)).unwrap(), mik);
    assert_eq!(from_hex::<MasterOpeningKey>(&to_hex(&mok)).unwrap(), mok);
    assert_eq!(from_hex::<UserKeyPair>(&to_hex(&keys)).unwrap(), keys);
    assert_eq!(from_hex::<JoinRequest>(&to_hex(&req)).unwrap(), req);
    assert_eq!(from_hex::<IssueResponse>(&to_hex(&resp)).unwrap(), resp);
    assert_eq!(from_hex::<GroupSigningKey>(&to_hex(&gsk)).unwrap(), gsk);
    assert_eq!(from_hex::<G1Element>(&to_hex(&keys.upk)).unwrap(), keys.upk);

    let sig = EventSignature {
        s_e: Scalar::random(&mut rng).unwrap(),
        c_e: Scalar::random(&mut rng).unwrap(),
    };
    assert_eq!(encode_event_signature(&sig).len(), 64);
    assert_eq!(from_framed::<EventSignature>(&to_framed(&sig)).unwrap(), sig);

    let pi = TracingProof {
        k: G1Element::random(&mut rng).unwrap(),
        s: Scalar::one(),
        c: Scalar::zero(),
        x: Scalar::from_u64(77),
    };
    assert_eq!(from_framed::<TracingProof>(&to_framed(&pi)).unwrap(), pi);
}

#[test]
fn group_key_with_identity_w_is_rejected_by_decoder_or_validation() {
    let mut rng = ChaCha20Rng::seed_from_u64(202);
    let (mut gpk, _, _) = gset(&mut rng, &BilinearSuite::bls12_381()).unwrap();
    gpk.w = G2Element::identity();
    let decoded = from_framed::<GroupPublicKey>(&to_framed(&gpk));
    assert!(decoded.map(|k| k.validate().is_err()).unwrap_or(true));
}

#[test]
fn random_bytes_never_panic() {
    let mut rng = ChaCha20Rng::seed_from_u64(203);
    let mut accepted = 0usize;
    for i in 0..100_000 {
        let len = if i % 2 == 0 { 304 } else { 448 };
        let mut bytes = vec![0u8; len];
        rng.fill_bytes(&mut bytes);
        if i % 4 < 2 {
            // Give the point flags a plausible shape so decoding gets past the header.
            let w = if len == 304 { 48 } else { 96 };
            for k in 0..3 {
                bytes[k * w] = (bytes[k * w] & 0x1f) | if len == 304 { 0x80 } else { 0x00 };
            }
        }
        let first = decode_group_signature(&bytes);
        assert_eq!(first, decode_group_signature(&bytes));
        accepted += usize::from(first.is_ok());
    }
    // Random x-coordinates land on the curve about half the time but almost
    // never in the prime-order subgroup.
    assert_eq!(accepted, 0);
}

#[test]
fn truncated_and_oversized_inputs_are_rejected() {
    let mut rng = ChaCha20Rng::seed_from_u64(204);
    let bytes = encode_group_signature(&random_signature(&mut rng), Mode::Compressed);
    for cut in [0, 1, 47, 303] {
        assert!(matches!(decode_group_signature(&bytes[..cut]), Err(DecodeError::Length { .. })));
    }
    let mut long = bytes.clone();
    long.push(rng.gen());
    assert!(decode_group_signature(&long).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn event_signature_round_trip(a in any::<[u8; 31]>(), b in any::<[u8; 31]>()) {
        let mut sa = [0u8; 32];
        sa[1..].copy_from_slice(&a);
        let mut sb = [0u8; 32];
        sb[1..].copy_from_slice(&b);
        let sig = EventSignature {
            s_e: Scalar::from_bytes(&sa).unwrap(),
            c_e: Scalar::from_bytes(&sb).unwrap(),
        };
        let bytes = encode_event_signature(&sig);
        prop_assert_eq!(bytes.len(), 64);
        prop_assert_eq!(aee_core::wire::decode_event_signature(&bytes).unwrap(), sig);
    }

    #[test]
    fn scalar_bytes_round_trip_or_reject(bytes in any::<[u8; 32]>()) {
        match Scalar::from_bytes(&bytes) {
            Some(s) => prop_assert_eq!(s.to_bytes(), bytes),
            None => prop_assert!(bytes[0] >= 0x73),
        }
    }
}
