//! Property tests for the algebraic identities the scheme rests on.

use mpkc::{
    b_vector, c_sum_naive, decrypt, decrypt_message, derive_decryption_key,
    derive_encryption_key, double_sum, encode_text, encrypt, encrypt_message, keygen,
    power_sum_fast, wire, Error, FibPower, PowerSumSpec, ResidueMatrix, SessionSecret,
    SumLayer, SymbolCodec,
};
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(29u64), Just(47), Just(101)]
}

fn order() -> impl Strategy<Value = usize> {
    2usize..=4
}

fn fib(order: usize, exp: i64, p: u64) -> ResidueMatrix {
    FibPower::new(order, exp, p).unwrap().into_matrix()
}

proptest! {
    #[test]
    fn formula_equals_repeated_multiplication(
        n in order(),
        p in small_prime(),
        k in -10i64..=25,
    ) {
        let base = FibPower::base(n, p).unwrap().into_matrix();
        prop_assert_eq!(fib(n, k, p), base.pow(k).unwrap());
    }

    #[test]
    fn exponents_add(
        n in order(),
        p in small_prime(),
        a in -10i64..=25,
        b in -10i64..=25,
    ) {
        let sum = fib(n, a, p).mul(&fib(n, b, p)).unwrap();
        prop_assert_eq!(sum, fib(n, a + b, p));
    }

    #[test]
    fn powers_commute(
        n in order(),
        p in small_prime(),
        a in -10i64..=25,
        b in -10i64..=25,
    ) {
        let fa = fib(n, a, p);
        let fb = fib(n, b, p);
        prop_assert_eq!(fa.mul(&fb).unwrap(), fb.mul(&fa).unwrap());
    }

    #[test]
    fn determinant_is_a_unit_sign(
        n in order(),
        p in small_prime(),
        k in -10i64..=25,
    ) {
        let det = fib(n, k, p).det();
        prop_assert!(det == 1 || det == p - 1);
    }

    #[test]
    fn inverse_roundtrip(
        n in order(),
        p in small_prime(),
        k in -10i64..=25,
    ) {
        // powers of the base matrix are always invertible
        let a = fib(n, k, p);
        let inv = a.inv().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_identity());
        prop_assert!(inv.mul(&a).unwrap().is_identity());
    }

    #[test]
    fn fast_power_sum_matches_literal_sum(
        n in order(),
        p in small_prime(),
        k1 in 0i64..=30,
        k2 in 0i64..=30,
        k3 in 0i64..=30,
        len in 1u64..=40,
    ) {
        let naive = c_sum_naive(&fib(n, k1, p), &fib(n, k2, p), &fib(n, k3, p), len).unwrap();
        let spec = PowerSumSpec::new(n, p, k1, k2, k3, len).unwrap();
        prop_assert_eq!(power_sum_fast(&spec).unwrap(), naive);
    }

    #[test]
    fn nested_sums_are_order_independent(
        n in order(),
        p in small_prime(),
        eg in 0i64..=20,
        eh in 0i64..=20,
        em in 0i64..=20,
        en in 0i64..=20,
        seed_exp in 0i64..=20,
        outer_len in 1u64..=6,
        inner_len in 1u64..=6,
    ) {
        let (g, h) = (fib(n, eg, p), fib(n, eh, p));
        let (m, nn) = (fib(n, em, p), fib(n, en, p));
        let seed = fib(n, seed_exp, p);
        let one = double_sum(
            SumLayer::new(&g, &h, outer_len),
            SumLayer::new(&m, &nn, inner_len),
            &seed,
        )
        .unwrap();
        let other = double_sum(
            SumLayer::new(&m, &nn, inner_len),
            SumLayer::new(&g, &h, outer_len),
            &seed,
        )
        .unwrap();
        prop_assert_eq!(one, other);
    }

    #[test]
    fn both_parties_agree_on_the_key(
        n in order(),
        p in small_prime(),
        sum_len in 1u64..=6,
        session_len in 1u64..=6,
        eg in 1i64..=20,
        eh in 1i64..=20,
        ek in 1i64..=20,
        em in 1i64..=20,
        en in 1i64..=20,
    ) {
        let (public, secret) = keygen(n, p, sum_len, eg, eh, ek).unwrap();
        let session = SessionSecret::new(
            session_len,
            FibPower::new(n, em, p).unwrap(),
            FibPower::new(n, en, p).unwrap(),
        )
        .unwrap();
        match derive_encryption_key(&public, &session) {
            Ok((bob_key, wire_matrix)) => {
                let (alice_key, decryption_key) =
                    derive_decryption_key(&secret, &public, &wire_matrix).unwrap();
                prop_assert_eq!(&bob_key, &alice_key);
                prop_assert!(bob_key.mul(&decryption_key).unwrap().is_identity());
            }
            Err(Error::DegenerateKey { .. }) => {} // legal outcome, caller retries
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn cipher_blocks_roundtrip(
        p in small_prime(),
        exp in 1i64..=30,
        block in proptest::collection::vec(0u64..1000, 3),
    ) {
        let e_k = fib(3, exp, p);
        let d_k = e_k.inv().unwrap();
        let block: Vec<u64> = block.into_iter().map(|v| v % p).collect();
        let cipher = encrypt(&e_k, &[block.clone()]).unwrap();
        let plain = decrypt(&d_k, &e_k, &cipher).unwrap();
        prop_assert_eq!(plain, vec![block]);
    }

    #[test]
    fn zero_block_encrypts_to_the_offset(p in small_prime(), exp in 1i64..=30) {
        // the affine offset is exactly what distinguishes this cipher from
        // a plain multiplicative one
        let e_k = fib(3, exp, p);
        let cipher = encrypt(&e_k, &[vec![0, 0, 0]]).unwrap();
        prop_assert_eq!(cipher, vec![b_vector(&e_k)]);
    }

    #[test]
    fn text_roundtrips_end_to_end(
        text in "[A-Z0-9><?@!#$%&*+]{0,40}",
        n in order(),
        session_len in 1u64..=5,
        em in 1i64..=25,
        en in 1i64..=25,
    ) {
        let (public, secret) = keygen(n, 47, 4, 9, 13, 2).unwrap();
        let session = SessionSecret::new(
            session_len,
            FibPower::new(n, em, 47).unwrap(),
            FibPower::new(n, en, 47).unwrap(),
        )
        .unwrap();
        match encrypt_message(&public, &session, &text) {
            Ok(message) => {
                let recovered = decrypt_message(&secret, &public, &message).unwrap();
                prop_assert_eq!(recovered, text);
            }
            Err(Error::DegenerateKey { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn codec_blocks_roundtrip(text in "[A-Z0-9><?@!#$%&*+]{0,30}", block_len in 2usize..=5) {
        let codec = SymbolCodec;
        let (blocks, pad) = encode_text(&text, &codec, block_len).unwrap();
        prop_assert!(pad < block_len);
        prop_assert_eq!(mpkc::decode_blocks(&blocks, pad, &codec).unwrap(), text);
    }

    #[test]
    fn key_documents_roundtrip(
        n in order(),
        p in small_prime(),
        sum_len in 1u64..=8,
        eg in 1i64..=30,
        eh in 1i64..=30,
        ek in 1i64..=30,
    ) {
        let (public, secret) = keygen(n, p, sum_len, eg, eh, ek).unwrap();
        let parsed = wire::parse_public_key(&wire::serialize_public_key(&public)).unwrap();
        prop_assert_eq!(parsed, public);
        let parsed = wire::parse_secret_key(&wire::serialize_secret_key(&secret)).unwrap();
        prop_assert_eq!(parsed, secret);
    }

    #[test]
    fn message_documents_roundtrip(
        text in "[A-Z0-9><?@!#$%&*+]{0,24}",
        em in 1i64..=25,
        en in 1i64..=25,
    ) {
        let (public, _) = keygen(3, 47, 4, 9, 13, 2).unwrap();
        let session = SessionSecret::new(
            2,
            FibPower::new(3, em, 47).unwrap(),
            FibPower::new(3, en, 47).unwrap(),
        )
        .unwrap();
        if let Ok(message) = encrypt_message(&public, &session, &text) {
            let parsed = wire::parse_message(&wire::serialize_message(&message)).unwrap();
            prop_assert_eq!(parsed, message);
        }
    }
}
