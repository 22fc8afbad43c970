mod common;

use common::{fits, framed_fits, oracle_symbols, oracle_types};
use netsteg::codec::{decode_unframed, encode_unframed};
use netsteg::{decode, encode, Algorithm, Error, StegoKey};
use proptest::prelude::*;
use rand::Rng;

fn algorithms() -> impl Strategy<Value = Algorithm> {
    prop_oneof![Just(Algorithm::Bind), Just(Algorithm::Bymond)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn encode_succeeds_iff_supply_covers_demand(
        seed in any::<u64>(),
        algorithm in algorithms(),
        edges in 1usize..=200,
        nodes in 2usize..40,
        len in 0usize..40,
        framed in any::<bool>(),
    ) {
        let mut rng = common::rng(seed);
        let el = common::er_cover(&mut rng, nodes, edges);
        let msg = common::random_bytes(&mut rng, len);
        let key = StegoKey::new(seed.to_string());
        let expect = if framed {
            framed_fits(&el, algorithm, &msg)
        } else {
            len * algorithm.symbols_per_byte() <= edges
                && fits(&oracle_types(&el, algorithm), &oracle_symbols(algorithm, &msg), algorithm.num_types())
        };
        let result = if framed {
            encode(&el, algorithm, &msg, &key)
        } else {
            encode_unframed(&el, algorithm, &msg, &key)
        };
        match result {
            Ok(out) => {
                prop_assert!(expect);
                prop_assert_eq!(out.stego.sorted_records(), el.sorted_records());
                let back = if framed {
                    decode(&out.stego, algorithm, &key).unwrap()
                } else {
                    decode_unframed(&out.stego, algorithm, &key, len).unwrap()
                };
                prop_assert_eq!(back, msg);
            }
            Err(Error::TypeExhausted { .. }) | Err(Error::MessageTooLarge { .. }) => prop_assert!(!expect),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn stego_rows_carry_message_symbols(seed in any::<u64>(), len in 1usize..30) {
        let el = common::gadget_cover(40, 40, 40, 80);
        let mut rng = common::rng(seed);
        let msg = common::random_bytes(&mut rng, len);
        let key = StegoKey::new("k");
        let out = encode_unframed(&el, Algorithm::Bind, &msg, &key).unwrap();
        let perm = netsteg::keyperm::permutation(key.seed(), el.len());
        let types = oracle_types(&out.stego, Algorithm::Bind);
        let read: Vec<u8> = (0..len * 4).map(|k| types[perm[k]]).collect();
        prop_assert_eq!(read, oracle_symbols(Algorithm::Bind, &msg));
    }
}

#[test]
fn wrong_password_rarely_recovers() {
    let el = common::gadget_cover(200, 200, 200, 400);
    let msg = b"meet at the usual place";
    let out = encode(&el, Algorithm::Bind, msg, &StegoKey::new("right")).unwrap();
    let mut rng = common::rng(7);
    let misses = (0..1000)
        .filter(|_| {
            let wrong = StegoKey::new(format!("wrong-{}", rng.gen::<u64>()));
            decode(&out.stego, Algorithm::Bind, &wrong).map_or(true, |m| m != msg)
        })
        .count();
    assert!(misses >= 990, "{misses} of 1000 wrong keys failed to recover");
}

#[test]
fn bymond_round_trip_on_random_cover() {
    let mut rng = common::rng(42);
    let el = common::er_cover(&mut rng, 300, 5000);
    let msg = b"ab";
    let key = StegoKey::new("x");
    match encode(&el, Algorithm::Bymond, msg, &key) {
        Ok(out) => assert_eq!(decode(&out.stego, Algorithm::Bymond, &key).unwrap(), msg),
        Err(e) => assert!(!framed_fits(&el, Algorithm::Bymond, msg), "{e}"),
    }
}
