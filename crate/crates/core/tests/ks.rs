mod common;

use common::brute_force_d;
use netsteg::stats::{ks_p_value, ks_two_sample};
use rand::Rng;

#[test]
fn d_matches_brute_force() {
    let mut rng = common::rng(77);
    for _ in 0..200 {
        let range = rng.gen_range(2..100u64);
        let a: Vec<u64> = (0..rng.gen_range(1..150)).map(|_| rng.gen_range(0..range)).collect();
        let b: Vec<u64> = (0..rng.gen_range(1..150))
            .map(|_| rng.gen_range(0..range + 5))
            .collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.d_stat - brute_force_d(&a, &b)).abs() < 1e-12);
        assert_eq!((r.n_a, r.n_b), (a.len(), b.len()));
        assert_eq!(r.p_value, ks_p_value(r.d_stat, a.len(), b.len()));
    }
}

#[test]
fn p_value_formula() {
    // n_e = 50, λ = (√50 + 0.12 + 0.11/√50)·0.2.
    let ne: f64 = 50.0;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * 0.2;
    let q: f64 = 2.0
        * (1..100)
            .map(|k| {
                let k = k as f64;
                (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum::<f64>();
    assert!((ks_p_value(0.2, 100, 100) - q).abs() < 1e-9);
}

#[test]
fn same_distribution_is_not_rejected() {
    let mut rng = common::rng(3);
    let a: Vec<u64> = (0..2000).map(|_| rng.gen_range(0..50)).collect();
    let b: Vec<u64> = (0..2000).map(|_| rng.gen_range(0..50)).collect();
    assert!(ks_two_sample(&a, &b).unwrap().p_value > 0.01);
    let c: Vec<u64> = (0..2000).map(|_| rng.gen_range(10..60)).collect();
    assert!(ks_two_sample(&a, &c).unwrap().p_value < 1e-6);
}
