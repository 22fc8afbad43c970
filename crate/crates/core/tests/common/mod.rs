#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use netsteg::{Algorithm, EdgeList};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `ee` 2-cycles, `eo` out-stars, `oe` in-stars and `oo` isolated edges.
/// Under BIND that is exactly `2·ee` EE, `2·eo` EO, `2·oe` OE and `oo` OO
/// edges.
pub fn gadget_cover(ee: usize, eo: usize, oe: usize, oo: usize) -> EdgeList {
    let mut pairs = Vec::new();
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        format!("n{next}")
    };
    for _ in 0..ee {
        let (a, b) = (fresh(), fresh());
        pairs.push((a.clone(), b.clone()));
        pairs.push((b, a));
    }
    for _ in 0..eo {
        let (c, x, y) = (fresh(), fresh(), fresh());
        pairs.push((c.clone(), x));
        pairs.push((c, y));
    }
    for _ in 0..oe {
        let (c, x, y) = (fresh(), fresh(), fresh());
        pairs.push((x, c.clone()));
        pairs.push((y, c));
    }
    for _ in 0..oo {
        pairs.push((fresh(), fresh()));
    }
    EdgeList::from_pairs(pairs).unwrap()
}

/// Cover with exactly `per_type` edges of each BIND type (`per_type` even).
pub fn uniform_bind_cover(per_type: usize) -> EdgeList {
    assert!(per_type.is_multiple_of(2));
    let h = per_type / 2;
    gadget_cover(h, h, h, per_type)
}

/// Directed random edge list: `edges` rows with endpoints uniform over
/// `nodes` integer IDs. Self-loops and repeated pairs are allowed.
pub fn er_cover(rng: &mut StdRng, nodes: usize, edges: usize) -> EdgeList {
    let pairs: Vec<(String, String)> = (0..edges)
        .map(|_| {
            let a = rng.gen_range(0..nodes);
            let b = rng.gen_range(0..nodes);
            (a.to_string(), b.to_string())
        })
        .collect();
    EdgeList::from_pairs(pairs).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_bytes(rng: &mut StdRng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen()).collect()
}

/// Type of every row, computed from the rows alone.
pub fn oracle_types(el: &EdgeList, algorithm: Algorithm) -> Vec<u8> {
    let rows: Vec<(Vec<u8>, Vec<u8>)> = el.records().map(|r| (r.src.to_vec(), r.dst.to_vec())).collect();
    let unique: BTreeSet<_> = rows.iter().cloned().collect();
    let mut deg: HashMap<Vec<u8>, u64> = HashMap::new();
    for (a, b) in unique {
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
    }
    rows.iter()
        .map(|(a, b)| {
            let (ka, kb) = (deg[a], deg[b]);
            match algorithm {
                Algorithm::Bind => (2 * (ka % 2) + kb % 2) as u8,
                Algorithm::Bymond => ((ka + kb) % 256) as u8,
            }
        })
        .collect()
}

/// Message symbols: four 2-bit groups per byte high bits first, or the
/// byte itself.
pub fn oracle_symbols(algorithm: Algorithm, bytes: &[u8]) -> Vec<u8> {
    match algorithm {
        Algorithm::Bind => bytes
            .iter()
            .flat_map(|&b| [b >> 6, (b >> 4) & 3, (b >> 2) & 3, b & 3])
            .collect(),
        Algorithm::Bymond => bytes.to_vec(),
    }
}

pub fn fits(types: &[u8], demand: &[u8], n: usize) -> bool {
    let mut supply = vec![0i64; n];
    for &t in types {
        supply[t as usize] += 1;
    }
    for &s in demand {
        supply[s as usize] -= 1;
    }
    supply.iter().all(|&c| c >= 0)
}

/// Whether a framed message can be encoded: the header needs parity-typed
/// edges (the first ones in file order for BYMOND), the body needs the
/// remaining supply of its own types.
pub fn framed_fits(el: &EdgeList, algorithm: Algorithm, msg: &[u8]) -> bool {
    let header = oracle_symbols(Algorithm::Bind, &(msg.len() as u32).to_be_bytes());
    let body = oracle_symbols(algorithm, msg);
    if header.len() + body.len() > el.len() {
        return false;
    }
    match algorithm {
        Algorithm::Bind => {
            let all: Vec<u8> = header.iter().chain(&body).copied().collect();
            fits(&oracle_types(el, Algorithm::Bind), &all, 4)
        }
        Algorithm::Bymond => {
            let parity = oracle_types(el, Algorithm::Bind);
            let bytes = oracle_types(el, Algorithm::Bymond);
            let mut need = [0usize; 4];
            for &s in &header {
                need[s as usize] += 1;
            }
            let mut left = Vec::new();
            for (p, b) in parity.iter().zip(&bytes) {
                if need[*p as usize] > 0 {
                    need[*p as usize] -= 1;
                } else {
                    left.push(*b);
                }
            }
            need.iter().all(|&n| n == 0) && fits(&left, &body, 256)
        }
    }
}

/// Probability that `len` uniform symbols over `supply.len()` types never
/// ask any type for more than its supply:
/// `len! · Σ Π p^c_t / c_t!` over count vectors with `c_t ≤ supply_t`.
pub fn multinomial_fit_probability(supply: &[usize], len: usize) -> f64 {
    let p = 1.0 / supply.len() as f64;
    let fact: Vec<f64> = (0..=len)
        .scan(1.0, |f, i| {
            if i > 0 {
                *f *= i as f64;
            }
            Some(*f)
        })
        .collect();
    let mut dp = vec![0.0f64; len + 1];
    dp[0] = 1.0;
    for &s in supply {
        let mut next = vec![0.0f64; len + 1];
        for used in 0..=len {
            if dp[used] == 0.0 {
                continue;
            }
            for c in 0..=s.min(len - used) {
                next[used + c] += dp[used] * p.powi(c as i32) / fact[c];
            }
        }
        dp = next;
    }
    dp[len] * fact[len]
}

/// Largest CDF gap, checked at every observed value.
pub fn brute_force_d(a: &[u64], b: &[u64]) -> f64 {
    a.iter()
        .chain(b)
        .map(|&x| {
            let fa = a.iter().filter(|&&v| v <= x).count() as f64 / a.len() as f64;
            let fb = b.iter().filter(|&&v| v <= x).count() as f64 / b.len() as f64;
            (fa - fb).abs()
        })
        .fold(0.0, f64::max)
}
