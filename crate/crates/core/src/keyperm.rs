//! Password-keyed reordering of stego edges.
//!
//! The password is folded into a 64-bit seed with FNV-1a, the seed drives a
//! SplitMix64 stream, and the stream drives a Fisher–Yates shuffle with
//! modulo sampling. Every step is bit-exact and documented so third parties
//! can decode. None of it is cryptographic.

use crate::edgelist::EdgeList;
use crate::error::{Error, Result};

const FNV_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET_BASIS, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// A password and the seed derived from it.
#[derive(Clone, PartialEq, Eq)]
pub struct StegoKey {
    password: Vec<u8>,
    seed: u64,
}

impl StegoKey {
    pub fn new(password: impl AsRef<[u8]>) -> Self {
        let password = password.as_ref().to_vec();
        let seed = derive_seed(&password);
        StegoKey { password, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn password(&self) -> &[u8] {
        &self.password
    }
}

impl std::fmt::Debug for StegoKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StegoKey")
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

pub fn derive_seed(password: &[u8]) -> u64 {
    fnv1a64(password)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 generator (Steele, Lea & Flood; Vigna's constants).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// The `index`-th output (0-based) of a fresh generator seeded with
    /// `seed`, computed without stepping through the earlier outputs.
    pub fn nth_output(seed: u64, index: u64) -> u64 {
        mix64(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        let mut chunks = out.chunks_exact_mut(8);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&self.next_u64().to_le_bytes());
        }
        let rest = chunks.into_remainder();
        if !rest.is_empty() {
            let bytes = self.next_u64().to_le_bytes();
            rest.copy_from_slice(&bytes[..rest.len()]);
        }
    }
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fisher–Yates over `0..n`: for `i` from `n-1` down to `1`, swap `i` with
/// `next() % (i + 1)`.
pub fn permutation(seed: u64, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Moves the edge at index `i` to index `perm[i]`.
pub fn apply_permutation(el: &EdgeList, perm: &[usize]) -> Result<EdgeList> {
    check_len(el, perm)?;
    let mut order = vec![0usize; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        order[p] = i;
    }
    Ok(el.select(&order))
}

/// Undoes [`apply_permutation`]: the edge at `perm[i]` returns to `i`.
pub fn invert_permutation(el: &EdgeList, perm: &[usize]) -> Result<EdgeList> {
    check_len(el, perm)?;
    Ok(el.select(perm))
}

fn check_len(el: &EdgeList, perm: &[usize]) -> Result<()> {
    if perm.len() != el.len() {
        return Err(Error::LengthMismatch {
            perm: perm.len(),
            edges: el.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_vectors() {
        assert_eq!(derive_seed(b""), 0xcbf29ce484222325);
        assert_eq!(derive_seed(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(derive_seed(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn splitmix_reference_outputs() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
        assert_eq!(rng.next_u64(), 0x06c45d188009454f);
    }

    #[test]
    fn nth_output_matches_stepping() {
        for seed in [0u64, 1, 0xdead_beef, u64::MAX] {
            let mut rng = SplitMix64::new(seed);
            for i in 0..50 {
                assert_eq!(SplitMix64::nth_output(seed, i), rng.next_u64());
            }
        }
    }

    #[test]
    fn first_swap_for_seed_zero() {
        // n = 2: one swap with j = 0xE220A8397B1DCDAF % 2 = 1, so no change.
        assert_eq!(permutation(0, 2), vec![0, 1]);
        // n = 3: j = 0xE220A8397B1DCDAF % 3.
        let j = (0xe220a8397b1dcdafu64 % 3) as usize;
        let perm = permutation(0, 3);
        let mut expect = [0, 1, 2];
        expect.swap(2, j);
        assert_eq!(perm[2], expect[2]);
    }

    #[test]
    fn degenerate_sizes() {
        assert!(permutation(42, 0).is_empty());
        assert_eq!(permutation(42, 1), vec![0]);
    }

    #[test]
    fn apply_and_invert() {
        let el = EdgeList::from_pairs([("A", "B"), ("C", "D")]).unwrap();
        let swapped = apply_permutation(&el, &[1, 0]).unwrap();
        assert_eq!(swapped, EdgeList::from_pairs([("C", "D"), ("A", "B")]).unwrap());
        assert_eq!(apply_permutation(&el, &[0, 1]).unwrap(), el);
        assert!(matches!(
            apply_permutation(&el, &[0]),
            Err(Error::LengthMismatch { perm: 1, edges: 2 })
        ));
    }

    #[test]
    fn apply_moves_index_i_to_perm_i() {
        let el = EdgeList::from_pairs([("a", "0"), ("b", "0"), ("c", "0")]).unwrap();
        let out = apply_permutation(&el, &[2, 0, 1]).unwrap();
        assert_eq!(out.record(2).src, b"a");
        assert_eq!(out.record(0).src, b"b");
        assert_eq!(out.record(1).src, b"c");
    }

    #[test]
    fn key_debug_hides_password() {
        let key = StegoKey::new("hunter2");
        assert!(!format!("{key:?}").contains("hunter2"));
        assert_eq!(key.seed(), derive_seed(b"hunter2"));
    }
}
