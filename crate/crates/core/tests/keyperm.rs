use std::collections::HashSet;

use netsteg::keyperm::{apply_permutation, derive_seed, invert_permutation, permutation};
use netsteg::EdgeList;
use proptest::prelude::*;

proptest! {
    #[test]
    fn permutation_is_a_bijection(seed in any::<u64>(), n in 0usize..500) {
        let mut p = permutation(seed, n);
        p.sort_unstable();
        prop_assert_eq!(p, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn invert_undoes_apply(seed in any::<u64>(), n in 1usize..100) {
        let el = EdgeList::from_pairs((0..n).map(|i| (i.to_string(), (i * 7 % 5).to_string()))).unwrap();
        let p = permutation(seed, n);
        let moved = apply_permutation(&el, &p).unwrap();
        prop_assert_eq!(invert_permutation(&moved, &p).unwrap(), el.clone());
        for (i, &pi) in p.iter().enumerate() {
            prop_assert_eq!(moved.record(pi), el.record(i));
        }
    }

    #[test]
    fn same_password_same_permutation(pw in ".{0,20}", n in 0usize..64) {
        let s = derive_seed(pw.as_bytes());
        prop_assert_eq!(permutation(s, n), permutation(derive_seed(pw.as_bytes()), n));
    }
}

#[test]
fn distinct_passwords_give_distinct_permutations() {
    let perms: HashSet<Vec<usize>> = (0..1000)
        .map(|i| permutation(derive_seed(format!("password-{i}").as_bytes()), 16))
        .collect();
    assert_eq!(perms.len(), 1000);
}
