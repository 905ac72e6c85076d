//! Brute-force congruence oracles for quadratic-space predicates over ℚ₂:
//! isotropy of small diagonal forms and the codimension-1 representation
//! criterion against invariant arithmetic.

use dyadic_forms::localfield::{Elem, Field};
use dyadic_forms::qspace::{
    codim1_product_criterion, is_isotropic, represents_space, space_of_diagonal,
};

/// Brute isotropy of a diagonal form over ℚ₂: a primitive residue zero
/// modulo 2^{2e+3} = 32 exists iff the form is isotropic (Hensel bound for
/// entries of order ≤ 1). Partial sums are folded left to right, tracking
/// whether a key is reachable with at least one unit coordinate.
fn brute_isotropic_q2(f: &Field, entries: &[Elem]) -> bool {
    const K: u32 = 5; // 2e+3 over Q2
    let m = 1u64 << K;
    let key_of = |x: &Elem| -> u64 {
        let (c0, _c1, den2) = x.raw();
        assert_eq!(den2, 0);
        (c0 as u64) & (m - 1)
    };
    // reachable[key] = (with_unit_coord, all_nonunit_coords)
    let mut reach: Vec<(bool, bool)> = vec![(false, false); m as usize];
    reach[0].1 = true; // empty sum, no coordinates yet
    for a in entries {
        let mut next: Vec<(bool, bool)> = vec![(false, false); m as usize];
        for x in 0..m {
            let xe = f.int(x as i64);
            let term = key_of(&a.mul(&xe).mul(&xe));
            let unit = x % 2 == 1;
            for k in 0..m as usize {
                let (wu, nu) = reach[k];
                if !wu && !nu {
                    continue;
                }
                let t = ((k as u64 + term) & (m - 1)) as usize;
                if wu || (nu && unit) {
                    next[t].0 = true;
                }
                if nu && !unit {
                    next[t].1 = true;
                }
            }
        }
        reach = next;
    }
    reach[0].0
}

#[test]
fn isotropy_matches_brute_force_dims_2_to_4() {
    let f = Field::shared("q2");
    let classes = f.square_classes();
    let mut count = 0usize;
    // dim 2 and 3 exhaustive; dim 4 exhaustive as well (8^4 = 4096 forms)
    for n in 2..=4usize {
        let mut idx = vec![0usize; n];
        loop {
            let entries: Vec<Elem> = idx.iter().map(|&i| classes[i]).collect();
            let v = space_of_diagonal(f, &entries).unwrap();
            let fast = is_isotropic(f, &v);
            let slow = brute_isotropic_q2(f, &entries);
            assert_eq!(
                fast, slow,
                "isotropy mismatch for {:?}",
                entries.iter().map(|e| e.to_string()).collect::<Vec<_>>()
            );
            count += 1;
            // advance multi-index
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] < classes.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    assert_eq!(count, 64 + 512 + 4096);
}

#[test]
fn codim1_criterion_equals_invariant_representation() {
    let f = Field::shared("q2");
    let classes = f.square_classes();
    // h = 1: [b1] into [a1, a2], exhaustive
    for b1 in &classes {
        for a1 in &classes {
            for a2 in &classes {
                let v = space_of_diagonal(f, &[*a1, *a2]).unwrap();
                let w = space_of_diagonal(f, &[*b1]).unwrap();
                let via_inv = represents_space(f, &v, &w).unwrap();
                let via_prod = codim1_product_criterion(f, &[*a1, *a2], &[*b1]).unwrap();
                assert_eq!(via_inv, via_prod, "h=1 mismatch at [{a1},{a2}] / [{b1}]");
            }
        }
    }
    // h = 2: [b1,b2] into [a1,a2,a3], exhaustive over unit classes for the b's
    for b1 in &classes {
        for b2 in &classes {
            for a1 in &classes {
                for a2 in &classes {
                    for a3 in &classes {
                        let v = space_of_diagonal(f, &[*a1, *a2, *a3]).unwrap();
                        let w = space_of_diagonal(f, &[*b1, *b2]).unwrap();
                        let via_inv = represents_space(f, &v, &w).unwrap();
                        let via_prod =
                            codim1_product_criterion(f, &[*a1, *a2, *a3], &[*b1, *b2]).unwrap();
                        assert_eq!(via_inv, via_prod, "h=2 mismatch");
                    }
                }
            }
        }
    }
}

#[test]
fn isotropy_of_binary_equals_disc_rule_all_fields() {
    for name in ["q2", "q2(sqrt(5))", "q2(sqrt(2))", "q2(sqrt(3))", "q2(sqrt(-1))"] {
        let f = Field::shared(name);
        for a in &f.square_classes() {
            for b in &f.square_classes() {
                let v = space_of_diagonal(f, &[*a, *b]).unwrap();
                let want = f.is_square(&a.mul(b).neg());
                assert_eq!(is_isotropic(f, &v), want, "{name}: binary [{a},{b}]");
            }
        }
    }
}
