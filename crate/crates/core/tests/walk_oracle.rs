//! Cross-checks the matrix engine against an independent brute-force walk
//! enumerator.  The enumerator is written here, against the public API
//! only, so it shares no code with the paths it verifies: `A^k` must equal
//! the `⊕`-fold over all length-`k` walks of their `⊗`-weights, and the
//! reachability closure must contain exactly the pairs some walk connects.

use supertropical::corpus::Corpus;
use supertropical::scalar::SuperScalar;
use supertropical::SuperMatrix;

/// `⊕` over all walks `from -> ... -> to` with exactly `len` edges, each
/// weighted by the `⊗`-product of its entries.
fn walk_fold(a: &SuperMatrix, from: usize, to: usize, len: usize) -> SuperScalar {
    if len == 0 {
        return if from == to {
            SuperScalar::ONE
        } else {
            SuperScalar::EPS
        };
    }
    let mut acc = SuperScalar::EPS;
    for mid in 0..a.n() {
        let first_edge = a.get(from, mid);
        if first_edge.is_eps() {
            continue;
        }
        acc = acc + first_edge * walk_fold(a, mid, to, len - 1);
    }
    acc
}

#[test]
fn powers_match_walk_enumeration() {
    let mut corpus = Corpus::new(2024);
    for case in 0..200 {
        let n = 1 + case % 5;
        let density = 0.2 + 0.6 * (case % 4) as f64 / 3.0;
        let a = corpus.matrix(n, density);
        for k in 1..=n {
            let p = a.pow(k);
            for from in 0..n {
                for to in 0..n {
                    assert_eq!(
                        p.get(from, to),
                        walk_fold(&a, from, to, k),
                        "case {case}: A^{k} entry ({from},{to}) at n={n}"
                    );
                }
            }
        }
    }
}

#[test]
fn chain_powers_keep_exactly_the_surviving_walk() {
    // 0 -> 1 of weight 2, 1 -> 2 of weight -1: the square holds the single
    // two-edge walk of weight 1, the cube holds nothing
    let a = SuperMatrix::from_entries(
        3,
        &[(0, 1, SuperScalar::real(2.0)), (1, 2, SuperScalar::real(-1.0))],
    );
    assert_eq!(walk_fold(&a, 0, 2, 2), SuperScalar::real(1.0));
    assert_eq!(
        a.pow(2),
        SuperMatrix::from_entries(3, &[(0, 2, SuperScalar::real(1.0))])
    );
    assert_eq!(a.pow(3), SuperMatrix::zero(3));
}

#[test]
fn ghost_weights_propagate_along_walks() {
    // 0 -> 1 carries a ghost; both closed two-edge walks come back ghost
    let a = SuperMatrix::from_entries(
        2,
        &[(0, 1, SuperScalar::ghost(1.0)), (1, 0, SuperScalar::real(3.0))],
    );
    let square = a.pow(2);
    assert_eq!(square.get(0, 0), SuperScalar::ghost(4.0));
    assert_eq!(square.get(1, 1), SuperScalar::ghost(4.0));
    assert!(square.get(0, 1).is_eps());
    assert!(square.get(1, 0).is_eps());
    for from in 0..2 {
        for to in 0..2 {
            assert_eq!(square.get(from, to), walk_fold(&a, from, to, 2));
        }
    }
}

#[test]
fn bracket_folds_both_walk_directions() {
    let a = SuperMatrix::from_entries(2, &[(0, 1, SuperScalar::real(0.0))]);
    let b = SuperMatrix::from_entries(2, &[(1, 0, SuperScalar::real(0.0))]);
    let c = a.bracket(&b).unwrap();
    // entry (0,0) from the A-then-B walk, entry (1,1) from B-then-A
    assert_eq!(
        c,
        SuperMatrix::from_entries(
            2,
            &[(0, 0, SuperScalar::real(0.0)), (1, 1, SuperScalar::real(0.0))]
        )
    );
}

#[test]
fn reachability_matches_walk_existence() {
    let mut corpus = Corpus::new(77);
    for case in 0..120 {
        let n = 1 + case % 5;
        let a = corpus.matrix(n, 0.35);
        let closure = a.support().reachability();
        for from in 0..n {
            for to in 0..n {
                let some_walk = (1..=n).any(|k| !walk_fold(&a, from, to, k).is_eps());
                assert_eq!(
                    closure.contains(from, to),
                    some_walk,
                    "case {case}: pair ({from},{to}) at n={n}"
                );
            }
        }
    }
}

#[test]
fn nilpotency_agrees_with_walk_exhaustion() {
    let mut corpus = Corpus::new(3555);
    for case in 0..120 {
        let n = 2 + case % 4;
        let a = corpus.matrix(n, 0.3);
        // nilpotent iff no length-n walk survives anywhere
        let any_walk = (0..n).any(|from| {
            (0..n).any(|to| !walk_fold(&a, from, to, n).is_eps())
        });
        assert_eq!(a.is_nilpotent(), !any_walk, "case {case} at n={n}");
    }
}
