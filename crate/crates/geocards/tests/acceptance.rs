//! End-to-end acceptance suite.
//!
//! Each criterion below exercises one externally checkable promise of the
//! crate, from exact reproduction of the worked 16-card example through the
//! parameter-derivation bounds. Every criterion prints a PASS/FAIL line;
//! the suite fails if any criterion does. Expected values are either
//! computed by an independent oracle inside the test or were derived by
//! hand and frozen here.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use geocards::geometry::find_avoiding_subspace;
use geocards::params::{
    check_conditions, derive_params, enumerate_sizes, slicing_gap_lower_bound, ProtocolParams,
};
use geocards::protocol::{
    cath_candidates, construct_containing_hand, construct_excluding_hand,
    enumerate_announcement, hand, CardMap, Hand, ImplicitAnnouncement,
};
use geocards::rng::SeededRng;
use geocards::verifier::{
    check_informative, check_k_safe, check_protocol, oracle_slicing_count, Violation,
};
use geocards::{FiniteField, Point, VectorSpace};

fn identity_announcement(q: u64, d: u32, k: u64, c: u64) -> ImplicitAnnouncement {
    let params = ProtocolParams::from_geometry(q, d, k, c).unwrap();
    ImplicitAnnouncement::new(params, CardMap::canonical(&params).unwrap()).unwrap()
}

fn min_pairwise_union(hands: &[Hand]) -> usize {
    let mut min = usize::MAX;
    for i in 0..hands.len() {
        for j in i + 1..hands.len() {
            min = min.min(hands[i].union(&hands[j]).count());
        }
    }
    min
}

/// Criterion 1: the 16-card worked example, reproduced in full.
/// Announcement size 30 (cross-checked against an independent census),
/// informative with minimum pairwise union 12 > a + c = 10, and 2-safe
/// across all 120 possible eavesdropper hands.
fn criterion_1_worked_example() {
    let params = ProtocolParams::from_geometry(4, 1, 2, 2).unwrap();
    assert_eq!((params.a(), params.b(), params.c()), (8, 6, 2));

    // independent census: materialize every (direction, offsets) slicing
    // and deduplicate by point set
    assert_eq!(oracle_slicing_count(4, 1, 2).unwrap(), 30);

    let ann = identity_announcement(4, 1, 2, 2);
    let full = enumerate_announcement(&ann).unwrap();
    assert_eq!(full.hand_count(), 30);

    assert_eq!(check_informative(&full).unwrap(), None);
    let min_union = min_pairwise_union(full.hands());
    assert_eq!(min_union, 12, "two slicings sharing a hyperplane overlap most");
    assert!(min_union as u64 > params.a() + params.c());
    assert_eq!(slicing_gap_lower_bound(4, 1, 2).unwrap(), 12);

    assert_eq!(check_k_safe(&full, 2).unwrap(), None);
    // which quantified over all C(16,2) = 120 eavesdropper hands
    assert_eq!(geocards::params::binomial(16, 2), 120);
}

/// Criterion 2: sizes (10, 12, 3) sit outside the sufficient conditions
/// (c·k = 6 > q = 5) yet the exhaustive checks still come out clean at
/// safety level 2.
fn criterion_2_boundary_sizes() {
    let params = ProtocolParams::from_geometry(5, 1, 2, 3).unwrap();
    assert_eq!((params.a(), params.b(), params.c()), (10, 12, 3));

    let record = check_conditions(&params);
    assert!(record.gap_condition);
    assert!(!record.field_condition, "c·k = 6 exceeds q = 5");
    assert!(!record.theorem_applies());

    let report = check_protocol(&params, 2).unwrap();
    assert_eq!(report.hand_count, 60);
    assert!(report.is_informative());
    assert!(report.is_safe(), "2-safe despite the failed condition");
}

/// Criterion 3: sizes (8, 5, 3) break 1-safety, and the first witness has
/// the known geometric shape: the eavesdropper's three cards sit on one
/// hyperplane, the target card completes that hyperplane, and no candidate
/// hand contains it — so the eavesdropper learns the second player holds it.
fn criterion_3_failure_witness() {
    let params = ProtocolParams::from_geometry(4, 1, 2, 3).unwrap();
    assert_eq!((params.a(), params.b(), params.c()), (8, 5, 3));

    let report = check_protocol(&params, 1).unwrap();
    assert!(report.is_informative());
    let violation = report.k_safe.expect("1-safety must fail");

    // frozen first-in-lexicographic-order witness
    let (cath_hand, target) = match &violation {
        Violation::NoContainingHand { cath_hand, target } => (cath_hand, target),
        other => panic!("expected a containing-hand violation, got {other:?}"),
    };
    assert_eq!(cath_hand, &hand([1, 2, 3]));
    assert_eq!(target, &hand([4]));

    // shape: the three intercepted points are collinear...
    let map = CardMap::canonical(&params).unwrap();
    let space = map.space().clone();
    let cath_points = map.image(cath_hand).unwrap();
    let target_point = map.image(target).unwrap().pop_first().unwrap();
    let shared = space
        .directions()
        .unwrap()
        .into_iter()
        .find_map(|dir| {
            let offsets: BTreeSet<_> = cath_points.iter().map(|p| dir.offset_of(p)).collect();
            (offsets.len() == 1).then(|| (dir.clone(), offsets.into_iter().next().unwrap()))
        })
        .expect("intercepted points lie on one hyperplane");
    // ...and the target point completes the same hyperplane
    assert_eq!(shared.0.offset_of(&target_point), shared.1);
    let line = shared.0.hyperplane(shared.1).points(&space).unwrap();
    let mut expected = cath_points.clone();
    expected.insert(target_point);
    assert_eq!(line, expected);

    // replay: among candidates avoiding the intercepted cards, none
    // contains the target card
    let ann = ImplicitAnnouncement::new(params, map).unwrap();
    let full = enumerate_announcement(&ann).unwrap();
    let candidates = cath_candidates(&full, cath_hand).unwrap();
    assert!(!candidates.is_empty());
    assert!(candidates.iter().all(|h| !target.is_subset(h)));
}

/// Criterion 4: every size tuple up to deck 32 whose conditions both hold
/// actually passes exhaustive verification at its own k.
fn criterion_4_theorem_grid() {
    let records = enumerate_sizes(32);
    let applies: Vec<_> = records.iter().filter(|r| r.theorem_applies()).collect();
    // hand-derived census of the 35 qualifying tuples
    assert_eq!(applies.len(), 35);
    assert!(applies
        .iter()
        .any(|r| (r.params.q(), r.params.d(), r.params.k(), r.params.c()) == (4, 1, 2, 2)));
    let q4_d1 = applies
        .iter()
        .filter(|r| r.params.q() == 4 && r.params.d() == 1)
        .count();
    let q5_d1 = applies
        .iter()
        .filter(|r| r.params.q() == 5 && r.params.d() == 1)
        .count();
    assert_eq!((q4_d1, q5_d1), (8, 11));

    for record in applies {
        let p = record.params;
        let report = check_protocol(&p, p.k()).unwrap();
        assert!(
            report.passes(),
            "({}, {}, {}) with q = {}, d = {}, k = {} must verify",
            p.a(),
            p.b(),
            p.c(),
            p.q(),
            p.d(),
            p.k()
        );
    }
}

/// Criterion 5: the derivation grid. For every k, c in 1..=3 (dimension 1)
/// the derived sizes satisfy both conditions and the linear-growth bounds
/// a ≤ 2k(kc + 1) and b < 2a(c + 1).
fn criterion_5_derivation_bounds() {
    // smallest prime power in (kc + 1, 2(kc + 1)], derived by hand
    let expected_q = [
        ((1, 1), 3),
        ((1, 2), 4),
        ((1, 3), 5),
        ((2, 1), 4),
        ((2, 2), 7),
        ((2, 3), 8),
        ((3, 1), 5),
        ((3, 2), 8),
        ((3, 3), 11),
    ];
    for ((k, c), q) in expected_q {
        let record = derive_params(k, c, 1).unwrap();
        let p = record.params;
        assert_eq!(p.q(), q, "k = {k}, c = {c}");
        assert!(record.theorem_applies(), "k = {k}, c = {c}");
        assert!(p.a() <= 2 * k * (k * c + 1), "k = {k}, c = {c}: a = {}", p.a());
        assert!(p.b() < 2 * p.a() * (c + 1), "k = {k}, c = {c}: b = {}", p.b());
    }
}

/// Criterion 6: the constructive machinery. 500 seeded avoiding-subspace
/// searches succeed and verify by materializing the hyperplanes involved;
/// the containing/excluding hand builders verify by set operations on the
/// 16-card sizes (exhaustively) and the 49-card sizes (sampled).
fn criterion_6_constructive_lemmas() {
    // part 1: find_avoiding_subspace trials over q in {4, 5, 7, 8}, d in {1, 2}
    let mut rng = SeededRng::new(0xC0FFEE);
    let orders = [4u64, 5, 7, 8];
    let mut trials = 0;
    while trials < 500 {
        let q = orders[rng.below(4) as usize];
        let d = 1 + rng.below(2) as usize;
        let space = VectorSpace::new(FiniteField::new(q).unwrap(), d + 1).unwrap();
        let k = 1 + rng.below(q - 1);
        let avoid_size = rng.below(q / k + 1);
        let through_size = 1 + rng.below(k);
        let picked = rng.distinct_below(
            space.point_count(),
            (avoid_size + through_size) as usize,
        );
        let mut shuffled = picked;
        rng.shuffle(&mut shuffled);
        let avoid: BTreeSet<Point> = shuffled[..avoid_size as usize]
            .iter()
            .map(|&i| space.point_from_index(i).unwrap())
            .collect();
        let through: BTreeSet<Point> = shuffled[avoid_size as usize..]
            .iter()
            .map(|&i| space.point_from_index(i).unwrap())
            .collect();

        let dir = find_avoiding_subspace(&space, &avoid, &through, k)
            .expect("preconditions hold by construction");
        // verify by enumeration: the full hyperplane through every target
        // point misses the avoided set
        for x in &through {
            let plane = dir.hyperplane(dir.offset_of(x)).points(&space).unwrap();
            assert!(plane.contains(x));
            assert!(plane.is_disjoint(&avoid));
        }
        trials += 1;
    }

    // part 2: witness builders, exhaustive on the 16-card sizes
    let ann = identity_announcement(4, 1, 2, 2);
    let full = enumerate_announcement(&ann).unwrap();
    let deck: Vec<u32> = (1..=16).collect();
    for i in 0..deck.len() {
        for j in i + 1..deck.len() {
            let cath = hand([deck[i], deck[j]]);
            let rest: Vec<u32> = deck
                .iter()
                .copied()
                .filter(|&x| x != deck[i] && x != deck[j])
                .collect();
            let mut targets: Vec<Hand> = rest.iter().map(|&x| hand([x])).collect();
            for a in 0..rest.len() {
                for b in a + 1..rest.len() {
                    targets.push(hand([rest[a], rest[b]]));
                }
            }
            for target in targets {
                let containing = construct_containing_hand(&ann, &cath, &target).unwrap();
                assert!(target.is_subset(&containing));
                assert!(containing.is_disjoint(&cath));
                assert!(full.contains_hand(&containing));

                let excluding = construct_excluding_hand(&ann, &cath, &target).unwrap();
                assert!(!target.is_subset(&excluding));
                assert!(excluding.is_disjoint(&cath));
                assert!(full.contains_hand(&excluding));
            }
        }
    }

    // part 3: witness builders, sampled on the 49-card sizes (14, 33, 2)
    let ann = identity_announcement(7, 1, 2, 2);
    let full = enumerate_announcement(&ann).unwrap();
    assert_eq!(full.hand_count(), 168);
    let mut rng = SeededRng::new(0xBEEF);
    for _ in 0..200 {
        let picked = rng.distinct_below(49, 4);
        let cath = hand([picked[0] as u32 + 1, picked[1] as u32 + 1]);
        let target_size = 1 + rng.below(2) as usize;
        let target: Hand = picked[2..2 + target_size]
            .iter()
            .map(|&x| geocards::Card(x as u32 + 1))
            .collect();

        let containing = construct_containing_hand(&ann, &cath, &target).unwrap();
        assert!(target.is_subset(&containing));
        assert!(containing.is_disjoint(&cath));
        assert_eq!(ann.contains_hand(&containing), Ok(true));
        assert!(full.contains_hand(&containing));

        let excluding = construct_excluding_hand(&ann, &cath, &target).unwrap();
        assert!(!target.is_subset(&excluding));
        assert!(excluding.is_disjoint(&cath));
        assert_eq!(ann.contains_hand(&excluding), Ok(true));
        assert!(full.contains_hand(&excluding));
    }
}

/// Criterion 7: the union lower bound is exact. Over every unordered pair
/// of distinct 2-slicings of GF(4)^2 (435 pairs) and GF(5)^2 (1770 pairs),
/// the union size never drops below the closed-form bound, and reaches it.
fn criterion_7_union_lemma() {
    for (q, pairs, bound) in [(4u64, 435usize, 12u64), (5, 1770, 15)] {
        let c = if q == 4 { 2 } else { 3 };
        let ann = identity_announcement(q, 1, 2, c);
        let full = enumerate_announcement(&ann).unwrap();
        assert_eq!(slicing_gap_lower_bound(q, 1, 2).unwrap(), bound);

        let hands = full.hands();
        let mut pair_count = 0;
        let mut min_union = usize::MAX;
        for i in 0..hands.len() {
            for j in i + 1..hands.len() {
                pair_count += 1;
                min_union = min_union.min(hands[i].union(&hands[j]).count());
            }
        }
        assert_eq!(pair_count, pairs);
        assert!(min_union as u64 >= bound, "GF({q})");
        assert_eq!(min_union as u64, bound, "the bound is sharp over GF({q})");
    }
}

/// Criterion 8: field arithmetic, exhaustively. All ring and field axioms
/// over every order up to 9, and the GF(4) multiplication table produced by
/// reduction modulo x^2 + x + 1.
fn criterion_8_field_core() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = FiniteField::new(q).unwrap();
        let elems = f.elements();
        let zero = f.zero();
        let one = f.one();
        for a in &elems {
            assert_eq!(&a.add(&zero).unwrap(), a);
            assert_eq!(&a.mul(&one).unwrap(), a);
            assert!(a.add(&a.neg()).unwrap().is_zero());
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            }
            for b in &elems {
                assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                for c in &elems {
                    assert_eq!(
                        a.add(b).unwrap().add(c).unwrap(),
                        a.add(&b.add(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.mul(b).unwrap().mul(c).unwrap(),
                        a.mul(&b.mul(c).unwrap()).unwrap()
                    );
                    assert_eq!(
                        a.mul(&b.add(c).unwrap()).unwrap(),
                        a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    let f = FiniteField::new(4).unwrap();
    assert_eq!(f.modulus(), &[1, 1, 1], "x^2 + x + 1, little-endian");
    let table = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    for i in 0..4u64 {
        for j in 0..4u64 {
            let prod = f.element(i).unwrap().mul(&f.element(j).unwrap()).unwrap();
            assert_eq!(prod.index(), table[i as usize][j as usize]);
        }
    }
}

#[test]
fn acceptance() {
    let criteria: &[(&str, fn())] = &[
        ("worked example (8,6,2) reproduced", criterion_1_worked_example),
        ("boundary sizes (10,12,3) verify", criterion_2_boundary_sizes),
        ("failure witness for (8,5,3)", criterion_3_failure_witness),
        ("theorem grid up to deck 32", criterion_4_theorem_grid),
        ("derivation bounds on the 3x3 grid", criterion_5_derivation_bounds),
        ("constructive lemmas", criterion_6_constructive_lemmas),
        ("slicing-union lower bound", criterion_7_union_lemma),
        ("field core axioms", criterion_8_field_core),
    ];

    let mut failures = Vec::new();
    for (i, (label, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        match outcome {
            Ok(()) => println!("criterion {}: PASS ({:.2?}) - {label}", i + 1, elapsed),
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| panic.downcast_ref::<&str>().copied())
                    .unwrap_or("<non-string panic>");
                println!("criterion {}: FAIL ({:.2?}) - {label}: {msg}", i + 1, elapsed);
                failures.push(*label);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
