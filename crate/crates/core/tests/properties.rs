use proptest::prelude::*;

use tri_waring::canonical::{
    annihilate_entry, conjugate, diagonalize_distinct, reduction_order, Presentation,
};
use tri_waring::decomposer::{
    decompose_three, decompose_two, realize_plan, tables, verify_decomposition, Side,
    StructuredPlan,
};
use tri_waring::oracle::{all_kth_powers, bn_conjugate, Sumsets};
use tri_waring::power_sums::{classify, enumerate_pair_solutions, PairSolution};
use tri_waring::tri_matrix::{mat_inverse, mat_mul, mat_pow, UTMatrix};
use tri_waring::{Elem, Field};

const QS: [u32; 8] = [3, 5, 7, 9, 11, 13, 25, 27];

fn field(q: u32) -> Field {
    q.to_string().parse().unwrap()
}

fn matrix(q: u32, n: usize) -> impl Strategy<Value = UTMatrix> {
    let len = n * (n + 1) / 2;
    prop::collection::vec(0..q, len).prop_map(move |v| {
        UTMatrix::from_packed(n, v.into_iter().map(Elem).collect()).unwrap()
    })
}

fn field_and_matrix(max_n: usize) -> impl Strategy<Value = (u32, UTMatrix)> {
    (prop::sample::select(QS.to_vec()), 1..=max_n)
        .prop_flat_map(|(q, n)| (Just(q), matrix(q, n)))
}

/// Invertible: diagonal entries forced nonzero.
fn unit(q: u32, n: usize) -> impl Strategy<Value = UTMatrix> {
    (matrix(q, n), prop::collection::vec(1..q, n))
        .prop_map(|(m, d)| m.with_diagonal(&d.into_iter().map(Elem).collect::<Vec<_>>()))
}

proptest! {
    #[test]
    fn field_laws(q in prop::sample::select(QS.to_vec()), a in 0u32..27, b in 0u32..27, c in 0u32..27) {
        let f = field(q);
        let (a, b, c) = (Elem(a % q), Elem(b % q), Elem(c % q));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn codes_round_trip((q, m) in field_and_matrix(4)) {
        prop_assert_eq!(UTMatrix::decode(m.size(), q, m.encode(q)), m.clone());
        prop_assert_eq!(m.to_string().parse::<UTMatrix>().unwrap(), m);
    }

    #[test]
    fn power_is_repeated_product((q, m) in field_and_matrix(4), k in 0u64..6) {
        let f = field(q);
        let mut acc = UTMatrix::identity(m.size());
        for _ in 0..k {
            acc = mat_mul(&f, &acc, &m).unwrap();
        }
        prop_assert_eq!(mat_pow(&f, &m, k), acc);
    }

    #[test]
    fn inverse_is_two_sided(s in (1usize..=5).prop_flat_map(|n| unit(13, n))) {
        let f = field(13);
        let inv = mat_inverse(&f, &s).unwrap();
        prop_assert_eq!(mat_mul(&f, &s, &inv).unwrap(), UTMatrix::identity(s.size()));
        prop_assert_eq!(mat_mul(&f, &inv, &s).unwrap(), UTMatrix::identity(s.size()));
    }

    #[test]
    fn annihilation_keeps_earlier_entries((q, m) in field_and_matrix(5), pick in any::<prop::sample::Index>()) {
        let f = field(q);
        let order = reduction_order(m.size());
        prop_assume!(!order.is_empty());
        let at = pick.index(order.len());
        let (l, r) = order[at];
        prop_assume!(m.get(l, l) != m.get(r, r));
        let (after, w) = annihilate_entry(&f, &m, l, r).unwrap();
        prop_assert!(w.verify(&f));
        prop_assert!(after.get(l, r).is_zero());
        for &(i, j) in &order[..at] {
            prop_assert_eq!(after.get(i, j), m.get(i, j));
        }
        prop_assert_eq!(after.diag(), m.diag());
    }

    #[test]
    fn distinct_diagonal_conjugates_to_diagonal(
        (q, diag, upper) in prop::sample::select(QS.to_vec()).prop_flat_map(|q| {
            (Just(q), Just((0..q).collect::<Vec<_>>()).prop_shuffle(), matrix(q, q.min(5) as usize))
        })
    ) {
        let f = field(q);
        let m = upper.with_diagonal(&diag[..upper.size()].iter().copied().map(Elem).collect::<Vec<_>>());
        let (d, w) = diagonalize_distinct(&f, &m).unwrap();
        prop_assert!(d.is_diagonal());
        prop_assert_eq!(d.diag(), m.diag());
        prop_assert!(w.verify(&f));
    }

    #[test]
    fn classes_partition_solutions(q in prop::sample::select(QS.to_vec()), k in 1u64..=8, l in 0u32..27) {
        let f = field(q);
        let lambda = Elem(l % q);
        let sols = enumerate_pair_solutions(&f, lambda, k);
        let cls = classify(&f, lambda, k);
        prop_assert_eq!(cls.solution_count(), sols.len());
        let mut members: Vec<PairSolution> = cls.u.clone();
        for c in &cls.classes {
            prop_assert!(!c.members.is_empty());
            for s in &c.members {
                prop_assert_eq!((f.pow(s.x, k), f.pow(s.y, k)), c.signature);
                prop_assert!(f.pow(s.x, k) != f.pow(s.y, k));
            }
            members.extend(c.members.iter().copied());
        }
        for s in &cls.u {
            prop_assert_eq!(f.pow(s.x, k), f.pow(s.y, k));
        }
        members.sort_by_key(|s| (s.x, s.y));
        let mut all = sols.clone();
        all.sort_by_key(|s| (s.x, s.y));
        prop_assert_eq!(members, all);
    }

    #[test]
    fn bn_conjugacy_finds_witnesses(a in matrix(3, 3), s in unit(3, 3)) {
        let f = field(3);
        let b = conjugate(&f, &a, &s).unwrap();
        let w = bn_conjugate(&f, &a, &b).unwrap().expect("conjugate by construction");
        prop_assert!(w.verify(&f));
        let back = bn_conjugate(&f, &b, &a).unwrap().expect("symmetric");
        prop_assert!(back.verify(&f));
    }

    #[test]
    fn decompositions_verify((q, c) in field_and_matrix(4), k in 2u64..=3) {
        let f = field(q);
        if let Ok(r) = decompose_two(&f, &c, k) {
            prop_assert!(r.verified);
            prop_assert!(verify_decomposition(&f, &c, &r.parts, k).unwrap());
        }
        if let Ok(r) = decompose_three(&f, &c, k) {
            prop_assert!(r.verified);
            prop_assert_eq!(r.parts.len(), 3);
            prop_assert!(verify_decomposition(&f, &c, &r.parts, k).unwrap());
        }
    }
}

#[test]
fn sumset_levels_grow() {
    for (q, n, k) in [(3, 2, 2), (5, 2, 3), (3, 3, 2)] {
        let f = field(q);
        let powers = all_kth_powers(&f, n, k).unwrap();
        let mut sums = Sumsets::new(&f, &powers);
        let mut prev = sums.level(1).clone();
        for r in 2..=4 {
            let cur = sums.level(r).clone();
            assert!(prev.iter_ones().all(|i| cur[i]), "q={q} n={n} k={k} r={r}");
            prev = cur;
        }
    }
}

#[test]
fn oracle_agrees_with_decomposer_on_t2() {
    for q in [3, 5, 7, 13] {
        let f = field(q);
        for k in [2, 3] {
            let powers = all_kth_powers(&f, 2, k).unwrap();
            let mut sums = Sumsets::new(&f, &powers);
            let count = (q as u64).pow(3);
            for code in 0..count {
                let c = UTMatrix::decode(2, q, code);
                let two = sums.contains(&c, 2);
                if let Ok(r) = decompose_two(&f, &c, k) {
                    assert!(r.verified && two, "q={q} k={k} {c}");
                }
                let three = decompose_three(&f, &c, k).unwrap();
                assert!(three.verified && sums.contains(&c, 3), "q={q} k={k} {c}");
            }
        }
    }
}

fn listed_plan(row: &tables::ReferenceRow, pairs: Vec<PairSolution>) -> StructuredPlan {
    let mut entry_owner: Vec<((usize, usize), Side)> = row
        .a
        .iter()
        .map(|&(i, j)| ((i - 1, j - 1), Side::A))
        .chain(row.b.iter().map(|&(i, j)| ((i - 1, j - 1), Side::B)))
        .collect();
    entry_owner.sort_by_key(|e| e.0);
    StructuredPlan { coloring: tables::row_coloring(row), entry_owner, pairs }
}

#[test]
fn listed_splits_realize() {
    let f = field(13);
    for k in [2, 3] {
        let pairs = tri_waring::decomposer::structured_pairs(&f, Elem::ZERO, k).unwrap().to_vec();
        for row in &tables::REFERENCE_ROWS {
            let c = Presentation::parse(row.presentation, tables::row_size(row)).unwrap().to_matrix();
            let plan = listed_plan(row, pairs.clone());
            match realize_plan(&f, &c, k, &plan) {
                Ok(r) => {
                    assert!(row.split_valid, "{}", row.presentation);
                    assert!(r.verified, "{}", row.presentation);
                }
                Err(_) => assert!(!row.split_valid, "{}", row.presentation),
            }
        }
    }
}
