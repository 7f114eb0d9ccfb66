use lewislab_core::lewis::{build_extended_system, build_full_system, build_reduced_system};
use lewislab_core::{coset_table, rank_exact, rank_modular, GroupSpec, IntMatrix, Lambda, RankStrategy};
use proptest::prelude::*;

fn group(spec: &str) -> GroupSpec {
    spec.parse().unwrap()
}

#[test]
fn full_system_splits_into_both_eigenvalues() {
    for (spec, n) in [("gamma:2", 6), ("gamma:3", 4), ("gamma0:5", 6), ("gamma0:4", 4), ("gamma0:11", 2)] {
        let table = coset_table(group(spec)).unwrap();
        let ext: usize = Lambda::BOTH
            .iter()
            .map(|&l| build_extended_system(&table, n, l).unwrap().dim(RankStrategy::Exact))
            .sum();
        for l in Lambda::BOTH {
            let full = build_full_system(&table, n, l).unwrap().dim(RankStrategy::Exact);
            assert_eq!(full, ext, "{spec} n={n} λ={l}");
        }
    }
}

#[test]
fn extended_agrees_with_reduced_at_level_two() {
    for spec in ["gamma:2", "gamma0:2"] {
        let table = coset_table(group(spec)).unwrap();
        for n in (2..=12).step_by(2) {
            for l in Lambda::BOTH {
                let e = build_extended_system(&table, n, l).unwrap().dim(RankStrategy::Exact);
                let r = build_reduced_system(&table, n, l).unwrap().dim(RankStrategy::Exact);
                assert_eq!(e, r, "{spec} n={n} λ={l}");
            }
        }
    }
}

#[test]
fn gamma02_split_by_eigenvalue() {
    let table = coset_table(group("gamma0:2")).unwrap();
    let got: Vec<(usize, usize)> = [2, 4, 6, 8]
        .iter()
        .map(|&n| {
            let d = |l| build_extended_system(&table, n, l).unwrap().dim(RankStrategy::Exact);
            (d(Lambda::Plus), d(Lambda::Minus))
        })
        .collect();
    assert_eq!(got, vec![(0, 2), (0, 2), (1, 3), (1, 3)]);
}

fn sparse_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..10, 1usize..10).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -50i64..50], c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modular_rank_matches_exact(m in sparse_matrix()) {
        prop_assert_eq!(rank_modular(&m).rank, rank_exact(&m).rank);
    }

    #[test]
    fn rank_is_transpose_invariant(m in sparse_matrix()) {
        let dense = m.to_dense();
        let t: Vec<Vec<_>> = (0..m.cols()).map(|c| dense.iter().map(|row| row[c].clone()).collect()).collect();
        prop_assert_eq!(rank_exact(&IntMatrix::from_rows(&t)).rank, rank_exact(&m).rank);
    }

    #[test]
    fn relabeling_keeps_dimension(seed in any::<u64>(), n in prop::sample::select(vec![2u32, 4, 6])) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let table = coset_table(group("gamma0:7")).unwrap();
        let mut relabel: Vec<usize> = (0..table.size()).collect();
        relabel.shuffle(&mut rng);
        let other = table.relabeled(&relabel);
        for l in Lambda::BOTH {
            let a = build_extended_system(&table, n, l).unwrap().dim(RankStrategy::Exact);
            let b = build_extended_system(&other, n, l).unwrap().dim(RankStrategy::Exact);
            prop_assert_eq!(a, b);
        }
    }
}
