use proptest::collection::vec;
use proptest::prelude::*;

use sg_core::lemke_howson::{
    degeneracy_witness, labels_of, lemke_howson, support_enumeration, LemkeHowson, RationalBimatrix, Side,
};
use sg_core::BimatrixGame;

fn nondegenerate_game(max: usize) -> impl Strategy<Value = BimatrixGame> {
    (2..=max, 2..=max)
        .prop_flat_map(|(l, m)| (vec(vec(1i32..=9, m), l), vec(vec(1i32..=9, m), l)))
        .prop_map(|(a, b)| {
            let f = |r: Vec<Vec<i32>>| -> Vec<Vec<f64>> {
                r.into_iter().map(|row| row.into_iter().map(f64::from).collect()).collect()
            };
            BimatrixGame::from_rows(&f(a), &f(b)).unwrap()
        })
        .prop_filter("nondegenerate", |g| {
            degeneracy_witness(&RationalBimatrix::from_game(g).unwrap()).unwrap().is_none()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn equilibrium_count_is_odd(game in nondegenerate_game(4)) {
        let all = support_enumeration(&game).unwrap();
        prop_assert_eq!(all.len() % 2, 1, "{} equilibria", all.len());
    }

    #[test]
    fn endpoints_belong_to_oracle_set(game in nondegenerate_game(4)) {
        let all = support_enumeration(&game).unwrap();
        for k in 1..=game.rows() + game.cols() {
            let out = lemke_howson(&game, k).unwrap();
            prop_assert!(all.iter().any(|e| e.same_strategies(&out.equilibrium)), "label {}", k);
        }
    }

    #[test]
    fn paths_are_almost_completely_labelled_and_feasible(game in nondegenerate_game(4)) {
        let lh = LemkeHowson::new(&game).unwrap();
        let exact = lh.exact_game();
        let n = lh.num_labels();
        for k in 1..=n {
            let run = lh.follow(&lh.artificial(), k).unwrap();
            let steps = &run.path.steps;
            prop_assert!(!run.path.degenerate);
            for (idx, step) in steps.iter().enumerate() {
                // exact feasibility, and the tableau's labels agree with the geometry
                let lx = labels_of(&step.vertex.x, Side::X, exact).unwrap();
                let ly = labels_of(&step.vertex.y, Side::Y, exact).unwrap();
                prop_assert_eq!(&lx, &step.labels.0);
                prop_assert_eq!(&ly, &step.labels.1);
                let union = lx.union(&ly);
                if idx + 1 == steps.len() {
                    prop_assert_eq!(union.len(), n);
                } else {
                    prop_assert_eq!(union.len(), n - 1);
                    prop_assert!(!union.contains(k));
                    // exactly one label is carried by both vertices
                    prop_assert_eq!(lx.intersection(&ly).len(), 1);
                }
            }
        }
    }

    #[test]
    fn dropping_the_label_again_walks_back(game in nondegenerate_game(4)) {
        let lh = LemkeHowson::new(&game).unwrap();
        for k in 1..=lh.num_labels() {
            let forward = lh.follow(&lh.artificial(), k).unwrap();
            let back = lh.follow(&forward.end, k).unwrap();
            prop_assert!(back.path.end.is_artificial());
            let mut there: Vec<_> = std::iter::once(forward.path.start.clone())
                .chain(forward.path.steps.iter().map(|s| s.vertex.clone()))
                .collect();
            there.reverse();
            let home: Vec<_> = std::iter::once(back.path.start.clone())
                .chain(back.path.steps.iter().map(|s| s.vertex.clone()))
                .collect();
            prop_assert_eq!(there, home);
        }
    }
}
