use proptest::collection::vec;
use proptest::prelude::*;

use sg_core::qre::{
    fixed_point_residual, invert_beta_on_surface, jacobian_terms, logit_response, solve_qre_fixed_points,
    trace_critical_set, LogitGame2x2, LogitParams, QCoordinates,
};
use sg_core::BimatrixGame;

fn game_2x2() -> impl Strategy<Value = LogitGame2x2> {
    vec(-5.0f64..5.0, 8).prop_map(|v| {
        let g = BimatrixGame::from_rows(&[vec![v[0], v[1]], vec![v[2], v[3]]], &[vec![v[4], v[5]], vec![v[6], v[7]]])
            .unwrap();
        LogitGame2x2::new(&g).unwrap()
    })
}

fn relative(fd: f64, cf: f64) -> f64 {
    (fd - cf).abs() / cf.abs().max(1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fixed_points_have_small_residual(game in game_2x2(), b1 in 0.0f64..30.0, b2 in 0.0f64..30.0) {
        let betas = LogitParams::pair(b1, b2).unwrap();
        let nf = game.game().to_normal_form();
        for fp in solve_qre_fixed_points(&game, &betas).unwrap() {
            prop_assert!(fp.residual <= 1e-10);
            prop_assert!(fixed_point_residual(&nf, &fp.profile, &betas).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn zero_beta_gives_the_centroid(game in game_2x2()) {
        let points = solve_qre_fixed_points(&game, &LogitParams::pair(0.0, 0.0).unwrap()).unwrap();
        prop_assert_eq!(points.len(), 1);
        for d in points[0].profile.distributions() {
            prop_assert_eq!(d, &vec![0.5, 0.5]);
        }
    }

    #[test]
    fn count_is_odd_off_the_locus(game in game_2x2(), b1 in 0.0f64..20.0, b2 in 0.0f64..20.0) {
        let points = solve_qre_fixed_points(&game, &LogitParams::pair(b1, b2).unwrap()).unwrap();
        // tangent roots sit on or next to the branch locus
        prop_assume!(points.iter().all(|p| !p.near_tangent));
        prop_assert_eq!(points.len() % 2, 1, "{} points", points.len());
    }

    #[test]
    fn tanh_form_is_the_logit_response(game in game_2x2(), b1 in 0.0f64..30.0, b2 in 0.0f64..30.0, p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
        let betas = LogitParams::pair(b1, b2).unwrap();
        let q = QCoordinates::from_probabilities(p1, p2);
        let r = logit_response(&game.game().to_normal_form(), &q.to_profile(), &betas).unwrap();
        prop_assert!((r.agent(0)[0] - game.response_p(0, b1, p2)).abs() <= 1e-14);
        prop_assert!((r.agent(1)[0] - game.response_p(1, b2, p1)).abs() <= 1e-14);
        prop_assert!((2.0 * r.agent(0)[0] - 1.0 - game.response_q(0, b1, q.q2)).abs() <= 1e-14);
        let back = QCoordinates::from_profile(&q.to_profile());
        prop_assert!((back.q1 - q.q1).abs() <= 1e-15 && (back.q2 - q.q2).abs() <= 1e-15);
    }

    #[test]
    fn partials_match_central_differences(
        game in game_2x2(),
        q1 in -0.95f64..0.95,
        q2 in -0.95f64..0.95,
        b1 in 0.0f64..10.0,
        b2 in 0.0f64..10.0,
    ) {
        let q = QCoordinates::new(q1, q2);
        let terms = jacobian_terms(&game, q, &LogitParams::pair(b1, b2).unwrap());
        let h = 1e-5;
        let b = [b1, b2];
        for i in 0..2 {
            let other = q.get(1 - i);
            let f = |qo: f64, beta: f64| game.response_q(i, beta, qo);
            let fd1 = (f(other + h, b[i]) - f(other - h, b[i])) / (2.0 * h);
            let fd2 = (f(other, b[i] + h) - f(other, b[i] - h)) / (2.0 * h);
            prop_assert!(relative(fd1, terms.f1[i]) < 1e-5, "f1[{}] {} vs {}", i, terms.f1[i], fd1);
            prop_assert!(relative(fd2, terms.f2[i]) < 1e-5, "f2[{}] {} vs {}", i, terms.f2[i], fd2);
        }
    }

    #[test]
    fn inverted_beta_reproduces_q(game in game_2x2(), q1 in -0.99f64..0.99, q2 in -0.99f64..0.99) {
        let q = QCoordinates::new(q1, q2);
        if let Ok(betas) = invert_beta_on_surface(&game, q) {
            prop_assert!((game.response_q(0, betas.beta(0), q2) - q1).abs() <= 1e-12);
            prop_assert!((game.response_q(1, betas.beta(1), q1) - q2).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn critical_points_lie_on_the_surface(game in game_2x2()) {
        let nf = game.game().to_normal_form();
        for curve in trace_critical_set(&game, 64).unwrap() {
            for p in &curve.points {
                prop_assert!(p.critical_value.abs() <= 1e-8);
                let betas = LogitParams::pair(p.beta1, p.beta2).unwrap();
                let q = QCoordinates::new(p.q1, p.q2);
                let r = QCoordinates::from_profile(&logit_response(&nf, &q.to_profile(), &betas).unwrap());
                prop_assert!((r.q1 - p.q1).abs() <= 1e-8 && (r.q2 - p.q2).abs() <= 1e-8);
            }
        }
    }
}
