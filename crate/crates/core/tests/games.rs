use std::collections::BTreeMap;

use entgame_core::games::{
    arena_to_iru, find_saddle, forest_counts, mpg_to_weighted_eg, mpg_value_brute_force, radius_table, simulate_payoff,
    solve, solve_sets, table_minimax, ConstantOracle, RandomVertexOracle, ScriptedOracle,
};
use entgame_core::linalg::{mat_mul, to_f64, Matrix, Rational};
use entgame_core::random::{random_arena, random_game_pair, random_mpg, seeded};
use entgame_core::{Arena, Player, PositionalStrategy, DEFAULT_ENUM_CAP};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

fn random_positional<R: Rng>(rng: &mut R, arena: &Arena, player: Player) -> PositionalStrategy {
    let map: BTreeMap<String, String> = arena
        .states(player)
        .iter()
        .map(|s| {
            let acts = arena.actions(s);
            (s.clone(), acts[rng.random_range(0..acts.len())].to_string())
        })
        .collect();
    PositionalStrategy::new(arena, player, map).unwrap()
}

fn entry_sum(m: &Matrix) -> Rational {
    m.entries().iter().sum()
}

fn tol() -> Rational {
    Rational::new(1.into(), 1_000_000.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forest_levels_are_product_norms(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let arena = random_arena(&mut rng, 3, 3, 2, 2);
        let sigma = random_positional(&mut rng, &arena, Player::Despot);
        let tau = random_positional(&mut rng, &arena, Player::Tribune);
        let t = arena_to_iru(&arena).unwrap();
        let a = t.matrix_of(&arena, &sigma).unwrap();
        let e = t.matrix_of(&arena, &tau).unwrap();
        let step = mat_mul(&a, &e).unwrap();
        let trace = forest_counts(&arena, &ScriptedOracle::Positional(sigma), &ScriptedOracle::Positional(tau), 6).unwrap();
        let mut power = Matrix::identity(step.rows());
        for n in 0..=6 {
            let count = Rational::from_integer(BigInt::from(trace.level_sum(2 * n)));
            prop_assert_eq!(count, entry_sum(&power));
            power = mat_mul(&power, &step).unwrap();
        }
    }

    #[test]
    fn random_pairs_have_certified_saddles(seed in any::<u64>()) {
        let (a, e) = random_game_pair(&mut seeded(seed), 3, 3);
        let table = radius_table(&a, &e, DEFAULT_ENUM_CAP).unwrap();
        let (min_max, max_min) = table_minimax(&table);
        prop_assert!((min_max - max_min).abs() <= 1e-8);
        let cert = find_saddle(&a, &e, DEFAULT_ENUM_CAP).unwrap();
        prop_assert!(cert.verify(&a, &e).unwrap());
        let sol = solve_sets(&a, &e, &tol()).unwrap();
        prop_assert!(to_f64(&sol.value.lower) - 1e-9 <= min_max && min_max <= to_f64(&sol.value.upper) + 1e-9);
    }

    #[test]
    fn solved_arenas_are_consistent(seed in any::<u64>()) {
        let arena = random_arena(&mut seeded(seed), 2, 3, 2, 3);
        let sol = solve(&arena, &tol()).unwrap();
        let t = &sol.translation;
        prop_assert!(sol.certificate.verify(&t.a_set, &t.e_set).unwrap());
        prop_assert_eq!(&t.matrix_of(&arena, &sol.despot_strategy).unwrap(), &sol.saddle_matrices.0);
        prop_assert_eq!(&t.matrix_of(&arena, &sol.tribune_strategy).unwrap(), &sol.saddle_matrices.1);
        prop_assert!(sol.value.width() <= tol());
    }

    #[test]
    fn mpg_reduction_matches_brute_force(seed in any::<u64>()) {
        let m = random_mpg(&mut seeded(seed), 2, 2, 3);
        let arena = mpg_to_weighted_eg(&m).unwrap();
        let sol = solve(&arena, &Rational::new(1.into(), 100_000_000.into())).unwrap();
        let mid = to_f64(&((&sol.value.lower + &sol.value.upper) / Rational::from_integer(2.into())));
        let oracle = to_f64(&mpg_value_brute_force(&m).unwrap());
        prop_assert!((mid.log2() - oracle).abs() < 1e-4, "log2 {} vs {}", mid.log2(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn saddle_strategies_bound_random_opponents(seed in any::<u64>()) {
        let (a, e) = random_game_pair(&mut seeded(seed), 3, 2);
        let sol = solve_sets(&a, &e, &tol()).unwrap();
        let value = to_f64(&sol.value.upper);
        let mut adam = ConstantOracle(sol.saddle.a0.clone());
        let mut eve = RandomVertexOracle::new(e.clone(), seed);
        let up = simulate_payoff(&a, &e, &mut adam, &mut eve, 300).unwrap();
        prop_assert!(up.trend <= value + 0.05, "trend {} above value {}", up.trend, value);
        let mut adam = RandomVertexOracle::new(a.clone(), seed ^ 1);
        let mut eve = ConstantOracle(sol.saddle.e0.clone());
        let down = simulate_payoff(&a, &e, &mut adam, &mut eve, 300).unwrap();
        if down.zero_at.is_none() {
            prop_assert!(down.trend >= to_f64(&sol.value.lower) - 0.05);
        }
    }
}
