use std::cmp::Ordering;

use entgame_core::games::{radius_table, table_minimax};
use entgame_core::iru::{convex_member, hourglass_check, right_product, sample_conv_with_weights, Clause, IruSet};
use entgame_core::linalg::poly::compare_radius_with;
use entgame_core::linalg::{mat_mul, rationalize, spectral_radius, to_f64, Matrix, Rational, Vector};
use entgame_core::lp::{
    decide_jsr_lt, decide_jssr_ge, decide_mm_ge, decide_mm_lt, value_bisection, verify_certificate,
};
use entgame_core::random::{random_game_pair, random_iru, random_square_iru, seeded};
use entgame_core::DEFAULT_ENUM_CAP;
use proptest::prelude::*;
use rand::Rng;

fn members(s: &IruSet) -> Vec<Matrix> {
    s.enumerate(DEFAULT_ENUM_CAP).unwrap().collect()
}

fn tol() -> Rational {
    Rational::new(1.into(), 1_000_000_000.into())
}

/// Thresholds around the largest member radius.
fn thresholds(s: &IruSet) -> Vec<Rational> {
    let top = members(s).iter().map(|m| spectral_radius(m, &tol()).unwrap().value).fold(0.0, f64::max);
    [0.5, 0.97, 1.03, 1.5].iter().map(|f| rationalize(top * f + 0.01, 1000)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn right_product_lists_exactly_the_products(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_iru(&mut rng, 3, 2, 3, false);
        let b = Matrix::from_ints(&[[rng.random_range(0..3), 1, 0], [2, 0, rng.random_range(0..3)]]);
        let p = right_product(&s, &b).unwrap();
        prop_assert!(p.size() <= s.size());
        for a in members(&s) {
            prop_assert!(p.contains(&mat_mul(&a, &b).unwrap()));
        }
        for m in members(&p) {
            prop_assert!(members(&s).iter().any(|a| mat_mul(a, &b).unwrap() == m));
        }
    }

    #[test]
    fn hull_samples_mix_their_row_sets(seed in any::<u64>()) {
        let s = random_square_iru(&mut seeded(seed), 4, 3, false);
        let (m, weights) = sample_conv_with_weights(&s, seed);
        prop_assert_eq!(&convex_member(&s, &weights).unwrap(), &m);
        for (i, rs) in s.row_sets().iter().enumerate() {
            for j in 0..s.n_cols() {
                let lo = rs.rows().iter().map(|r| &r[j]).min().unwrap();
                let hi = rs.rows().iter().map(|r| &r[j]).max().unwrap();
                prop_assert!(lo <= m.get(i, j) && m.get(i, j) <= hi);
            }
        }
    }

    #[test]
    fn short_products_respect_joint_radii(seed in any::<u64>()) {
        let s = random_square_iru(&mut seeded(seed), 3, 2, false);
        let pair = entgame_core::jsr_jssr(&s, &tol()).unwrap();
        let ms = members(&s);
        let mut products: Vec<Matrix> = ms.clone();
        for k in 1..=3usize {
            for p in &products {
                let r = spectral_radius(p, &tol()).unwrap().value.powf(1.0 / k as f64);
                prop_assert!(r <= to_f64(&pair.jsr.upper) + 1e-7);
                prop_assert!(r >= to_f64(&pair.jssr.lower) - 1e-7);
            }
            if k < 3 {
                products = products.iter().flat_map(|p| ms.iter().map(move |m| mat_mul(p, m).unwrap())).collect();
            }
        }
    }

    #[test]
    fn hourglass_branches_hold_by_enumeration(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_iru(&mut rng, 3, 3, 3, false);
        let ms = members(&s);
        let w = ms[rng.random_range(0..ms.len())].clone();
        let u = Vector::column((0..3).map(|_| Rational::from_integer(rng.random_range(0..4).into())).collect());
        let v = w.mul_vec(&u).unwrap();
        let report = hourglass_check(&s, &u, &v, &w).unwrap();
        let images: Vec<Vec<Rational>> = ms.iter().map(|m| m.mul_vec(&u).unwrap().into_entries()).collect();
        let ge = |x: &[Rational]| x.iter().zip(v.entries()).all(|(a, b)| a >= b);
        let le = |x: &[Rational]| x.iter().zip(v.entries()).all(|(a, b)| a <= b);
        match &report.all_ge {
            Clause::Holds => prop_assert!(images.iter().all(|x| ge(x))),
            Clause::Counterexample(m) => {
                let x = m.mul_vec(&u).unwrap().into_entries();
                prop_assert!(s.contains(m) && le(&x) && x != v.entries());
            }
        }
        match &report.all_le {
            Clause::Holds => prop_assert!(images.iter().all(|x| le(x))),
            Clause::Counterexample(m) => {
                let x = m.mul_vec(&u).unwrap().into_entries();
                prop_assert!(s.contains(m) && ge(&x) && x != v.entries());
            }
        }
    }

    #[test]
    fn single_family_decisions_match_enumeration(seed in any::<u64>()) {
        let s = random_square_iru(&mut seeded(seed), 3, 3, false);
        let ms = members(&s);
        for alpha in thresholds(&s) {
            let orders: Vec<Ordering> = ms.iter().map(|m| compare_radius_with(m, &alpha).unwrap()).collect();
            let lt = decide_jsr_lt(&s, &alpha).unwrap();
            prop_assert_eq!(lt.holds, orders.iter().all(|o| *o == Ordering::Less));
            if let Some(c) = &lt.certificate {
                prop_assert!(verify_certificate(c, &s, None, &alpha).unwrap());
            }
            let ge = decide_jssr_ge(&s, &alpha).unwrap();
            prop_assert_eq!(ge.holds, orders.iter().all(|o| *o != Ordering::Less));
        }
    }

    #[test]
    fn strict_bound_is_monotone_in_threshold(seed in any::<u64>()) {
        let s = random_square_iru(&mut seeded(seed), 3, 2, false);
        let alphas = thresholds(&s);
        let answers: Vec<bool> = alphas.iter().map(|a| decide_jsr_lt(&s, a).unwrap().holds).collect();
        for w in answers.windows(2) {
            prop_assert!(!w[0] || w[1]);
        }
    }

    #[test]
    fn minimax_decisions_are_complementary(seed in any::<u64>()) {
        let (a, e) = random_game_pair(&mut seeded(seed), 3, 2);
        let table = radius_table(&a, &e, DEFAULT_ENUM_CAP).unwrap();
        let (value, _) = table_minimax(&table);
        for f in [0.5, 0.99, 1.01, 2.0] {
            let alpha = rationalize(value * f + 0.01, 1000);
            let lt = decide_mm_lt(&a, &e, &alpha).unwrap();
            let ge = decide_mm_ge(&a, &e, &alpha).unwrap();
            prop_assert!(lt.holds != ge.holds);
            for d in [&lt, &ge] {
                if let Some(c) = &d.certificate {
                    prop_assert!(verify_certificate(c, &a, Some(&e), &alpha).unwrap());
                }
            }
        }
    }

    #[test]
    fn bisection_brackets_the_minimax(seed in any::<u64>()) {
        let (a, e) = random_game_pair(&mut seeded(seed), 3, 2);
        let table = radius_table(&a, &e, DEFAULT_ENUM_CAP).unwrap();
        let (min_max, max_min) = table_minimax(&table);
        prop_assert!((min_max - max_min).abs() < 1e-8);
        let t = Rational::new(1.into(), 1_000_000.into());
        let iv = value_bisection(&a, &e, &t).unwrap();
        prop_assert!(iv.width() <= t);
        prop_assert!(to_f64(&iv.lower) <= min_max + 1e-9 && min_max - 1e-9 <= to_f64(&iv.upper));
    }
}
