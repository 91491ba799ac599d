//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use clap::Parser;
use entgame_cli::args::Cli;
use entgame_cli::report::ValueReport;
use entgame_core::formats::from_json;
use entgame_core::games::{
    arena_to_iru, find_saddle, forest_counts, mpg_to_weighted_eg, simulate_payoff, solve, ConstantOracle, MatrixOracle,
    MpgArena, RandomHullOracle, RandomVertexOracle, ScriptedOracle,
};
use entgame_core::iru::{hourglass_check, Clause, IruSet, RowSet};
use entgame_core::linalg::poly::{compare_radius_with, compare_spectral_radii};
use entgame_core::linalg::{mat_mul, parse_rational, rationalize, spectral_radius, to_f64, Matrix, Rational, Vector};
use entgame_core::lp::{decide_jsr_lt, decide_jssr_ge, decide_mm_ge, decide_mm_lt, verify_certificate, Certificate};
use entgame_core::machine::{
    check_nonneg_punishment, encode_integer, encode_nonneg, run_scripted_play, EvePolicy, TwoCounterMachine,
};
use entgame_core::random::{random_entry, random_game_pair, random_iru, random_mpg, random_square_iru, seeded};
use entgame_core::DEFAULT_ENUM_CAP;
use rand::Rng;

const RUNNING_VALUE: f64 = 3.561_552_812_808_830_3;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

/// `x ≤ (3+√17)/2`, decided exactly.
fn below_running_value(x: &Rational) -> bool {
    let t = x * int(2) - int(3);
    t <= int(0) || &t * &t <= int(17)
}

/// `x ≥ (3+√17)/2`, decided exactly.
fn above_running_value(x: &Rational) -> bool {
    let t = x * int(2) - int(3);
    t > int(0) && &t * &t >= int(17)
}

// ---------------------------------------------------------------------------
// Independent oracles

fn to_float(m: &Matrix) -> Vec<Vec<f64>> {
    m.to_f64()
}

fn fmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x != 0.0 {
                for j in 0..m {
                    c[i][j] += x * b[l][j];
                }
            }
        }
    }
    c
}

/// Spectral radius of a non-negative matrix as `‖M^(2^k)‖^(1/2^k)` for
/// `k = 60`, computed by renormalized repeated squaring. Entries never
/// cancel, so rounding stays at the level of machine precision.
fn gelfand_radius(m: &[Vec<f64>]) -> f64 {
    let norm = |x: &[Vec<f64>]| x.iter().flatten().sum::<f64>();
    let s = norm(m);
    if s == 0.0 {
        return 0.0;
    }
    let mut x: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| v / s).collect()).collect();
    let mut log = s.ln();
    let mut power = 1.0f64;
    for _ in 0..60 {
        x = fmul(&x, &x);
        log *= 2.0;
        power *= 2.0;
        let s = norm(&x);
        if s == 0.0 {
            return 0.0;
        }
        x.iter_mut().flatten().for_each(|v| *v /= s);
        log += s.ln();
    }
    (log / power).exp()
}

fn members(s: &IruSet) -> Vec<Matrix> {
    s.enumerate(DEFAULT_ENUM_CAP).expect("small family").collect()
}

/// `(min_A max_E ρ(AE), max_E min_A ρ(AE))` by enumeration.
fn brute_minimax(a_set: &IruSet, e_set: &IruSet) -> (f64, f64) {
    let a: Vec<_> = members(a_set).iter().map(to_float).collect();
    let e: Vec<_> = members(e_set).iter().map(to_float).collect();
    let table: Vec<Vec<f64>> = a.iter().map(|x| e.iter().map(|y| gelfand_radius(&fmul(x, y))).collect()).collect();
    let min_max = table.iter().map(|r| r.iter().copied().fold(f64::MIN, f64::max)).fold(f64::MAX, f64::min);
    let max_min = (0..e.len()).map(|j| table.iter().map(|r| r[j]).fold(f64::MAX, f64::min)).fold(f64::MIN, f64::max);
    (min_max, max_min)
}

/// Sign of `ρ(m) − α`: float oracle away from α, exact comparison near it.
fn radius_vs(m: &Matrix, alpha: &Rational) -> Ordering {
    let r = gelfand_radius(&to_float(m));
    let a = to_f64(alpha);
    if (r - a).abs() > 1e-9 * a.abs().max(1.0) {
        r.partial_cmp(&a).expect("finite radius")
    } else {
        compare_radius_with(m, alpha).expect("square matrix")
    }
}

fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.row_iter().map(|r| r.iter().zip(v).map(|(a, x)| a * x).sum()).collect()
}

/// Re-checks a minimax certificate by enumerating the opponent's members.
fn certificate_holds(cert: &Certificate, a_set: &IruSet, e_set: &IruSet, alpha: &Rational, strict: bool) -> bool {
    let Some(chosen) = &cert.chosen_matrix else { return false };
    let v = cert.vector.entries();
    let zero = int(0);
    if strict {
        if !a_set.contains(chosen) || v.iter().any(|x| x <= &zero) {
            return false;
        }
        members(e_set).iter().all(|e| {
            let p = mat_mul(e, chosen).unwrap();
            mat_vec(&p, v).iter().zip(v).all(|(l, x)| l < &(alpha * x))
        })
    } else {
        if !e_set.contains(chosen) || v.iter().any(|x| x < &zero) || v.iter().all(|x| x == &zero) {
            return false;
        }
        members(a_set).iter().all(|a| {
            let p = mat_mul(a, chosen).unwrap();
            mat_vec(&p, v).iter().zip(v).all(|(l, x)| l >= &(alpha * x))
        })
    }
}

/// Best cycle mean per full turn over positional strategy pairs, by brute
/// force on the functional graph left by each pair.
fn mpg_oracle(m: &MpgArena) -> f64 {
    let states: Vec<&String> = m.despot_states().iter().chain(m.tribune_states()).collect();
    let pos = |s: &str| states.iter().position(|x| *x == s).unwrap();
    let out: Vec<Vec<(usize, u32)>> = states
        .iter()
        .map(|s| m.edges().iter().filter(|e| &e.from == *s).map(|e| (pos(&e.to), e.weight)).collect())
        .collect();
    let nd = m.despot_states().len();
    let choices = |range: std::ops::Range<usize>| -> Vec<Vec<usize>> {
        let mut acc = vec![vec![]];
        for i in range {
            acc = acc
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..out[i].len()).map(move |k| {
                        let mut p = p.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        acc
    };
    let best_cycle = |pick: &[usize]| -> f64 {
        let mut best = f64::MIN;
        for start in 0..states.len() {
            let mut path = vec![start];
            let mut s = start;
            loop {
                s = out[s][pick[s]].0;
                if let Some(k) = path.iter().position(|&x| x == s) {
                    let cycle = &path[k..];
                    let w: u32 = cycle.iter().map(|&x| out[x][pick[x]].1).sum();
                    // A cycle alternates, so its length is twice its number of turns.
                    best = best.max(2.0 * w as f64 / cycle.len() as f64);
                    break;
                }
                path.push(s);
            }
        }
        best
    };
    choices(0..nd)
        .iter()
        .map(|sigma| {
            choices(nd..states.len())
                .iter()
                .map(|tau| best_cycle(&[sigma.clone(), tau.clone()].concat()))
                .fold(f64::MIN, f64::max)
        })
        .fold(f64::MAX, f64::min)
}

// ---------------------------------------------------------------------------
// Criteria

fn running_value() -> Result<String> {
    let start = Instant::now();
    let cli = Cli::try_parse_from(["entgame", "--json", "value", fixture("example_arena.json").to_str().unwrap()])?;
    let out = entgame_cli::run(&cli)?;
    let elapsed = start.elapsed().as_secs_f64();
    let report: ValueReport = from_json(&out.text)?;
    let (lo, hi) = (q(&report.lower), q(&report.upper));
    ensure!(&hi - &lo <= q("1/1000000"), "width {} exceeds 1e-6", to_f64(&(&hi - &lo)));
    ensure!(below_running_value(&lo), "lower bound {} above (3+sqrt 17)/2", report.lower);
    ensure!(above_running_value(&hi), "upper bound {} below (3+sqrt 17)/2", report.upper);
    ensure!(elapsed < 5.0, "took {elapsed:.2}s");
    Ok(format!("[{:.10}, {:.10}] in {elapsed:.2}s", to_f64(&lo), to_f64(&hi)))
}

fn running_strategies() -> Result<String> {
    let arena = entgame_core::formats::from_json::<entgame_core::formats::ArenaFile>(&std::fs::read_to_string(
        fixture("example_arena.json"),
    )?)?
    .to_arena()?;
    let sol = solve(&arena, &q("1/1000000"))?;
    let (a0, e0) = &sol.saddle_matrices;
    let t = &sol.translation;
    ensure!(sol.certificate.verify(&t.a_set, &t.e_set)?, "saddle certificate rejected");
    let p = mat_mul(a0, e0)?;
    let adams = members(&t.a_set);
    let eves = members(&t.e_set);
    for a in &adams {
        ensure!(compare_spectral_radii(&mat_mul(a, e0)?, &p)? != Ordering::Less, "Adam improves with {a:?}");
    }
    for e in &eves {
        ensure!(compare_spectral_radii(&mat_mul(a0, e)?, &p)? != Ordering::Greater, "Eve improves with {e:?}");
    }
    let expected =
        (Matrix::from_ints(&[[1, 1, 0], [1, 0, 1], [0, 1, 1]]), Matrix::from_ints(&[[1, 0, 0], [1, 1, 1], [0, 0, 1]]));
    let exact = (a0, e0) == (&expected.0, &expected.1);
    Ok(format!(
        "saddle checked against {}x{} opponents; {}",
        adams.len(),
        eves.len(),
        if exact { "matrices equal A0, E0" } else { "alternative saddle returned" }
    ))
}

fn example_trace() -> Result<String> {
    let arena = entgame_core::formats::from_json::<entgame_core::formats::ArenaFile>(&std::fs::read_to_string(
        fixture("example_arena.json"),
    )?)?
    .to_arena()?;
    let script = |s: &[&str]| ScriptedOracle::Script(s.iter().map(|x| x.to_string()).collect());
    let trace = forest_counts(&arena, &script(&["a", "b"]), &script(&["a", "a"]), 2)?;
    let got: Vec<Vec<String>> = trace.levels.iter().map(|l| l.iter().map(ToString::to_string).collect()).collect();
    let want = [[1, 1, 1], [2, 2, 2], [4, 2, 4], [4, 10, 4], [14, 10, 14]];
    let want: Vec<Vec<String>> = want.iter().map(|l| l.iter().map(ToString::to_string).collect()).collect();
    ensure!(got == want, "trace {got:?}");
    Ok("(1,1,1) (2,2,2) (4,2,4) (4,10,4) (14,10,14)".into())
}

fn row_translation() -> Result<String> {
    let arena = entgame_core::formats::from_json::<entgame_core::formats::ArenaFile>(&std::fs::read_to_string(
        fixture("example_arena.json"),
    )?)?
    .to_arena()?;
    let t = arena_to_iru(&arena)?;
    let a = vec![
        RowSet::from_ints(&[[1, 1, 0]]),
        RowSet::from_ints(&[[0, 1, 0], [1, 0, 1]]),
        RowSet::from_ints(&[[0, 1, 1]]),
    ];
    let e = vec![
        RowSet::from_ints(&[[0, 1, 0], [1, 0, 0]]),
        RowSet::from_ints(&[[1, 1, 1]]),
        RowSet::from_ints(&[[0, 1, 0], [0, 0, 1]]),
    ];
    ensure!(t.a_set.row_sets() == a.as_slice(), "Despot rows {:?}", t.a_set);
    ensure!(t.e_set.row_sets() == e.as_slice(), "Tribune rows {:?}", t.e_set);
    Ok("six row sets match".into())
}

fn minimax_suite() -> Result<String> {
    let start = Instant::now();
    let mut rng = seeded(5);
    let mut worst_gap = 0.0f64;
    let n = 200;
    for i in 0..n {
        let (a, e) = random_game_pair(&mut rng, 4, 3);
        let (min_max, max_min) = brute_minimax(&a, &e);
        let gap = (min_max - max_min).abs();
        worst_gap = worst_gap.max(gap);
        ensure!(gap <= 1e-8, "instance {i}: min-max {min_max} vs max-min {max_min}");
        let cert = find_saddle(&a, &e, DEFAULT_ENUM_CAP)?;
        ensure!(cert.verify(&a, &e)?, "instance {i}: saddle certificate rejected");
        let saddle = gelfand_radius(&to_float(&cert.product));
        ensure!((saddle - min_max).abs() <= 1e-8, "instance {i}: saddle value {saddle} vs {min_max}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(elapsed < 60.0, "took {elapsed:.1}s");
    Ok(format!("{n} pairs, max gap {worst_gap:.1e}, {elapsed:.1}s"))
}

fn lp_agreement() -> Result<String> {
    let mut rng = seeded(6);
    let (mut cases, mut ties) = (0, 0);
    for i in 0..200 {
        let s = random_square_iru(&mut rng, 4, 3, false);
        let all = members(&s);
        let radii: Vec<f64> = all.iter().map(|m| gelfand_radius(&to_float(m))).collect();
        let hi = radii.iter().copied().fold(f64::MIN, f64::max);
        let lo = radii.iter().copied().fold(f64::MAX, f64::min);
        let thresholds = [
            rationalize(hi, 1_000_000),
            rationalize(lo, 1_000_000),
            rationalize((hi + lo) / 2.0, 1000),
            rationalize(hi * 1.05 + 0.01, 100),
            rationalize(lo * 0.95, 100),
        ];
        for alpha in &thresholds {
            let cmp: Vec<Ordering> = all.iter().map(|m| radius_vs(m, alpha)).collect();
            let jsr_lt = cmp.iter().all(|c| *c == Ordering::Less);
            let jssr_ge = cmp.iter().all(|c| *c != Ordering::Less);
            if cmp.contains(&Ordering::Equal) {
                ties += 1;
            }
            let d1 = decide_jsr_lt(&s, alpha)?;
            let d2 = decide_jssr_ge(&s, alpha)?;
            ensure!(d1.holds == jsr_lt, "instance {i}, alpha {alpha}: jsr< said {}", d1.holds);
            ensure!(d2.holds == jssr_ge, "instance {i}, alpha {alpha}: jssr>= said {}", d2.holds);
            cases += 1;
        }
    }
    ensure!(ties > 0, "no threshold hit an exact radius");
    Ok(format!("{cases} queries, {ties} with a member radius equal to alpha"))
}

fn complementarity() -> Result<String> {
    let mut rng = seeded(7);
    let (mut queries, mut certs, mut vector_kept) = (0, 0, 0);
    let seventh = q("1/7");
    for i in 0..60 {
        let (a, e) = random_game_pair(&mut rng, 3, 3);
        let (value, _) = brute_minimax(&a, &e);
        let base = rationalize(value, 1_000_000);
        let thresholds = [base.clone(), &base + q("1/100"), &base + q("1"), (&base - q("1/100")).max(q("1/100"))];
        for alpha in &thresholds {
            let lt = decide_mm_lt(&a, &e, alpha)?;
            let ge = decide_mm_ge(&a, &e, alpha)?;
            ensure!(lt.holds != ge.holds, "instance {i}, alpha {alpha}: both or neither hold");
            queries += 1;
            for (d, strict) in [(lt, true), (ge, false)] {
                let Some(cert) = d.certificate else {
                    ensure!(!d.holds, "instance {i}: positive answer without certificate");
                    continue;
                };
                certs += 1;
                ensure!(verify_certificate(&cert, &a, Some(&e), alpha)?, "instance {i}: certificate rejected");
                ensure!(certificate_holds(&cert, &a, &e, alpha, strict), "instance {i}: certificate wrong");
                let sign = if rng.random_bool(0.5) { seventh.clone() } else { -seventh.clone() };
                // Any change to the chosen matrix leaves the family, since no
                // entry has a denominator divisible by 7.
                let mut bad = cert.clone();
                let chosen = bad.chosen_matrix.as_mut().unwrap();
                let (r, c) = (rng.random_range(0..chosen.rows()), rng.random_range(0..chosen.cols()));
                let x = chosen.get(r, c) + &sign;
                chosen.set(r, c, x);
                ensure!(
                    !verify_certificate(&bad, &a, Some(&e), alpha)?,
                    "instance {i}: perturbed chosen matrix accepted"
                );
                // A perturbed vector may still be a genuine certificate; the
                // verifier must then agree with the enumeration.
                let mut nudged = cert.clone();
                let mut v = nudged.vector.entries().to_vec();
                let k = rng.random_range(0..v.len());
                v[k] += &sign;
                nudged.vector = Vector::new(v, nudged.vector.orientation());
                let verdict = verify_certificate(&nudged, &a, Some(&e), alpha)?;
                ensure!(
                    verdict == certificate_holds(&nudged, &a, &e, alpha, strict),
                    "instance {i}: verifier disagrees with enumeration on a perturbed vector"
                );
                vector_kept += usize::from(verdict);
            }
        }
    }
    Ok(format!(
        "{queries} queries, {certs} certificates; every perturbed chosen matrix rejected, \
         {vector_kept} perturbed vectors still valid by enumeration"
    ))
}

fn constant_optimality() -> Result<String> {
    let arena = entgame_core::formats::from_json::<entgame_core::formats::ArenaFile>(&std::fs::read_to_string(
        fixture("example_arena.json"),
    )?)?
    .to_arena()?;
    let sol = solve(&arena, &q("1/1000000"))?;
    let (a0, e0) = sol.saddle_matrices.clone();
    let t = &sol.translation;
    let (mut max_up, mut min_down) = (f64::MIN, f64::MAX);
    for seed in 0..100u64 {
        let mut eve: Box<dyn MatrixOracle> = if seed % 2 == 0 {
            Box::new(RandomVertexOracle::new(t.e_set.clone(), seed))
        } else {
            Box::new(RandomHullOracle::new(t.e_set.clone(), seed))
        };
        let g = simulate_payoff(&t.a_set, &t.e_set, &mut ConstantOracle(a0.clone()), eve.as_mut(), 500)?;
        max_up = max_up.max(g.tail);
        ensure!(g.tail <= 3.5616 + 0.05, "Eve seed {seed} reached {}", g.tail);
        let mut adam: Box<dyn MatrixOracle> = if seed % 2 == 0 {
            Box::new(RandomVertexOracle::new(t.a_set.clone(), seed))
        } else {
            Box::new(RandomHullOracle::new(t.a_set.clone(), seed))
        };
        let g = simulate_payoff(&t.a_set, &t.e_set, adam.as_mut(), &mut ConstantOracle(e0.clone()), 500)?;
        min_down = min_down.min(g.tail);
        ensure!(g.tail >= 3.5616 - 0.05, "Adam seed {seed} held it to {}", g.tail);
    }
    Ok(format!("Eve at most {max_up:.4}, Adam at least {min_down:.4}"))
}

fn hourglass() -> Result<String> {
    let mut rng = seeded(9);
    let (mut holds, mut broken) = (0, 0);
    for i in 0..500 {
        let (r, c) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let s = random_iru(&mut rng, r, c, 3, false);
        let choice: Vec<usize> = s.row_sets().iter().map(|rs| rng.random_range(0..rs.len())).collect();
        let witness = s.member(&choice);
        let u: Vec<Rational> = (0..c).map(|_| random_entry(&mut rng, 3, false)).collect();
        let v = mat_vec(&witness, &u);
        let report = hourglass_check(&s, &Vector::column(u.clone()), &Vector::column(v.clone()), &witness)?;
        let images: Vec<Vec<Rational>> = members(&s).iter().map(|m| mat_vec(m, &u)).collect();
        let ge = |w: &[Rational]| w.iter().zip(&v).all(|(a, b)| a >= b);
        let le = |w: &[Rational]| w.iter().zip(&v).all(|(a, b)| a <= b);
        for (clause, all_side, other_side) in [
            (&report.all_ge, &ge as &dyn Fn(&[Rational]) -> bool, &le as &dyn Fn(&[Rational]) -> bool),
            (&report.all_le, &le, &ge),
        ] {
            match clause {
                Clause::Holds => {
                    ensure!(images.iter().all(|w| all_side(w)), "instance {i}: clause claimed but fails");
                    holds += 1;
                }
                Clause::Counterexample(m) => {
                    ensure!(s.contains(m), "instance {i}: counterexample outside the family");
                    let w = mat_vec(m, &u);
                    ensure!(other_side(&w) && w != v, "instance {i}: counterexample on the wrong side");
                    broken += 1;
                }
            }
        }
    }
    Ok(format!("500 triples, {holds} clauses hold, {broken} counterexamples"))
}

fn mpg_reduction() -> Result<String> {
    let mut rng = seeded(10);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let m = random_mpg(&mut rng, 3, 3, 3);
        let eg = mpg_to_weighted_eg(&m)?;
        let sol = solve(&eg, &q("1/1000000000"))?;
        let mid = (to_f64(&sol.value.lower) + to_f64(&sol.value.upper)) / 2.0;
        let expected = mpg_oracle(&m);
        let err = (mid.log2() - expected).abs();
        worst = worst.max(err);
        ensure!(err <= 1e-4, "instance {i}: log2 value {} vs mean payoff {expected}", mid.log2());
    }
    Ok(format!("20 games, max error {worst:.1e}"))
}

fn machine(name: &str) -> Result<TwoCounterMachine> {
    let text = std::fs::read_to_string(fixture(name)).with_context(|| name.to_string())?;
    Ok(TwoCounterMachine::parse(&text)?)
}

fn two_counter_encodings() -> Result<String> {
    let looping = machine("counter_loop.cm")?;
    let g = encode_integer(&looping);
    let play = run_scripted_play(&g, &looping, 50, &EvePolicy::Faithful)?;
    ensure!(play.turns.len() == 50, "play stopped after {} turns", play.turns.len());
    let e = g.coordinate("E").context("E coordinate")?;
    for t in &play.turns {
        ensure!(t.vector.iter().all(|x| x >= &int(0)) && t.vector[e] >= int(1), "invariant broken on turn {}", t.turn);
    }
    ensure!(play.invariant_held(), "report flags a violation");

    let halting = ["inc_stop.cm", "test_stop.cm", "two_counters.cm"];
    let mut zero_turns = Vec::new();
    for name in halting {
        let m = machine(name)?;
        let g = encode_integer(&m);
        let play = run_scripted_play(&g, &m, 60, &EvePolicy::Faithful)?;
        let mut product = Matrix::identity(g.dimension);
        for t in &play.turns {
            product = mat_mul(&product, g.adam_matrix(&t.adam).context("Adam matrix")?)?;
            product = mat_mul(&product, g.eve_matrix(&t.eve).context("Eve matrix")?)?;
        }
        ensure!(product.is_zero(), "{name}: product not annihilated in {} turns", play.turns.len());
        zero_turns.push(format!("{name} at {}", play.annihilated_at.unwrap_or(0)));
    }

    let g = encode_nonneg(&looping);
    let r = check_nonneg_punishment(&g, &looping, 40)?;
    ensure!(!r.halting, "looping machine halts");
    ensure!(r.magnitude_ok(), "report flags magnitudes below 2^n at {:?}", r.magnitude_failures);
    // Replay the faithful run directly: v <- v * Id * E_t.
    let mut v = g.initial_vector();
    let mut bound = int(1);
    for (n, t) in looping.run(40).iter().enumerate() {
        let e = g.eve_matrix(&looping.transition_name(t)).context("Eve matrix")?;
        v = (0..e.cols()).map(|j| v.iter().enumerate().map(|(i, x)| x * e.get(i, j)).sum()).collect();
        bound *= int(2);
        let top = v.iter().max().cloned().unwrap_or_else(|| int(0));
        ensure!(top >= bound, "magnitude {top} below 2^{} on turn {}", n + 1, n + 1);
    }
    let mut growths = Vec::new();
    for name in ["inc_stop.cm", "test_stop.cm", "two_counters.cm", "count_down.cm"] {
        let m = machine(name)?;
        let r = check_nonneg_punishment(&encode_nonneg(&m), &m, 40)?;
        ensure!(r.halting, "{name} does not halt");
        ensure!(!r.factors.is_empty(), "{name}: no factors");
        let growth = r.max_factor_growth().unwrap_or(0.0);
        ensure!(r.factors.iter().all(|f| f.growth() < 2.0), "{name}: factor growth {growth}");
        growths.push(growth);
    }
    let worst = growths.iter().copied().fold(0.0, f64::max);
    Ok(format!("invariant held 50 turns; zero product: {}; max factor growth {worst:.3}", zero_turns.join(", ")))
}

fn spectral_suite() -> Result<String> {
    let tol = q("1/10000000000");
    let cases: [(Matrix, f64); 4] = [
        (Matrix::from_ints(&[[2, 1, 1], [1, 0, 1], [1, 1, 2]]), RUNNING_VALUE),
        (Matrix::identity(4), 1.0),
        (Matrix::from_ints(&[[1, 1], [1, 1]]), 2.0),
        (Matrix::from_ints(&[[0, 1], [1, 0]]), 1.0),
    ];
    for (i, (m, want)) in cases.iter().enumerate() {
        let est = spectral_radius(m, &tol)?;
        ensure!((est.value - want).abs() <= 1e-9, "case {i}: {} vs {want}", est.value);
        let contained = if i == 0 {
            below_running_value(&est.lower) && above_running_value(&est.upper)
        } else {
            est.contains(&rationalize(*want, 1))
        };
        ensure!(contained, "case {i}: enclosure [{}, {}] misses {want}", est.lower, est.upper);
    }
    Ok("four reference matrices within 1e-9, enclosures contain the reference".into())
}

type Check = fn() -> Result<String>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("running-example value", running_value),
        ("running-example strategies", running_strategies),
        ("forest trace", example_trace),
        ("row-set translation", row_translation),
        ("minimax property", minimax_suite),
        ("LP vs enumeration", lp_agreement),
        ("minimax complementarity", complementarity),
        ("constant-strategy optimality", constant_optimality),
        ("hourglass alternative", hourglass),
        ("mean-payoff reduction", mpg_reduction),
        ("two-counter encodings", two_counter_encodings),
        ("spectral radius suite", spectral_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(anyhow::anyhow!("panicked: {}", panic_message(&p))));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({e:#})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
