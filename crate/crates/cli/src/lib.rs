//! Command implementations behind the `entgame` binary.

pub mod args;
pub mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use entgame_core::formats::{
    read_game, to_json, ArenaFile, CertificateFile, EncodedFile, GameInput, MatrixSetFile, MpgFile, PairFile,
};
use entgame_core::games::{
    arena_to_iru, find_saddle, forest_counts, mpg_to_weighted_eg, mpg_value_brute_force, simulate_payoff,
    solve_sets_with_cap, solve_with_cap, ConstantOracle, MatrixOracle, RandomHullOracle, RandomVertexOracle,
    ScriptedOracle,
};
use entgame_core::linalg::{format_rational, parse_rational, to_f64, Matrix, Rational};
use entgame_core::lp::{
    decide_jsr_le, decide_jsr_lt, decide_jssr_ge, decide_jssr_gt, decide_mm_ge_with_cap, decide_mm_le_with_cap,
    decide_mm_lt_with_cap, verify_certificate,
};
use entgame_core::machine::{
    check_nonneg_punishment, encode_integer, encode_nonneg, run_scripted_play, EvePolicy, TwoCounterMachine,
};
use entgame_core::{Arena, IruSet, Player, PositionalStrategy};

use args::{Cli, Command, Query, Side, VariantArg};
use report::{
    CheckReport, DecideReport, FactorEntry, IntegerCheck, MpgReport, NonnegCheck, SimulateReport, ValueReport,
};

/// Text to print and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    if let Some(n) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if cli.cap == 0 {
        bail!("enumeration cap must be at least 1");
    }
    match &cli.command {
        Command::Translate { arena } => translate(arena),
        Command::Value { file, tol } => value(cli, file, tol),
        Command::Decide { file, query, alpha, family } => decide(cli, file, *query, alpha, *family),
        Command::Simulate { file, despot, tribune, turns } => simulate(cli, file, despot, tribune, *turns),
        Command::Encode2cmm { machine, variant } => encode(machine, *variant),
        Command::Check2cmm { machine, turns } => check(cli, machine, *turns),
        Command::Mpg { file, solve, tol } => mpg(cli, file, *solve, tol),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_arena(path: &Path) -> Result<Arena> {
    let file: ArenaFile =
        serde_json::from_str(&read(path)?).with_context(|| format!("{} is not an arena", path.display()))?;
    Ok(file.to_arena()?)
}

fn read_machine(path: &Path) -> Result<TwoCounterMachine> {
    TwoCounterMachine::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn positive_rational(s: &str, what: &str) -> Result<Rational> {
    let r = parse_rational(s).with_context(|| format!("bad {what} {s:?}"))?;
    if r <= Rational::from_integer(0.into()) {
        bail!("{what} must be positive");
    }
    Ok(r)
}

fn texts(m: &Matrix) -> Vec<Vec<String>> {
    m.row_iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

fn strategy_map(s: &PositionalStrategy, arena: &Arena, player: Player) -> BTreeMap<String, String> {
    arena.states(player).iter().filter_map(|st| s.action(st).map(|a| (st.clone(), a.to_string()))).collect()
}

fn translate(path: &Path) -> Result<Output> {
    let t = arena_to_iru(&read_arena(path)?)?;
    Ok(Output::ok(to_json(&PairFile::from_sets(&t.a_set, &t.e_set))))
}

fn value(cli: &Cli, path: &Path, tol: &str) -> Result<Output> {
    let tol = positive_rational(tol, "tolerance")?;
    let report = match read_game(&read(path)?)? {
        GameInput::Arena(arena) => {
            let sol = solve_with_cap(&arena, &tol, cli.cap)?;
            let t = &sol.translation;
            ValueReport {
                lower: format_rational(&sol.value.lower),
                upper: format_rational(&sol.value.upper),
                lower_decimal: to_f64(&sol.value.lower),
                upper_decimal: to_f64(&sol.value.upper),
                adam_matrix: texts(&sol.saddle_matrices.0),
                eve_matrix: texts(&sol.saddle_matrices.1),
                despot_strategy: Some(strategy_map(&sol.despot_strategy, &arena, Player::Despot)),
                tribune_strategy: Some(strategy_map(&sol.tribune_strategy, &arena, Player::Tribune)),
                saddle_verified: sol.certificate.verify_with_cap(&t.a_set, &t.e_set, cli.cap)?,
            }
        }
        GameInput::Pair(a, e) => {
            let sol = solve_sets_with_cap(&a, &e, &tol, cli.cap)?;
            ValueReport {
                lower: format_rational(&sol.value.lower),
                upper: format_rational(&sol.value.upper),
                lower_decimal: to_f64(&sol.value.lower),
                upper_decimal: to_f64(&sol.value.upper),
                adam_matrix: texts(&sol.saddle.a0),
                eve_matrix: texts(&sol.saddle.e0),
                despot_strategy: None,
                tribune_strategy: None,
                saddle_verified: sol.saddle.verify_with_cap(&a, &e, cli.cap)?,
            }
        }
    };
    if cli.json {
        return Ok(Output::ok(to_json(&report)));
    }
    let mut out = String::new();
    writeln!(out, "value in [{:.10}, {:.10}]", report.lower_decimal, report.upper_decimal)?;
    writeln!(out, "exact bounds: {} .. {}", report.lower, report.upper)?;
    for (label, strat) in [("despot", &report.despot_strategy), ("tribune", &report.tribune_strategy)] {
        if let Some(s) = strat {
            let parts: Vec<String> = s.iter().map(|(st, a)| format!("{st} -> {a}")).collect();
            writeln!(out, "{label} strategy: {}", parts.join(", "))?;
        }
    }
    writeln!(out, "adam matrix: {}", show(&report.adam_matrix))?;
    writeln!(out, "eve matrix: {}", show(&report.eve_matrix))?;
    writeln!(out, "saddle certificate: {}", if report.saddle_verified { "verified" } else { "FAILED" })?;
    Ok(Output::ok(out))
}

fn show(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

/// Single family for one-family queries, or the pair for minimax ones.
enum Families {
    One(IruSet),
    Two(IruSet, IruSet),
}

fn read_families(path: &Path, minimax: bool, side: Side) -> Result<Families> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("row_sets").is_some() {
        if minimax {
            bail!("a minimax query needs a pair file or an arena");
        }
        let file: MatrixSetFile = serde_json::from_value(value)?;
        return Ok(Families::One(file.to_iru()?));
    }
    let (a, e) = match read_game(&text)? {
        GameInput::Arena(arena) => {
            let t = arena_to_iru(&arena)?;
            (t.a_set, t.e_set)
        }
        GameInput::Pair(a, e) => (a, e),
    };
    Ok(match (minimax, side) {
        (true, _) => Families::Two(a, e),
        (false, Side::Adam) => Families::One(a),
        (false, Side::Eve) => Families::One(e),
    })
}

fn decide(cli: &Cli, path: &Path, query: Query, alpha: &str, side: Side) -> Result<Output> {
    let alpha_r = parse_rational(alpha).with_context(|| format!("bad threshold {alpha:?}"))?;
    let families = read_families(path, query.is_minimax(), side)?;
    let (decision, verified) = match (&families, query) {
        (Families::One(s), _) => {
            let d = match query {
                Query::JsrLt => decide_jsr_lt(s, &alpha_r)?,
                Query::JsrLe => decide_jsr_le(s, &alpha_r)?,
                Query::JssrGt => decide_jssr_gt(s, &alpha_r)?,
                Query::JssrGe => decide_jssr_ge(s, &alpha_r)?,
                _ => unreachable!("minimax queries read two families"),
            };
            let v = d.certificate.as_ref().map(|c| verify_certificate(c, s, None, &alpha_r)).transpose()?;
            (d, v)
        }
        (Families::Two(a, e), _) => {
            let d = match query {
                Query::MmLt => decide_mm_lt_with_cap(a, e, &alpha_r, cli.cap)?,
                Query::MmGe => decide_mm_ge_with_cap(a, e, &alpha_r, cli.cap)?,
                Query::MmLe => decide_mm_le_with_cap(a, e, &alpha_r, cli.cap)?,
                _ => unreachable!("single-family queries read one family"),
            };
            let v = d.certificate.as_ref().map(|c| verify_certificate(c, a, Some(e), &alpha_r)).transpose()?;
            (d, v)
        }
    };
    let name = args_query_name(query);
    let report = DecideReport {
        query: name.to_string(),
        alpha: format_rational(&alpha_r),
        holds: decision.holds,
        certificate: decision.certificate.as_ref().map(CertificateFile::from_certificate),
        certificate_verified: verified,
    };
    let text = if cli.json {
        to_json(&report)
    } else {
        let mut out = format!("{name} {}: {}\n", report.alpha, if report.holds { "true" } else { "false" });
        if let Some(c) = &report.certificate {
            writeln!(out, "certificate vector: ({})", c.vector.join(", "))?;
            if let Some(m) = &c.chosen_matrix {
                writeln!(out, "chosen matrix: {}", show(m))?;
            }
            writeln!(out, "certificate check: {}", if verified == Some(true) { "passed" } else { "FAILED" })?;
        }
        out
    };
    Ok(Output { text, code: if report.holds { 0 } else { 1 } })
}

fn args_query_name(q: Query) -> &'static str {
    match q {
        Query::JsrLt => "jsr<",
        Query::JsrLe => "jsr<=",
        Query::JssrGt => "jssr>",
        Query::JssrGe => "jssr>=",
        Query::MmLt => "mm<",
        Query::MmGe => "mm>=",
        Query::MmLe => "mm<=",
    }
}

fn split_spec(spec: &str) -> (&str, &str) {
    spec.split_once(':').unwrap_or((spec, ""))
}

fn script_actions(arena: &Arena, body: &str) -> Vec<String> {
    if body.contains(',') || arena.alphabet().iter().any(|a| a == body) {
        return body.split(',').map(|s| s.trim().to_string()).collect();
    }
    body.chars().map(String::from).collect()
}

fn arena_oracle(
    arena: &Arena,
    player: Player,
    spec: &str,
    optimal: &dyn Fn() -> Result<PositionalStrategy>,
) -> Result<ScriptedOracle> {
    let (kind, body) = split_spec(spec);
    Ok(match kind {
        "optimal" => ScriptedOracle::Positional(optimal()?),
        "positional" => {
            let mut map = BTreeMap::new();
            for part in body.split(',').filter(|p| !p.is_empty()) {
                let (s, a) = part.split_once('=').with_context(|| format!("expected state=action, got {part:?}"))?;
                map.insert(s.trim().to_string(), a.trim().to_string());
            }
            ScriptedOracle::Positional(PositionalStrategy::new(arena, player, map)?)
        }
        "script" => {
            let actions = script_actions(arena, body);
            if actions.is_empty() || actions.iter().any(|a| !arena.alphabet().contains(a)) {
                bail!("script {body:?} uses actions outside the alphabet");
            }
            ScriptedOracle::Script(actions)
        }
        "random" => ScriptedOracle::random(arena, body.parse().context("random:SEED needs an integer seed")?),
        _ => bail!("unknown strategy {spec:?} for an arena"),
    })
}

fn pair_oracle(set: &IruSet, spec: &str, optimal: &Matrix) -> Result<Box<dyn MatrixOracle>> {
    let (kind, body) = split_spec(spec);
    Ok(match kind {
        "optimal" => Box::new(ConstantOracle(optimal.clone())),
        "constant" => {
            let choice: Vec<usize> = body
                .split(',')
                .map(|c| c.trim().parse().context("constant:I,J,.. needs row indices"))
                .collect::<Result<_>>()?;
            if choice.len() != set.n_rows() || choice.iter().zip(set.row_sets()).any(|(&c, r)| c >= r.len()) {
                bail!("constant choice {body:?} does not fit the family");
            }
            Box::new(ConstantOracle(set.member(&choice)))
        }
        "random" => {
            Box::new(RandomVertexOracle::new(set.clone(), body.parse().context("random:SEED needs an integer seed")?))
        }
        "hull" => {
            Box::new(RandomHullOracle::new(set.clone(), body.parse().context("hull:SEED needs an integer seed")?))
        }
        _ => bail!("unknown strategy {spec:?} for a matrix pair"),
    })
}

fn simulate(cli: &Cli, path: &Path, despot: &str, tribune: &str, turns: usize) -> Result<Output> {
    let report = match read_game(&read(path)?)? {
        GameInput::Arena(arena) => {
            let tol = Rational::new(1.into(), 1_000_000.into());
            let solved = std::cell::OnceCell::new();
            let solution = || -> Result<_> {
                if solved.get().is_none() {
                    let _ = solved.set(solve_with_cap(&arena, &tol, cli.cap)?);
                }
                Ok(solved.get().unwrap())
            };
            let d = arena_oracle(&arena, Player::Despot, despot, &|| Ok(solution()?.despot_strategy.clone()))?;
            let t = arena_oracle(&arena, Player::Tribune, tribune, &|| Ok(solution()?.tribune_strategy.clone()))?;
            let trace = forest_counts(&arena, &d, &t, turns)?;
            let growth = trace.growth();
            SimulateReport::Forest {
                despot_states: trace.despot_states.clone(),
                tribune_states: trace.tribune_states.clone(),
                levels: trace.levels.iter().map(|l| l.iter().map(|c| c.to_string()).collect()).collect(),
                tail: growth.tail,
                trend: growth.trend,
            }
        }
        GameInput::Pair(a, e) => {
            let saddle =
                if despot == "optimal" || tribune == "optimal" { Some(find_saddle(&a, &e, cli.cap)?) } else { None };
            let empty = Matrix::zeros(0, 0);
            let (a0, e0) = saddle.as_ref().map_or((&empty, &empty), |s| (&s.a0, &s.e0));
            let mut adam = pair_oracle(&a, despot, a0)?;
            let mut eve = pair_oracle(&e, tribune, e0)?;
            let g = simulate_payoff(&a, &e, adam.as_mut(), eve.as_mut(), turns)?;
            SimulateReport::Payoff {
                log2_norms: g.log2_norms.clone(),
                tail: g.tail,
                trend: g.trend,
                zero_at: g.zero_at,
            }
        }
    };
    if cli.json {
        return Ok(Output::ok(to_json(&report)));
    }
    let mut out = String::new();
    match &report {
        SimulateReport::Forest { levels, tail, trend, .. } => {
            for (k, level) in levels.iter().enumerate() {
                let side = if k % 2 == 0 { "despot" } else { "tribune" };
                writeln!(out, "move {k:>3} ({side}): ({})", level.join(", "))?;
            }
            writeln!(out, "growth: tail {tail:.6}, trend {trend:.6}")?;
        }
        SimulateReport::Payoff { log2_norms, tail, trend, zero_at } => {
            if let Some(z) = zero_at {
                writeln!(out, "product vanished at step {z}")?;
            }
            if let Some(last) = log2_norms.last() {
                writeln!(out, "log2 norm after {} steps: {last:.6}", log2_norms.len())?;
            }
            writeln!(out, "growth: tail {tail:.6}, trend {trend:.6}")?;
        }
    }
    Ok(Output::ok(out))
}

fn encode(path: &Path, variant: VariantArg) -> Result<Output> {
    let m = read_machine(path)?;
    let g = match variant {
        VariantArg::Integer => encode_integer(&m),
        VariantArg::Nonneg => encode_nonneg(&m),
    };
    for w in &g.warnings {
        eprintln!("warning: {w}");
    }
    Ok(Output::ok(to_json(&EncodedFile::from_encoded(&g))))
}

fn check(cli: &Cli, path: &Path, turns: usize) -> Result<Output> {
    let m = read_machine(path)?;
    if m.transitions().is_empty() {
        bail!("machine has no transitions, so Eve cannot move");
    }
    let gi = encode_integer(&m);
    let play = run_scripted_play(&gi, &m, turns, &EvePolicy::Faithful)?;
    let integer = IntegerCheck {
        turns: play.turns.len(),
        invariant_held: play.invariant_held(),
        first_violation: play.first_violation,
        forced_cheat_at: play.forced_cheat_at,
        flash_at: play.flash_at,
        annihilated_at: play.annihilated_at,
        halting_time: play.halting_time,
        payoff_estimate: play.payoff_estimate(),
        warnings: gi.warnings.clone(),
    };
    let gn = encode_nonneg(&m);
    let pun = check_nonneg_punishment(&gn, &m, turns)?;
    let nonneg = NonnegCheck {
        horizon: pun.horizon,
        halting: pun.halting,
        magnitude_ok: pun.magnitude_ok(),
        factors: pun
            .factors
            .iter()
            .map(|f| FactorEntry {
                start: f.start,
                length: f.length,
                closed_by: f.closed_by.clone(),
                ratio: format_rational(&f.ratio),
                within_bound: f.within_bound(),
            })
            .collect(),
        max_factor_growth: pun.max_factor_growth(),
        annihilated_at: pun.annihilated_at,
    };
    let prefix_ok = match (integer.first_violation, integer.forced_cheat_at) {
        (None, _) => true,
        (Some(v), Some(c)) => v >= c,
        (Some(_), None) => false,
    };
    let passed = prefix_ok
        && (integer.halting_time.is_none() || integer.annihilated_at.is_some())
        && nonneg.magnitude_ok
        && pun.factors_ok()
        && nonneg.max_factor_growth.is_none_or(|g| g < 2.0);
    let report = CheckReport { integer, nonneg, passed };
    let text = if cli.json {
        to_json(&report)
    } else {
        let i = &report.integer;
        let n = &report.nonneg;
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |t| t.to_string());
        let mut out = String::new();
        writeln!(out, "integer encoding, {} turns", i.turns)?;
        writeln!(out, "  machine halts after: {}", opt(i.halting_time))?;
        writeln!(
            out,
            "  invariant: {}",
            if i.invariant_held { "held".to_string() } else { format!("broken at turn {}", opt(i.first_violation)) }
        )?;
        writeln!(
            out,
            "  forced cheat: {}, flash: {}, zero product: {}",
            opt(i.forced_cheat_at),
            opt(i.flash_at),
            opt(i.annihilated_at)
        )?;
        writeln!(out, "  payoff estimate: {:.6}", i.payoff_estimate)?;
        writeln!(out, "non-negative encoding, horizon {}", n.horizon)?;
        writeln!(out, "  magnitude >= 2^n before the first reset: {}", n.magnitude_ok)?;
        writeln!(
            out,
            "  resets: {}, all within 2^(f-1): {}",
            n.factors.len(),
            n.factors.iter().all(|f| f.within_bound)
        )?;
        if let Some(g) = n.max_factor_growth {
            writeln!(out, "  largest per-factor growth: {g:.6}")?;
        }
        writeln!(out, "  vector vanished: {}", opt(n.annihilated_at))?;
        for w in &i.warnings {
            writeln!(out, "warning: {w}")?;
        }
        writeln!(out, "{}", if report.passed { "all checks passed" } else { "CHECKS FAILED" })?;
        out
    };
    Ok(Output { text, code: if report.passed { 0 } else { 1 } })
}

fn mpg(cli: &Cli, path: &Path, solve: bool, tol: &str) -> Result<Output> {
    let file: MpgFile =
        serde_json::from_str(&read(path)?).with_context(|| format!("{} is not a mean-payoff game", path.display()))?;
    let m = file.to_mpg()?;
    let arena = mpg_to_weighted_eg(&m)?;
    let arena_file = ArenaFile::from_arena(&arena);
    if !solve {
        return Ok(Output::ok(to_json(&arena_file)));
    }
    let tol = positive_rational(tol, "tolerance")?;
    let sol = solve_with_cap(&arena, &tol, cli.cap)?;
    let mid = (&sol.value.lower + &sol.value.upper) / Rational::from_integer(2.into());
    let report = MpgReport {
        arena: arena_file,
        lower: format_rational(&sol.value.lower),
        upper: format_rational(&sol.value.upper),
        log2_value: to_f64(&mid).log2(),
        mean_payoff: format_rational(&mpg_value_brute_force(&m)?),
    };
    if cli.json {
        return Ok(Output::ok(to_json(&report)));
    }
    Ok(Output::ok(format!(
        "entropy game value in [{:.10}, {:.10}]\nlog2 of value: {:.8}\nmean payoff (brute force): {}\n",
        to_f64(&sol.value.lower),
        to_f64(&sol.value.upper),
        report.log2_value,
        report.mean_payoff
    )))
}
