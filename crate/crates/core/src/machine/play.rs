use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::encode::{EncodedMmg, Variant};
use super::program::{Configuration, MachineTransition, TransitionKind, TwoCounterMachine};
use crate::linalg::{log2_rational, mat_mul, one_norm, Matrix, Rational, Vector};
use crate::{Error, Result};

/// How Eve picks her matrices in the integer game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvePolicy {
    /// Follow the run since Adam's last `Init`; once the machine stops, play
    /// her first matrix.
    Faithful,
    /// Faithful, except that on `turn` she plays `matrix`.
    CheatAt { turn: usize, matrix: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnRecord {
    pub turn: usize,
    pub adam: String,
    pub eve: String,
    /// Vector after both moves of the turn.
    pub vector: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlayReport {
    pub turns: Vec<TurnRecord>,
    /// First turn whose vector has a negative coordinate or `E < 1`.
    pub first_violation: Option<usize>,
    /// First turn where Eve had no faithful move left.
    pub forced_cheat_at: Option<usize>,
    /// Turn on which Adam played a flash matrix.
    pub flash_at: Option<usize>,
    /// First turn after which the product matrix is exactly zero.
    pub annihilated_at: Option<usize>,
    /// Length of the machine run, if it halts within the turn budget.
    pub halting_time: Option<usize>,
    /// 1-norm of the product matrix after each turn.
    pub product_norms: Vec<Rational>,
}

impl PlayReport {
    pub fn invariant_held(&self) -> bool {
        self.first_violation.is_none()
    }

    /// The turn budget ran out before the product vanished.
    pub fn exhausted(&self) -> bool {
        self.annihilated_at.is_none()
    }

    /// `‖Ω_n‖^{1/n}` for the last product.
    pub fn payoff_estimate(&self) -> f64 {
        match self.product_norms.last() {
            None => 0.0,
            Some(norm) if norm.is_zero() => 0.0,
            Some(norm) => {
                let n = self.product_norms.len() as f64;
                (log2_rational(norm) / n).exp2()
            }
        }
    }
}

fn apply(v: &[Rational], m: &Matrix) -> Vec<Rational> {
    m.vec_mul(&Vector::row(v.to_vec())).expect("dimensions checked").into_entries()
}

fn matrix<'a>(list: &'a [super::encode::NamedMatrix], name: &str) -> Result<&'a Matrix> {
    list.iter()
        .find(|m| m.name == name)
        .map(|m| &m.matrix)
        .ok_or_else(|| Error::PreconditionViolated(format!("encoded game has no matrix {name}")))
}

fn check_game(g: &EncodedMmg, m: &TwoCounterMachine, variant: Variant) -> Result<()> {
    if g.variant != variant {
        return Err(Error::PreconditionViolated(format!("expected the {variant} variant, got {}", g.variant)));
    }
    let extra = match variant {
        Variant::Integer => 5,
        Variant::NonNegative => 4,
    };
    if g.dimension != m.states().len() + extra || g.coordinate_labels[..m.states().len()] != *m.states() {
        return Err(Error::PreconditionViolated("encoded game does not match the machine".into()));
    }
    if g.eve.is_empty() {
        return Err(Error::PreconditionViolated("Eve has no matrices".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Script {
    Start,
    Watch,
    Adjust,
    Reinit,
    Done,
}

/// Adam's punishing script. It keeps its own copy of the current vector,
/// updated from the matrices it observes.
struct AdamScript {
    memory: Vec<Rational>,
    mode: Script,
    watched: usize,
    neg: usize,
}

impl AdamScript {
    fn choose(&mut self, labels: &[String]) -> String {
        let minus_one = -Rational::one();
        match self.mode {
            Script::Start => {
                self.mode = Script::Watch;
                "Init".into()
            }
            Script::Watch => match self.memory[..self.watched].iter().position(|c| c.is_negative()) {
                Some(i) => {
                    self.mode = Script::Adjust;
                    format!("F_{}", labels[i])
                }
                None => "Id".into(),
            },
            Script::Adjust if self.memory[self.neg] < minus_one => "A".into(),
            Script::Adjust => {
                self.mode = Script::Reinit;
                "P".into()
            }
            Script::Reinit => {
                self.mode = Script::Done;
                "Init".into()
            }
            Script::Done => "Id".into(),
        }
    }

    fn observe(&mut self, m: &Matrix) {
        self.memory = apply(&self.memory, m);
    }
}

/// Plays Adam's punishing script against Eve in the integer game, starting
/// from the initial vector.
pub fn run_scripted_play(
    g: &EncodedMmg,
    m: &TwoCounterMachine,
    max_turns: usize,
    policy: &EvePolicy,
) -> Result<PlayReport> {
    check_game(g, m, Variant::Integer)?;
    let nq = m.states().len();
    let e = nq + 3;
    let mut adam = AdamScript { memory: g.initial_vector(), mode: Script::Start, watched: nq + 2, neg: nq + 4 };
    let mut v = g.initial_vector();
    let mut product = Matrix::identity(g.dimension);
    let mut config = m.initial();
    let mut report = PlayReport {
        turns: Vec::new(),
        first_violation: None,
        forced_cheat_at: None,
        flash_at: None,
        annihilated_at: None,
        halting_time: Some(m.run(max_turns + 1).len()).filter(|&n| n <= max_turns),
        product_norms: Vec::new(),
    };
    for turn in 1..=max_turns {
        let a_name = adam.choose(&g.coordinate_labels);
        if a_name.starts_with("F_") {
            report.flash_at.get_or_insert(turn);
        }
        if a_name == "Init" {
            config = m.initial();
        }
        let faithful = m.step(&config);
        let e_name = match policy {
            EvePolicy::CheatAt { turn: t, matrix } if *t == turn => matrix.clone(),
            _ => match &faithful {
                Some((t, _)) => m.transition_name(t),
                None => {
                    report.forced_cheat_at.get_or_insert(turn);
                    g.eve[0].name.clone()
                }
            },
        };
        if let Some((_, next)) = faithful {
            config = next;
        }
        let a_mat = matrix(&g.adam, &a_name)?;
        let e_mat = matrix(&g.eve, &e_name)?;
        adam.observe(a_mat);
        adam.observe(e_mat);
        v = apply(&apply(&v, a_mat), e_mat);
        product = mat_mul(&mat_mul(&product, a_mat)?, e_mat)?;
        if report.first_violation.is_none() && (v.iter().any(|c| c.is_negative()) || v[e] < Rational::one()) {
            report.first_violation = Some(turn);
        }
        report.product_norms.push(one_norm(&product));
        report.turns.push(TurnRecord { turn, adam: a_name, eve: e_name, vector: v.clone() });
        if product.is_zero() {
            report.annihilated_at = Some(turn);
            break;
        }
    }
    Ok(report)
}

/// One stretch of play between two resets by Adam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Turn of the reset that opened the factor (0 for the start of play).
    pub start: usize,
    /// Number of Eve moves in the factor.
    pub length: usize,
    /// Adam's closing matrix.
    pub closed_by: String,
    /// Scale after the closing reset over the scale at the opening one.
    pub ratio: Rational,
}

impl Factor {
    pub fn within_bound(&self) -> bool {
        self.length >= 1 && self.ratio <= Rational::from_integer(BigInt::one() << (self.length - 1))
    }

    /// `ratio^{1/length}`, or 0 for a vanished vector.
    pub fn growth(&self) -> f64 {
        if self.ratio.is_zero() {
            return 0.0;
        }
        (log2_rational(&self.ratio) / self.length as f64).exp2()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PunishmentReport {
    pub horizon: usize,
    /// Whether the machine halts within the horizon.
    pub halting: bool,
    /// Largest coordinate after each turn.
    pub magnitudes: Vec<Rational>,
    /// Turns before the first reset whose largest coordinate is below `2^n`.
    pub magnitude_failures: Vec<usize>,
    pub factors: Vec<Factor>,
    pub annihilated_at: Option<usize>,
}

impl PunishmentReport {
    pub fn magnitude_ok(&self) -> bool {
        self.magnitude_failures.is_empty()
    }

    pub fn factors_ok(&self) -> bool {
        self.factors.iter().all(Factor::within_bound)
    }

    pub fn max_factor_growth(&self) -> Option<f64> {
        self.factors.iter().map(Factor::growth).reduce(f64::max)
    }
}

/// Eve avoids entering a stop state by taking the other branch of a test
/// when that branch does not stop; at a stop she plays any move from
/// another state.
fn avoid_halt(m: &TwoCounterMachine, config: &Configuration) -> MachineTransition {
    let stops = |s: usize| matches!(m.program()[s], super::program::Instruction::Stop);
    let all = m.transitions();
    match m.step(config) {
        None => all.iter().find(|t| t.from != config.state).copied().unwrap_or(all[0]),
        Some((t, _)) if stops(t.to) && t.kind != TransitionKind::Inc => all
            .iter()
            .find(|o| o.from == t.from && o.kind != t.kind && o.kind != TransitionKind::Inc && !stops(o.to))
            .copied()
            .unwrap_or(t),
        Some((t, _)) => t,
    }
}

/// Runs the non-negative game with Eve avoiding halts and Adam resetting
/// with `P_c` or `P_q` right after each cheat he detects.
pub fn check_nonneg_punishment(g: &EncodedMmg, m: &TwoCounterMachine, horizon: usize) -> Result<PunishmentReport> {
    check_game(g, m, Variant::NonNegative)?;
    let mut report = PunishmentReport {
        horizon,
        halting: m.run(horizon + 1).len() <= horizon,
        magnitudes: Vec::new(),
        magnitude_failures: Vec::new(),
        factors: Vec::new(),
        annihilated_at: None,
    };
    let mut v = g.initial_vector();
    let mut eve_config = m.initial();
    let mut adam_config = m.initial();
    let mut pending: Option<String> = None;
    let mut scale = Rational::one();
    let mut opened = 0;
    let mut moves = 0;
    let mut power = Rational::one();
    for turn in 1..=horizon {
        let a_name = pending.take().unwrap_or_else(|| "Id".to_string());
        let a_mat = matrix(&g.adam, &a_name)?;
        v = apply(&v, a_mat);
        if a_name != "Id" {
            let new_scale = v[0].clone();
            report.factors.push(Factor {
                start: opened,
                length: moves,
                closed_by: a_name.clone(),
                ratio: &new_scale / &scale,
            });
            if new_scale.is_zero() {
                report.annihilated_at = Some(turn);
                report.magnitudes.push(Rational::zero());
                break;
            }
            scale = new_scale;
            opened = turn;
            moves = 0;
            eve_config = m.initial();
            adam_config = m.initial();
        }

        let played = avoid_halt(m, &eve_config);
        let e_mat = matrix(&g.eve, &m.transition_name(&played))?;
        v = apply(&v, e_mat);
        moves += 1;
        if let Some((_, next)) = m.step(&eve_config).filter(|(t, _)| *t == played) {
            eve_config = next;
        }
        match m.step(&adam_config) {
            Some((t, next)) if t == played => adam_config = next,
            Some((t, _)) if t.from == played.from => pending = Some(format!("P_{}", played.counter.name())),
            _ => pending = Some("P_q".into()),
        }

        power *= Rational::from_integer(2.into());
        let top = v.iter().max().cloned().unwrap_or_else(Rational::zero);
        if report.factors.is_empty() && top < power {
            report.magnitude_failures.push(turn);
        }
        report.magnitudes.push(top);
        if v.iter().all(Zero::is_zero) {
            report.annihilated_at = Some(turn);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::encode::{encode_integer, encode_nonneg};
    use super::*;

    fn machine(text: &str) -> TwoCounterMachine {
        TwoCounterMachine::parse(text).unwrap()
    }

    fn int(k: i64) -> Rational {
        Rational::from_integer(k.into())
    }

    #[test]
    fn faithful_counter_loop_keeps_invariant() {
        let m = machine("q0: inc x -> q0");
        let g = encode_integer(&m);
        let r = run_scripted_play(&g, &m, 100, &EvePolicy::Faithful).unwrap();
        assert!(r.invariant_held());
        assert!(r.exhausted());
        assert_eq!(r.halting_time, None);
        assert_eq!(r.turns.len(), 100);
        // x counts the increments and every other coordinate stays bounded.
        for t in &r.turns {
            assert_eq!(t.vector[1], int(t.turn as i64));
            assert!(t.vector.iter().all(|c| *c <= int(t.turn as i64)));
        }
        assert!(r.payoff_estimate() < 1.1);
    }

    #[test]
    fn halting_machine_is_annihilated() {
        let m = machine("q0: inc x -> q1\nq1: stop");
        let g = encode_integer(&m);
        let r = run_scripted_play(&g, &m, 50, &EvePolicy::Faithful).unwrap();
        assert_eq!(r.forced_cheat_at, Some(2));
        assert_eq!(r.flash_at, Some(3));
        let adam: Vec<&str> = r.turns.iter().map(|t| t.adam.as_str()).collect();
        assert_eq!(adam, ["Init", "Id", "F_q0", "P", "Init"]);
        assert_eq!(r.annihilated_at, Some(5));
        assert!(r.turns.last().unwrap().vector.iter().all(Zero::is_zero));
        assert_eq!(r.first_violation, Some(2));
    }

    #[test]
    fn deliberate_counter_cheat_is_flashed() {
        let m = machine("q0: inc x -> q1\nq1: ifz x -> q0 else dec -> q0");
        let g = encode_integer(&m);
        // At turn 2 the machine is in q1 with x = 1, so the zero branch is a lie.
        let policy = EvePolicy::CheatAt { turn: 2, matrix: "K_q1_q0_x".into() };
        let r = run_scripted_play(&g, &m, 50, &policy).unwrap();
        let x = g.coordinate("x").unwrap();
        assert_eq!(r.turns[1].vector[x], int(-1));
        assert_eq!(r.first_violation, Some(2));
        assert_eq!(r.turns[2].adam, "F_x");
        assert!(r.annihilated_at.is_some());
    }

    #[test]
    fn rejects_wrong_variant() {
        let m = machine("q0: inc x -> q0");
        assert!(run_scripted_play(&encode_nonneg(&m), &m, 5, &EvePolicy::Faithful).is_err());
        assert!(check_nonneg_punishment(&encode_integer(&m), &m, 5).is_err());
    }

    #[test]
    fn increment_loop_grows_like_four_to_the_n() {
        let m = machine("q0: inc x -> q0");
        let g = encode_nonneg(&m);
        let r = check_nonneg_punishment(&g, &m, 30).unwrap();
        assert!(r.magnitude_ok());
        assert!(r.factors.is_empty());
        for (n, top) in r.magnitudes.iter().enumerate() {
            assert_eq!(*top, Rational::from_integer(num_bigint::BigInt::from(4).pow(n as u32 + 1)));
        }
    }

    #[test]
    fn zero_test_loop_stays_at_two_to_the_n() {
        let m = machine("q0: ifz x -> q0 else dec -> q0");
        let g = encode_nonneg(&m);
        let r = check_nonneg_punishment(&g, &m, 30).unwrap();
        assert!(r.magnitude_ok());
        for (n, top) in r.magnitudes.iter().enumerate() {
            assert_eq!(*top, Rational::from_integer(num_bigint::BigInt::from(2).pow(n as u32 + 1)));
        }
    }

    #[test]
    fn halting_machines_are_punished() {
        let m = machine("q0: ifz x -> q1 else dec -> q0\nq1: stop");
        let r = check_nonneg_punishment(&encode_nonneg(&m), &m, 40).unwrap();
        assert!(r.halting);
        assert!(!r.factors.is_empty());
        assert!(r.factors_ok());
        assert!(r.max_factor_growth().unwrap() < 2.0);

        let m = machine("q0: inc x -> q1\nq1: ifz x -> q2 else dec -> q1\nq2: stop");
        let r = check_nonneg_punishment(&encode_nonneg(&m), &m, 40).unwrap();
        assert!(r.factors_ok());
        assert_eq!(r.factors[0].length, 3);
        assert_eq!(r.factors[0].ratio, int(4));
        assert!(r.max_factor_growth().unwrap() < 2.0);

        let m = machine("q0: inc x -> q1\nq1: stop");
        let r = check_nonneg_punishment(&encode_nonneg(&m), &m, 40).unwrap();
        assert_eq!(r.factors.last().unwrap().closed_by, "P_q");
        assert!(r.annihilated_at.is_some());
    }
}
