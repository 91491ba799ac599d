use std::fmt;

use num_traits::{One, Zero};

use super::program::{Counter, MachineTransition, TransitionKind, TwoCounterMachine};
use crate::linalg::{mat_mul, Matrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Integer matrices, coordinates `q.., x, y, One, E, Neg`.
    Integer,
    /// Non-negative matrices, coordinates `q.., x+, x-, y+, y-`.
    NonNegative,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Integer => "integer",
            Variant::NonNegative => "nonneg",
        }
    }

    pub fn from_name(s: &str) -> Option<Variant> {
        match s {
            "integer" => Some(Variant::Integer),
            "nonneg" | "non-negative" => Some(Variant::NonNegative),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: Matrix,
}

/// A matrix multiplication game built from a machine. Vectors are rows and
/// act by `v -> v·M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedMmg {
    pub variant: Variant,
    pub dimension: usize,
    pub coordinate_labels: Vec<String>,
    pub adam: Vec<NamedMatrix>,
    pub eve: Vec<NamedMatrix>,
    pub warnings: Vec<String>,
}

impl EncodedMmg {
    pub fn adam_matrix(&self, name: &str) -> Option<&Matrix> {
        self.adam.iter().find(|m| m.name == name).map(|m| &m.matrix)
    }

    pub fn eve_matrix(&self, name: &str) -> Option<&Matrix> {
        self.eve.iter().find(|m| m.name == name).map(|m| &m.matrix)
    }

    pub fn coordinate(&self, label: &str) -> Option<usize> {
        self.coordinate_labels.iter().position(|l| l == label)
    }

    /// Starting vector: initial state and `One`/`E` at 1 for the integer
    /// variant, initial state and all four counter coordinates at 1 otherwise.
    pub fn initial_vector(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dimension];
        v[0] = Rational::one();
        let ones: &[&str] = match self.variant {
            Variant::Integer => &["One", "E"],
            Variant::NonNegative => &["x+", "x-", "y+", "y-"],
        };
        for l in ones {
            v[self.coordinate(l).unwrap()] = Rational::one();
        }
        v
    }
}

type Assignment = (usize, Vec<(usize, i64)>);

/// Matrix performing the listed assignments simultaneously; coordinates not
/// listed keep their value.
fn assign(dim: usize, targets: &[Assignment]) -> Matrix {
    let mut m = Matrix::identity(dim);
    for (target, sources) in targets {
        for i in 0..dim {
            m.set(i, *target, Rational::zero());
        }
        for &(src, coeff) in sources {
            let cur = m.get(src, *target).clone();
            m.set(src, *target, cur + Rational::from_integer(coeff.into()));
        }
    }
    m
}

/// Assignments executed one after another.
fn sequence(dim: usize, steps: &[Assignment]) -> Matrix {
    steps.iter().fold(Matrix::identity(dim), |acc, step| {
        mat_mul(&acc, &assign(dim, std::slice::from_ref(step))).expect("square factors")
    })
}

fn empty_warning(m: &TwoCounterMachine) -> Vec<String> {
    if m.transitions().is_empty() {
        vec!["machine has no transitions; Eve's set is empty".to_string()]
    } else {
        Vec::new()
    }
}

pub fn encode_integer(m: &TwoCounterMachine) -> EncodedMmg {
    let nq = m.states().len();
    let dim = nq + 5;
    let (x, y, one, e, neg) = (nq, nq + 1, nq + 2, nq + 3, nq + 4);
    let counter = |c: Counter| match c {
        Counter::X => x,
        Counter::Y => y,
    };
    let mut labels: Vec<String> = m.states().to_vec();
    labels.extend(["x", "y", "One", "E", "Neg"].map(String::from));

    let eve = m
        .transitions()
        .iter()
        .map(|t| {
            let c = counter(t.counter);
            let mut steps: Vec<Assignment> =
                vec![(t.from, vec![(t.from, 1), (one, -1)]), (t.to, vec![(t.to, 1), (one, 1)])];
            steps.push(match t.kind {
                TransitionKind::Inc => (c, vec![(c, 1), (one, 1)]),
                TransitionKind::Keep => (c, vec![(c, -1)]),
                TransitionKind::Dec => (c, vec![(c, 1), (one, -1)]),
            });
            NamedMatrix { name: m.transition_name(t), matrix: sequence(dim, &steps) }
        })
        .collect();

    let mut init: Vec<Assignment> = vec![(0, vec![(e, 1)])];
    init.extend((1..nq).map(|q| (q, vec![])));
    init.extend([(x, vec![]), (y, vec![]), (one, vec![(e, 1)]), (neg, vec![])]);
    let mut adam = vec![
        NamedMatrix { name: "Init".into(), matrix: assign(dim, &init) },
        NamedMatrix { name: "Id".into(), matrix: Matrix::identity(dim) },
    ];
    for (i, label) in labels.iter().enumerate().take(nq + 2) {
        adam.push(NamedMatrix { name: format!("F_{label}"), matrix: assign(dim, &[(neg, vec![(i, 1)])]) });
    }
    adam.push(NamedMatrix { name: "A".into(), matrix: assign(dim, &[(neg, vec![(neg, 1), (one, 1)])]) });
    adam.push(NamedMatrix { name: "P".into(), matrix: assign(dim, &[(e, vec![(e, 1), (neg, 1)])]) });

    let mut warnings = empty_warning(m);
    if m.transitions().iter().any(|t| t.from == t.to) {
        warnings.push("self-loop transitions leave the state coordinate unchanged, so playing one from the wrong state goes undetected".to_string());
    }
    EncodedMmg { variant: Variant::Integer, dimension: dim, coordinate_labels: labels, adam, eve, warnings }
}

fn nonneg_transition(nq: usize, t: &MachineTransition) -> Matrix {
    let dim = nq + 4;
    let (xp, xm, yp, ym) = (nq, nq + 1, nq + 2, nq + 3);
    let (cp, cm, op, om) = match t.counter {
        Counter::X => (xp, xm, yp, ym),
        Counter::Y => (yp, ym, xp, xm),
    };
    let mut a: Vec<Assignment> =
        (0..nq).map(|q| if q == t.to { (q, vec![(t.from, 2)]) } else { (q, vec![]) }).collect();
    match t.kind {
        TransitionKind::Inc => a.push((cp, vec![(cp, 4)])),
        TransitionKind::Keep => a.extend([(cp, vec![(cm, 2)]), (cm, vec![(cp, 2)])]),
        TransitionKind::Dec => a.push((cm, vec![(cm, 4)])),
    }
    a.extend([(op, vec![(op, 2)]), (om, vec![(om, 2)])]);
    assign(dim, &a)
}

pub fn encode_nonneg(m: &TwoCounterMachine) -> EncodedMmg {
    let nq = m.states().len();
    let dim = nq + 4;
    let (xp, xm, yp, ym) = (nq, nq + 1, nq + 2, nq + 3);
    let mut labels: Vec<String> = m.states().to_vec();
    labels.extend(["x+", "x-", "y+", "y-"].map(String::from));

    let eve = m
        .transitions()
        .iter()
        .map(|t| NamedMatrix { name: m.transition_name(t), matrix: nonneg_transition(nq, t) })
        .collect();

    let reset = |sources: Vec<(usize, i64)>| {
        let mut a: Vec<Assignment> = vec![(0, sources.clone())];
        a.extend((1..nq).map(|q| (q, vec![])));
        a.extend([xp, xm, yp, ym].map(|c| (c, sources.clone())));
        assign(dim, &a)
    };
    let adam = vec![
        NamedMatrix { name: "Id".into(), matrix: Matrix::identity(dim) },
        NamedMatrix { name: "P_x".into(), matrix: reset(vec![(xp, 1)]) },
        NamedMatrix { name: "P_y".into(), matrix: reset(vec![(yp, 1)]) },
        NamedMatrix { name: "P_q".into(), matrix: reset((0..nq).map(|q| (q, 1)).collect()) },
    ];
    let g = EncodedMmg {
        variant: Variant::NonNegative,
        dimension: dim,
        coordinate_labels: labels,
        adam,
        eve,
        warnings: empty_warning(m),
    };
    debug_assert!(g.adam.iter().chain(&g.eve).all(|nm| nm.matrix.is_nonnegative()));
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(text: &str) -> TwoCounterMachine {
        TwoCounterMachine::parse(text).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&k| Rational::from_integer(k.into())).collect()
    }

    fn apply(v: &[Rational], m: &Matrix) -> Vec<Rational> {
        m.vec_mul(&crate::linalg::Vector::row(v.to_vec())).unwrap().into_entries()
    }

    #[test]
    fn integer_counts() {
        let m = machine("q0: inc x -> q1\nq1: stop");
        let g = encode_integer(&m);
        assert_eq!(g.dimension, 7);
        assert_eq!(g.eve.len(), 1);
        assert_eq!(g.adam.len(), 8);
        assert!(g.warnings.is_empty());
        let stop = encode_integer(&machine("q0: stop"));
        assert!(stop.eve.is_empty());
        assert_eq!(stop.warnings.len(), 1);
    }

    #[test]
    fn increment_on_initial_vector() {
        let g = encode_integer(&machine("q0: inc x -> q1\nq1: stop"));
        // labels: q0 q1 x y One E Neg
        let v0 = g.initial_vector();
        assert_eq!(v0, ints(&[1, 0, 0, 0, 1, 1, 0]));
        let v1 = apply(&v0, g.eve_matrix("I_q0_q1_x").unwrap());
        assert_eq!(v1, ints(&[0, 1, 1, 0, 1, 1, 0]));
    }

    #[test]
    fn integer_self_loop_keeps_state() {
        let g = encode_integer(&machine("q0: ifz x -> q0 else dec -> q0"));
        let v = ints(&[1, 3, 0, 1, 1, 0]);
        assert_eq!(apply(&v, g.eve_matrix("D_q0_q0_x").unwrap()), ints(&[1, 2, 0, 1, 1, 0]));
        assert_eq!(apply(&v, g.eve_matrix("K_q0_q0_x").unwrap()), ints(&[1, -3, 0, 1, 1, 0]));
    }

    #[test]
    fn nonneg_shapes() {
        let g = encode_nonneg(&machine("q0: inc x -> q0"));
        assert_eq!(g.dimension, 5);
        assert_eq!(g.eve.len(), 1);
        assert_eq!(g.adam.len(), 4);
        let allowed = [0, 1, 2, 4].map(|k: i64| Rational::from_integer(k.into()));
        for nm in g.adam.iter().chain(&g.eve) {
            assert!(nm.matrix.entries().iter().all(|e| allowed.contains(e)));
        }
        let v = apply(&g.initial_vector(), g.eve_matrix("I_q0_q0_x").unwrap());
        assert_eq!(v, ints(&[2, 4, 1, 2, 2]));
    }

    #[test]
    fn keep_swaps_counter_pair() {
        let g = encode_nonneg(&machine("q0: ifz x -> q0 else dec -> q0"));
        let k = g.eve_matrix("K_q0_q0_x").unwrap();
        let xp = g.coordinate("x+").unwrap();
        let xm = g.coordinate("x-").unwrap();
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); g.dimension];
            v[i] = Rational::one();
            v
        };
        let two = Rational::from_integer(2.into());
        let img = apply(&unit(xp), k);
        assert_eq!(img[xm], two);
        assert!(img.iter().enumerate().all(|(i, e)| i == xm || e.is_zero()));
        let img = apply(&unit(xm), k);
        assert_eq!(img[xp], two);
        assert!(img.iter().enumerate().all(|(i, e)| i == xp || e.is_zero()));
    }
}
