use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Counter {
    X,
    Y,
}

impl Counter {
    pub fn name(self) -> &'static str {
        match self {
            Counter::X => "x",
            Counter::Y => "y",
        }
    }

    fn parse(s: &str) -> Option<Counter> {
        match s {
            "x" => Some(Counter::X),
            "y" => Some(Counter::Y),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Inc { counter: Counter, next: usize },
    JzDec { counter: Counter, if_zero: usize, otherwise: usize },
    Stop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransitionKind {
    Inc,
    /// Zero branch of a test.
    Keep,
    /// Decrement branch of a test.
    Dec,
}

/// One machine transition; tests contribute two, stops none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MachineTransition {
    pub from: usize,
    pub to: usize,
    pub counter: Counter,
    pub kind: TransitionKind,
}

/// Two-counter Minsky machine; state 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCounterMachine {
    states: Vec<String>,
    program: Vec<Instruction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub state: usize,
    pub x: u64,
    pub y: u64,
}

impl Configuration {
    pub fn counter(&self, c: Counter) -> u64 {
        match c {
            Counter::X => self.x,
            Counter::Y => self.y,
        }
    }
}

impl TwoCounterMachine {
    pub fn new(states: Vec<String>, program: Vec<Instruction>) -> Result<Self> {
        if states.is_empty() || states.len() != program.len() {
            return Err(Error::InvalidMachine(format!("{} states but {} instructions", states.len(), program.len())));
        }
        let n = states.len();
        for (s, ins) in states.iter().zip(&program) {
            let targets: &[usize] = match ins {
                Instruction::Inc { next, .. } => &[*next],
                Instruction::JzDec { if_zero, otherwise, .. } => &[*if_zero, *otherwise],
                Instruction::Stop => &[],
            };
            if targets.iter().any(|&t| t >= n) {
                return Err(Error::InvalidMachine(format!("instruction of {s} jumps to an unknown state")));
            }
        }
        Ok(TwoCounterMachine { states, program })
    }

    /// Parses lines `q: inc x -> r`, `q: ifz x -> r else dec -> s`, `q: stop`;
    /// the first instruction's state is initial and `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (label, body) =
                line.split_once(':').ok_or_else(|| Error::Parse(format!("line {}: missing ':'", no + 1)))?;
            lines.push((no + 1, label.trim().to_string(), body.trim().to_string()));
        }
        let mut index = HashMap::new();
        for (k, (no, label, _)) in lines.iter().enumerate() {
            if label.is_empty() || label.contains(char::is_whitespace) {
                return Err(Error::Parse(format!("line {no}: bad state name {label:?}")));
            }
            if index.insert(label.clone(), k).is_some() {
                return Err(Error::Parse(format!("line {no}: state {label} defined twice")));
            }
        }
        let lookup = |no: usize, s: &str| {
            index.get(s).copied().ok_or_else(|| Error::InvalidMachine(format!("line {no}: unknown state {s:?}")))
        };
        let counter = |no: usize, s: &str| {
            Counter::parse(s).ok_or_else(|| Error::Parse(format!("line {no}: unknown counter {s:?}")))
        };
        let mut program = Vec::new();
        for (no, _, body) in &lines {
            let words: Vec<&str> = body.split_whitespace().collect();
            let ins = match words.as_slice() {
                ["stop"] => Instruction::Stop,
                ["inc", c, "->", next] => Instruction::Inc { counter: counter(*no, c)?, next: lookup(*no, next)? },
                ["ifz", c, "->", z, "else", "dec", "->", nz] => Instruction::JzDec {
                    counter: counter(*no, c)?,
                    if_zero: lookup(*no, z)?,
                    otherwise: lookup(*no, nz)?,
                },
                _ => return Err(Error::Parse(format!("line {no}: cannot read {body:?}"))),
            };
            program.push(ins);
        }
        TwoCounterMachine::new(lines.into_iter().map(|(_, l, _)| l).collect(), program)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn program(&self) -> &[Instruction] {
        &self.program
    }

    /// All transitions, state by state; a test lists its zero branch first.
    pub fn transitions(&self) -> Vec<MachineTransition> {
        let mut out = Vec::new();
        for (from, ins) in self.program.iter().enumerate() {
            match *ins {
                Instruction::Inc { counter, next } => {
                    out.push(MachineTransition { from, to: next, counter, kind: TransitionKind::Inc })
                }
                Instruction::JzDec { counter, if_zero, otherwise } => {
                    out.push(MachineTransition { from, to: if_zero, counter, kind: TransitionKind::Keep });
                    out.push(MachineTransition { from, to: otherwise, counter, kind: TransitionKind::Dec });
                }
                Instruction::Stop => {}
            }
        }
        out
    }

    pub fn initial(&self) -> Configuration {
        Configuration { state: 0, x: 0, y: 0 }
    }

    /// The transition taken from `config`, or `None` at a stop.
    pub fn step(&self, config: &Configuration) -> Option<(MachineTransition, Configuration)> {
        let mut next = *config;
        let t = match self.program[config.state] {
            Instruction::Stop => return None,
            Instruction::Inc { counter, next: to } => {
                match counter {
                    Counter::X => next.x += 1,
                    Counter::Y => next.y += 1,
                }
                MachineTransition { from: config.state, to, counter, kind: TransitionKind::Inc }
            }
            Instruction::JzDec { counter, if_zero, otherwise } => {
                if config.counter(counter) == 0 {
                    MachineTransition { from: config.state, to: if_zero, counter, kind: TransitionKind::Keep }
                } else {
                    match counter {
                        Counter::X => next.x -= 1,
                        Counter::Y => next.y -= 1,
                    }
                    MachineTransition { from: config.state, to: otherwise, counter, kind: TransitionKind::Dec }
                }
            }
        };
        next.state = t.to;
        Some((t, next))
    }

    /// Transitions of the run from the initial configuration, at most `max`.
    pub fn run(&self, max: usize) -> Vec<MachineTransition> {
        let mut config = self.initial();
        let mut out = Vec::new();
        while out.len() < max {
            match self.step(&config) {
                Some((t, next)) => {
                    out.push(t);
                    config = next;
                }
                None => break,
            }
        }
        out
    }

    /// Name used for the matrix of a transition, e.g. `I_q0_q1_x`.
    pub fn transition_name(&self, t: &MachineTransition) -> String {
        let prefix = match t.kind {
            TransitionKind::Inc => "I",
            TransitionKind::Keep => "K",
            TransitionKind::Dec => "D",
        };
        format!("{prefix}_{}_{}_{}", self.states[t.from], self.states[t.to], t.counter.name())
    }
}

impl fmt::Display for TwoCounterMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, ins) in self.states.iter().zip(&self.program) {
            match ins {
                Instruction::Stop => writeln!(f, "{s}: stop")?,
                Instruction::Inc { counter, next } => {
                    writeln!(f, "{s}: inc {} -> {}", counter.name(), self.states[*next])?
                }
                Instruction::JzDec { counter, if_zero, otherwise } => writeln!(
                    f,
                    "{s}: ifz {} -> {} else dec -> {}",
                    counter.name(),
                    self.states[*if_zero],
                    self.states[*otherwise]
                )?,
            }
        }
        Ok(())
    }
}
