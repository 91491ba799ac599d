//! Counting compatible plays level by level.
//!
//! Plays are grouped by current state and by both players' memories, so
//! positional strategies collapse to one count per state while
//! history-dependent strategies are still handled exactly.

use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use num_bigint::BigUint;
use num_traits::Zero;

use super::arena::{Arena, Player, PositionalStrategy};
use super::payoff::GrowthReport;
use crate::linalg::log2_big;
use crate::{Error, Result};

/// A strategy that may depend on the play so far through a memory value
/// updated after every move (by either player).
pub trait StrategyOracle {
    type Memory: Clone + Ord;

    fn initial(&self, state: &str) -> Self::Memory;

    /// Action at `state` during full turn `turn` (0-based).
    fn choose(&self, turn: usize, state: &str, memory: &Self::Memory) -> String;

    fn observe(&self, memory: &Self::Memory, from: &str, action: &str, to: &str) -> Self::Memory;
}

/// Memoryless oracles covering the common ways of describing strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptedOracle {
    Positional(PositionalStrategy),
    /// Plays `script[turn % len]` at every state.
    Script(Vec<String>),
    /// Pseudo-random choice among enabled actions, fixed per `(turn, state)`.
    Random {
        seed: u64,
        actions: BTreeMap<String, Vec<String>>,
    },
}

impl ScriptedOracle {
    pub fn random(arena: &Arena, seed: u64) -> Self {
        let actions = arena
            .despot_states()
            .iter()
            .chain(arena.tribune_states())
            .map(|s| (s.clone(), arena.actions(s).into_iter().map(String::from).collect()))
            .collect();
        ScriptedOracle::Random { seed, actions }
    }
}

impl StrategyOracle for ScriptedOracle {
    type Memory = ();

    fn initial(&self, _: &str) {}

    fn choose(&self, turn: usize, state: &str, _: &()) -> String {
        match self {
            ScriptedOracle::Positional(s) => s.action(state).unwrap_or_default().to_string(),
            ScriptedOracle::Script(script) => script[turn % script.len()].clone(),
            ScriptedOracle::Random { seed, actions } => {
                let options = &actions[state];
                let mut h = DefaultHasher::new();
                (seed, turn, state).hash(&mut h);
                options[(h.finish() % options.len() as u64) as usize].clone()
            }
        }
    }

    fn observe(&self, _: &(), _: &str, _: &str, _: &str) {}
}

/// Oracle given by a function of the full history of visited states and
/// played actions, `[s0, a0, s1, a1, ..., s_k]`.
pub struct HistoryOracle<F: Fn(&[String]) -> String> {
    pub decide: F,
}

impl<F: Fn(&[String]) -> String> StrategyOracle for HistoryOracle<F> {
    type Memory = Vec<String>;

    fn initial(&self, state: &str) -> Vec<String> {
        vec![state.to_string()]
    }

    fn choose(&self, _: usize, _: &str, memory: &Vec<String>) -> String {
        (self.decide)(memory)
    }

    fn observe(&self, memory: &Vec<String>, _: &str, action: &str, to: &str) -> Vec<String> {
        let mut m = memory.clone();
        m.push(action.to_string());
        m.push(to.to_string());
        m
    }
}

/// Per-state play counts after each half-turn. Even levels are indexed by
/// Despot states, odd levels by Tribune states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestTrace {
    pub despot_states: Vec<String>,
    pub tribune_states: Vec<String>,
    pub levels: Vec<Vec<BigUint>>,
}

impl ForestTrace {
    pub fn level_sum(&self, level: usize) -> BigUint {
        self.levels[level].iter().sum()
    }

    /// Labels of the states counted at `level`.
    pub fn species(&self, level: usize) -> &[String] {
        if level.is_multiple_of(2) {
            &self.despot_states
        } else {
            &self.tribune_states
        }
    }

    /// Growth per full turn, `|F_2n|^(1/n)`.
    pub fn growth(&self) -> GrowthReport {
        let log2: Vec<f64> = (1..=self.levels.len() / 2)
            .map(|n| {
                let s = self.level_sum(2 * n);
                if s.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    log2_big(&s)
                }
            })
            .collect();
        GrowthReport::from_log2_norms(log2)
    }
}

type Node<D, T> = (usize, D, T);

/// Counts play prefixes compatible with both oracles, starting with one play
/// from every Despot state.
pub fn forest_counts<D, T>(arena: &Arena, despot: &D, tribune: &T, turns: usize) -> Result<ForestTrace>
where
    D: StrategyOracle,
    T: StrategyOracle,
{
    let mut nodes: BTreeMap<Node<D::Memory, T::Memory>, BigUint> = arena
        .despot_states()
        .iter()
        .enumerate()
        .map(|(i, s)| ((i, despot.initial(s), tribune.initial(s)), BigUint::from(1u32)))
        .collect();
    let mut levels = vec![project(&nodes, arena.despot_states().len())];
    for turn in 0..turns {
        for mover in [Player::Despot, Player::Tribune] {
            let from_states = arena.states(mover);
            let to_states = arena.states(mover.other());
            let mut next: BTreeMap<Node<D::Memory, T::Memory>, BigUint> = BTreeMap::new();
            for ((i, md, mt), count) in &nodes {
                let state = &from_states[*i];
                let action = match mover {
                    Player::Despot => despot.choose(turn, state, md),
                    Player::Tribune => tribune.choose(turn, state, mt),
                };
                let succ = arena.successors(state, &action);
                if succ.is_empty() {
                    return Err(Error::IllegalAction { state: state.clone(), action });
                }
                for (j, w) in succ {
                    let to = &to_states[j];
                    let key = (j, despot.observe(md, state, &action, to), tribune.observe(mt, state, &action, to));
                    *next.entry(key).or_default() += count * w;
                }
            }
            nodes = next;
            levels.push(project(&nodes, to_states.len()));
        }
    }
    Ok(ForestTrace {
        despot_states: arena.despot_states().to_vec(),
        tribune_states: arena.tribune_states().to_vec(),
        levels,
    })
}

fn project<M>(nodes: &BTreeMap<(usize, M, impl Ord), BigUint>, n: usize) -> Vec<BigUint>
where
    M: Ord,
{
    let mut out = vec![BigUint::zero(); n];
    for ((i, _, _), c) in nodes {
        out[*i] += c;
    }
    out
}

/// Same dynamics as [`forest_counts`], read as populations: each level holds
/// the number of organisms of each species.
pub fn population_trace<D, T>(arena: &Arena, damien: &D, theo: &T, turns: usize) -> Result<ForestTrace>
where
    D: StrategyOracle,
    T: StrategyOracle,
{
    forest_counts(arena, damien, theo, turns)
}
