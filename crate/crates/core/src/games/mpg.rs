//! Mean-payoff games and their reduction to weighted entropy games.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use super::arena::{Arena, Transition};
use crate::linalg::Rational;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MpgEdge {
    pub from: String,
    pub to: String,
    pub weight: u32,
}

/// Bipartite mean-payoff arena with non-negative integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpgArena {
    despot_states: Vec<String>,
    tribune_states: Vec<String>,
    edges: Vec<MpgEdge>,
}

impl MpgArena {
    pub fn new(despot_states: Vec<String>, tribune_states: Vec<String>, edges: Vec<MpgEdge>) -> Result<Self> {
        let mut side = HashMap::new();
        for s in &despot_states {
            if side.insert(s.as_str(), true).is_some() {
                return Err(Error::InvalidArena(format!("state {s:?} declared twice")));
            }
        }
        for s in &tribune_states {
            if side.insert(s.as_str(), false).is_some() {
                return Err(Error::InvalidArena(format!("state {s:?} declared twice")));
            }
        }
        for e in &edges {
            let (Some(a), Some(b)) = (side.get(e.from.as_str()), side.get(e.to.as_str())) else {
                return Err(Error::InvalidArena(format!("edge {} -> {} uses an unknown state", e.from, e.to)));
            };
            if a == b {
                return Err(Error::InvalidArena(format!(
                    "edge {} -> {} does not alternate between players",
                    e.from, e.to
                )));
            }
        }
        for s in despot_states.iter().chain(&tribune_states) {
            if !edges.iter().any(|e| &e.from == s) {
                return Err(Error::BlockingState(s.clone()));
            }
        }
        Ok(MpgArena { despot_states, tribune_states, edges })
    }

    pub fn despot_states(&self) -> &[String] {
        &self.despot_states
    }

    pub fn tribune_states(&self) -> &[String] {
        &self.tribune_states
    }

    pub fn edges(&self) -> &[MpgEdge] {
        &self.edges
    }
}

/// Name of the fresh action attached to edge `index`.
pub fn edge_action(index: usize) -> String {
    format!("e{index}")
}

/// Weighted entropy game with one fresh action per edge and weight
/// `2^w`; every pair of positional strategies leaves a single play per
/// initial state.
pub fn mpg_to_weighted_eg(m: &MpgArena) -> Result<Arena> {
    let transitions = m
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| Transition::weighted(&e.from, &edge_action(k), &e.to, BigUint::one() << e.weight))
        .collect();
    Arena::new(
        m.despot_states.clone(),
        m.tribune_states.clone(),
        (0..m.edges.len()).map(edge_action).collect(),
        transitions,
    )
}

/// Reference value by brute force over positional strategy pairs:
/// `min_σ max_τ` of the best cycle mean (per full turn) reachable from any
/// Despot state.
pub fn mpg_value_brute_force(m: &MpgArena) -> Result<Rational> {
    let names: Vec<&String> = m.despot_states.iter().chain(&m.tribune_states).collect();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let out: Vec<Vec<usize>> =
        names.iter().map(|s| (0..m.edges.len()).filter(|&k| &m.edges[k].from == *s).collect()).collect();
    let nd = m.despot_states.len();
    let total = names.len();
    let sizes = |range: std::ops::Range<usize>| -> u128 { range.map(|i| out[i].len() as u128).product() };
    let cap = 1_000_000u128;
    if sizes(0..nd) * sizes(nd..total) > cap {
        return Err(Error::CapExceeded { size: sizes(0..nd) * sizes(nd..total), cap });
    }
    let mut best: Option<Rational> = None;
    for sigma in odometer(&out[..nd]) {
        let mut worst: Option<Rational> = None;
        for tau in odometer(&out[nd..]) {
            let next: Vec<usize> = sigma.iter().chain(&tau).copied().collect();
            let mut value: Option<Rational> = None;
            for start in 0..nd {
                let mean = cycle_mean(m, &index, &next, start);
                value = Some(value.map_or(mean.clone(), |v: Rational| v.max(mean)));
            }
            let value = value.expect("at least one despot state");
            worst = Some(worst.map_or(value.clone(), |w: Rational| w.max(value)));
        }
        let worst = worst.expect("tribune has a strategy");
        best = Some(best.map_or(worst.clone(), |b: Rational| b.min(worst)));
    }
    Ok(best.expect("despot has a strategy"))
}

/// Mean weight per full turn of the cycle eventually reached from `start`
/// when state `i` always takes edge `next[i]`.
fn cycle_mean(m: &MpgArena, index: &HashMap<&str, usize>, next: &[usize], start: usize) -> Rational {
    let mut seen = vec![None; next.len()];
    let mut path = Vec::new();
    let mut s = start;
    while seen[s].is_none() {
        seen[s] = Some(path.len());
        path.push(next[s]);
        s = index[m.edges[next[s]].to.as_str()];
    }
    let cycle = &path[seen[s].unwrap()..];
    let sum: u64 = cycle.iter().map(|&k| u64::from(m.edges[k].weight)).sum();
    Rational::new((2 * sum).into(), cycle.len().into())
}

fn odometer(options: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut p = prefix.clone();
                    p.push(o);
                    p
                })
            })
            .collect();
    }
    out
}
