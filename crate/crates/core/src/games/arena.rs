use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Despot,
    Tribune,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Despot => Player::Tribune,
            Player::Tribune => Player::Despot,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Despot => "despot",
            Player::Tribune => "tribune",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: String,
    pub action: String,
    pub to: String,
    pub weight: BigUint,
}

impl Transition {
    pub fn new(from: &str, action: &str, to: &str) -> Self {
        Transition::weighted(from, action, to, BigUint::one())
    }

    pub fn weighted(from: &str, action: &str, to: &str, weight: BigUint) -> Self {
        Transition { from: from.to_string(), action: action.to_string(), to: to.to_string(), weight }
    }
}

/// Entropy-game arena: Despot and Tribune states alternate, each transition
/// carries an action label and a positive integer weight (1 when unweighted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    despot_states: Vec<String>,
    tribune_states: Vec<String>,
    alphabet: Vec<String>,
    transitions: Vec<Transition>,
    index: HashMap<String, (Player, usize)>,
}

impl Arena {
    /// Validates the arena; repeated `(from, action, to)` triples are merged
    /// by adding their weights.
    pub fn new(
        despot_states: Vec<String>,
        tribune_states: Vec<String>,
        alphabet: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (player, states) in [(Player::Despot, &despot_states), (Player::Tribune, &tribune_states)] {
            for (i, s) in states.iter().enumerate() {
                if index.insert(s.clone(), (player, i)).is_some() {
                    return Err(Error::InvalidArena(format!("state {s:?} declared twice")));
                }
            }
        }
        if despot_states.is_empty() || tribune_states.is_empty() {
            return Err(Error::InvalidArena("both players need at least one state".into()));
        }
        let letters: HashSet<&String> = alphabet.iter().collect();
        if letters.len() != alphabet.len() {
            return Err(Error::InvalidArena("alphabet has repeated actions".into()));
        }
        let mut merged: Vec<Transition> = Vec::new();
        let mut seen: HashMap<(String, String, String), usize> = HashMap::new();
        for t in transitions {
            let from = index.get(&t.from).ok_or_else(|| Error::InvalidArena(format!("unknown state {:?}", t.from)))?;
            let to = index.get(&t.to).ok_or_else(|| Error::InvalidArena(format!("unknown state {:?}", t.to)))?;
            if from.0 == to.0 {
                return Err(Error::InvalidArena(format!(
                    "transition {} -{}-> {} does not alternate between players",
                    t.from, t.action, t.to
                )));
            }
            if !letters.contains(&t.action) {
                return Err(Error::InvalidArena(format!("action {:?} not in the alphabet", t.action)));
            }
            if t.weight.is_zero() {
                return Err(Error::InvalidArena(format!(
                    "transition {} -{}-> {} has weight 0",
                    t.from, t.action, t.to
                )));
            }
            let key = (t.from.clone(), t.action.clone(), t.to.clone());
            match seen.get(&key) {
                Some(&k) => merged[k].weight += t.weight,
                None => {
                    seen.insert(key, merged.len());
                    merged.push(t);
                }
            }
        }
        let arena = Arena { despot_states, tribune_states, alphabet, transitions: merged, index };
        for s in arena.despot_states.iter().chain(&arena.tribune_states) {
            if arena.actions(s).is_empty() {
                return Err(Error::BlockingState(s.clone()));
            }
        }
        Ok(arena)
    }

    pub fn despot_states(&self) -> &[String] {
        &self.despot_states
    }

    pub fn tribune_states(&self) -> &[String] {
        &self.tribune_states
    }

    pub fn states(&self, player: Player) -> &[String] {
        match player {
            Player::Despot => &self.despot_states,
            Player::Tribune => &self.tribune_states,
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Owner and index of a state within its owner's list.
    pub fn locate(&self, state: &str) -> Option<(Player, usize)> {
        self.index.get(state).copied()
    }

    /// Actions with at least one transition out of `state`, in alphabet order.
    pub fn actions(&self, state: &str) -> Vec<&str> {
        self.alphabet
            .iter()
            .filter(|a| self.transitions.iter().any(|t| t.from == state && &t.action == *a))
            .map(String::as_str)
            .collect()
    }

    /// Successor indices (within the other player's states) and weights.
    pub fn successors(&self, state: &str, action: &str) -> Vec<(usize, &BigUint)> {
        self.transitions
            .iter()
            .filter(|t| t.from == state && t.action == action)
            .map(|t| (self.index[&t.to].1, &t.weight))
            .collect()
    }

    pub fn is_weighted(&self) -> bool {
        self.transitions.iter().any(|t| !t.weight.is_one())
    }
}

/// State-to-action map for one player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionalStrategy {
    pub owner: Player,
    pub choice: BTreeMap<String, String>,
}

impl PositionalStrategy {
    /// Checks the map is total on the owner's states and only picks
    /// enabled actions.
    pub fn new(arena: &Arena, owner: Player, choice: BTreeMap<String, String>) -> Result<Self> {
        for s in arena.states(owner) {
            let a = choice.get(s).ok_or_else(|| Error::InvalidArena(format!("strategy has no action for {s:?}")))?;
            if !arena.actions(s).contains(&a.as_str()) {
                return Err(Error::IllegalAction { state: s.clone(), action: a.clone() });
            }
        }
        if let Some(extra) = choice.keys().find(|s| arena.locate(s).map(|l| l.0) != Some(owner)) {
            return Err(Error::InvalidArena(format!("{extra:?} is not a {owner} state")));
        }
        Ok(PositionalStrategy { owner, choice })
    }

    pub fn action(&self, state: &str) -> Option<&str> {
        self.choice.get(state).map(String::as_str)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn validates_structure() {
        let a = example_arena();
        assert_eq!(a.actions("d2"), vec!["a", "b"]);
        assert_eq!(a.successors("t2", "a").len(), 3);
        assert!(!a.is_weighted());
        assert!(loop_arena(3).is_weighted());
    }

    #[test]
    fn rejects_blocking_and_malformed() {
        let blocking = Arena::new(
            names(&["d", "d2"]),
            names(&["t"]),
            names(&["a"]),
            vec![Transition::new("d", "a", "t"), Transition::new("t", "a", "d")],
        );
        assert!(matches!(blocking, Err(Error::BlockingState(s)) if s == "d2"));
        let same_side = Arena::new(names(&["d"]), names(&["t"]), names(&["a"]), vec![Transition::new("d", "a", "d")]);
        assert!(matches!(same_side, Err(Error::InvalidArena(_))));
    }

    #[test]
    fn merges_parallel_transitions() {
        let a = Arena::new(
            names(&["d"]),
            names(&["t"]),
            names(&["a"]),
            vec![Transition::new("d", "a", "t"), Transition::new("d", "a", "t"), Transition::new("t", "a", "d")],
        )
        .unwrap();
        assert_eq!(a.successors("d", "a"), vec![(0, &BigUint::from(2u32))]);
    }

    #[test]
    fn strategy_validation() {
        let a = example_arena();
        let mut m = BTreeMap::new();
        for (s, x) in [("d1", "a"), ("d2", "a"), ("d3", "b")] {
            m.insert(s.to_string(), x.to_string());
        }
        assert!(PositionalStrategy::new(&a, Player::Despot, m.clone()).is_ok());
        m.insert("d3".into(), "z".into());
        assert!(PositionalStrategy::new(&a, Player::Despot, m.clone()).is_err());
        m.remove("d3");
        assert!(PositionalStrategy::new(&a, Player::Despot, m).is_err());
    }
}
