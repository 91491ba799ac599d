use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::arena::{Arena, Player, PositionalStrategy};
use crate::iru::{IruSet, RowSet};
use crate::linalg::{Matrix, Rational};
use crate::{Error, Result};

/// Row-set families of an arena together with the map from rows back to
/// the actions producing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IruTranslation {
    /// Despot family, `|D| × |T|`.
    pub a_set: IruSet,
    /// Tribune family, `|T| × |D|`.
    pub e_set: IruSet,
    /// `[state][row index]` → actions (alphabet order) producing that row.
    despot_actions: Vec<Vec<Vec<String>>>,
    tribune_actions: Vec<Vec<Vec<String>>>,
}

fn family(arena: &Arena, player: Player) -> Result<(IruSet, Vec<Vec<Vec<String>>>)> {
    let width = arena.states(player.other()).len();
    let mut row_sets = Vec::new();
    let mut labels = Vec::new();
    for s in arena.states(player) {
        let mut rows: Vec<(Vec<Rational>, String)> = Vec::new();
        for a in arena.actions(s) {
            let mut row = vec![Rational::zero(); width];
            for (j, w) in arena.successors(s, a) {
                row[j] += Rational::from_integer(BigInt::from(w.clone()));
            }
            // Actions without transitions never reach here, but a zero row
            // would mean a blocking move.
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            rows.push((row, a.to_string()));
        }
        if rows.is_empty() {
            return Err(Error::BlockingState(s.clone()));
        }
        let set = RowSet::new(rows.iter().map(|(r, _)| r.clone()).collect())?;
        let mut by_row = vec![Vec::new(); set.len()];
        for (r, a) in rows {
            let k = set.position(&r).expect("row was inserted");
            by_row[k].push(a);
        }
        row_sets.push(set);
        labels.push(by_row);
    }
    Ok((IruSet::new(row_sets)?, labels))
}

/// Builds Despot's and Tribune's row-set families: the row of state `s` under
/// action `a` counts (with weights) the transitions `s -a-> s'` per target.
pub fn arena_to_iru(arena: &Arena) -> Result<IruTranslation> {
    let (a_set, despot_actions) = family(arena, Player::Despot)?;
    let (e_set, tribune_actions) = family(arena, Player::Tribune)?;
    Ok(IruTranslation { a_set, e_set, despot_actions, tribune_actions })
}

impl IruTranslation {
    fn parts(&self, player: Player) -> (&IruSet, &Vec<Vec<Vec<String>>>) {
        match player {
            Player::Despot => (&self.a_set, &self.despot_actions),
            Player::Tribune => (&self.e_set, &self.tribune_actions),
        }
    }

    /// Actions producing row `row` of the state with index `state`.
    pub fn actions_for_row(&self, player: Player, state: usize, row: usize) -> &[String] {
        &self.parts(player).1[state][row]
    }

    /// Matrix induced by a positional strategy.
    pub fn matrix_of(&self, arena: &Arena, strategy: &PositionalStrategy) -> Result<Matrix> {
        let (set, labels) = self.parts(strategy.owner);
        let choice = arena
            .states(strategy.owner)
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let a = strategy
                    .action(s)
                    .ok_or_else(|| Error::InvalidArena(format!("strategy has no action for {s:?}")))?;
                labels[i]
                    .iter()
                    .position(|acts| acts.iter().any(|x| x == a))
                    .ok_or_else(|| Error::IllegalAction { state: s.clone(), action: a.to_string() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(set.member(&choice))
    }

    /// Positional strategy whose matrix is `m`; where several actions give
    /// the same row, the first in alphabet order is used.
    pub fn strategy_of(&self, arena: &Arena, player: Player, m: &Matrix) -> Result<PositionalStrategy> {
        let (set, labels) = self.parts(player);
        let choice = set
            .choice_of(m)
            .ok_or_else(|| Error::PreconditionViolated(format!("matrix is not a member of the {player} family")))?;
        let map: BTreeMap<String, String> = arena
            .states(player)
            .iter()
            .zip(&choice)
            .enumerate()
            .map(|(i, (s, &c))| (s.clone(), labels[i][c][0].clone()))
            .collect();
        PositionalStrategy::new(arena, player, map)
    }
}
