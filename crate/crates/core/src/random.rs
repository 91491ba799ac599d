//! Seeded generators for random test and benchmark instances.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::games::{Arena, MpgArena, MpgEdge, Transition};
use crate::iru::{IruSet, RowSet};
use crate::linalg::Rational;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k/d` in `[0, 4]` with `d <= max_den`; a quarter of draws are zero unless
/// `positive` is set, in which case zero is never returned.
pub fn random_entry<R: Rng>(rng: &mut R, max_den: i64, positive: bool) -> Rational {
    let d = rng.random_range(1..=max_den.max(1));
    if positive {
        return Rational::new(rng.random_range(1..=4 * d).into(), d.into());
    }
    if rng.random_bool(0.25) {
        return Rational::from_integer(0.into());
    }
    Rational::new(rng.random_range(0..=4 * d).into(), d.into())
}

/// IRU family of shape `rows x cols` with between 1 and `max_set` rows per
/// row set.
pub fn random_iru<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_set: usize, positive: bool) -> IruSet {
    let sets = (0..rows)
        .map(|_| {
            let k = rng.random_range(1..=max_set.max(1));
            let rows = (0..k).map(|_| (0..cols).map(|_| random_entry(rng, 4, positive)).collect()).collect();
            RowSet::new(rows).expect("entries are non-negative")
        })
        .collect();
    IruSet::new(sets).expect("rows share a length")
}

/// Square family with dimension drawn from `1..=max_dim`.
pub fn random_square_iru<R: Rng>(rng: &mut R, max_dim: usize, max_set: usize, positive: bool) -> IruSet {
    let n = rng.random_range(1..=max_dim.max(1));
    random_iru(rng, n, n, max_set, positive)
}

/// Adam's `N x M` family and Eve's `M x N` family.
pub fn random_game_pair<R: Rng>(rng: &mut R, max_dim: usize, max_set: usize) -> (IruSet, IruSet) {
    let n = rng.random_range(1..=max_dim.max(1));
    let m = rng.random_range(1..=max_dim.max(1));
    (random_iru(rng, n, m, max_set, false), random_iru(rng, m, n, max_set, false))
}

/// Bipartite mean-payoff arena in which every state has between one and
/// all possible successors and weights lie in `0..=max_weight`.
pub fn random_mpg<R: Rng>(rng: &mut R, despot: usize, tribune: usize, max_weight: u32) -> MpgArena {
    let d: Vec<String> = (0..despot).map(|i| format!("p{i}")).collect();
    let t: Vec<String> = (0..tribune).map(|i| format!("t{i}")).collect();
    let mut edges = Vec::new();
    for (from, targets) in [(&d, &t), (&t, &d)] {
        for f in from.iter() {
            let first = rng.random_range(0..targets.len());
            for (k, to) in targets.iter().enumerate() {
                if k == first || rng.random_bool(0.5) {
                    edges.push(MpgEdge { from: f.clone(), to: to.clone(), weight: rng.random_range(0..=max_weight) });
                }
            }
        }
    }
    MpgArena::new(d, t, edges).expect("generated arena is valid")
}

/// Entropy-game arena over actions `a0, a1, ..`; every state enables at
/// least one action and each enabled action has at least one successor.
pub fn random_arena<R: Rng>(rng: &mut R, despot: usize, tribune: usize, actions: usize, max_weight: u32) -> Arena {
    let d: Vec<String> = (0..despot).map(|i| format!("p{i}")).collect();
    let t: Vec<String> = (0..tribune).map(|i| format!("t{i}")).collect();
    let alphabet: Vec<String> = (0..actions).map(|i| format!("a{i}")).collect();
    let mut transitions = Vec::new();
    for (from, targets) in [(&d, &t), (&t, &d)] {
        for f in from.iter() {
            let forced = rng.random_range(0..alphabet.len());
            for (k, a) in alphabet.iter().enumerate() {
                if k != forced && rng.random_bool(0.3) {
                    continue;
                }
                let first = rng.random_range(0..targets.len());
                for (j, to) in targets.iter().enumerate() {
                    if j == first || rng.random_bool(0.4) {
                        let w = BigUint::from(rng.random_range(1..=max_weight.max(1)));
                        transitions.push(Transition::weighted(f, a, to, w));
                    }
                }
            }
        }
    }
    Arena::new(d, t, alphabet, transitions).expect("generated arena is valid")
}
