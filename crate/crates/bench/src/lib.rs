//! Shared inputs for the benchmarks.

use entgame_core::games::Transition;
use entgame_core::random::{random_game_pair, random_square_iru, seeded};
use entgame_core::{Arena, IruSet};

pub fn running_pair() -> (IruSet, IruSet) {
    (
        IruSet::from_ints(&[vec![vec![1, 1, 0]], vec![vec![0, 1, 0], vec![1, 0, 1]], vec![vec![0, 1, 1]]]),
        IruSet::from_ints(&[
            vec![vec![0, 1, 0], vec![1, 0, 0]],
            vec![vec![1, 1, 1]],
            vec![vec![0, 1, 0], vec![0, 0, 1]],
        ]),
    )
}

pub fn running_arena() -> Arena {
    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let edges = [
        ("d1", "a", "t1"),
        ("d1", "a", "t2"),
        ("d1", "b", "t1"),
        ("d1", "b", "t2"),
        ("d2", "a", "t1"),
        ("d2", "a", "t3"),
        ("d2", "b", "t2"),
        ("d3", "a", "t2"),
        ("d3", "a", "t3"),
        ("d3", "b", "t2"),
        ("d3", "b", "t3"),
        ("t1", "a", "d1"),
        ("t1", "b", "d2"),
        ("t2", "a", "d1"),
        ("t2", "a", "d2"),
        ("t2", "a", "d3"),
        ("t2", "b", "d1"),
        ("t2", "b", "d2"),
        ("t2", "b", "d3"),
        ("t3", "a", "d3"),
        ("t3", "b", "d2"),
    ];
    Arena::new(
        names(&["d1", "d2", "d3"]),
        names(&["t1", "t2", "t3"]),
        names(&["a", "b"]),
        edges.iter().map(|(f, a, t)| Transition::new(f, a, t)).collect(),
    )
    .expect("valid arena")
}

pub fn random_pairs(count: usize, seed: u64) -> Vec<(IruSet, IruSet)> {
    let mut rng = seeded(seed);
    (0..count).map(|_| random_game_pair(&mut rng, 4, 3)).collect()
}

pub fn random_families(count: usize, seed: u64) -> Vec<IruSet> {
    let mut rng = seeded(seed);
    (0..count).map(|_| random_square_iru(&mut rng, 4, 3, false)).collect()
}
