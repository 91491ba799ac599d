//! Entropy games on arenas, their matrix-game translation and solvers.

pub(crate) mod arena;
mod forest;
mod mpg;
mod payoff;
mod saddle;
mod translate;

pub use arena::{Arena, Player, PositionalStrategy, Transition};
pub use forest::{forest_counts, population_trace, ForestTrace, HistoryOracle, ScriptedOracle, StrategyOracle};
pub use mpg::{edge_action, mpg_to_weighted_eg, mpg_value_brute_force, MpgArena, MpgEdge};
pub use payoff::{
    eg_payoff_entropy, entropy_of_payoff, simulate_payoff, ConstantOracle, FnOracle, GrowthReport, MatrixOracle,
    RandomHullOracle, RandomVertexOracle,
};
pub use saddle::{
    find_saddle, radius_table, solve, solve_sets, solve_sets_with_cap, solve_with_cap, table_minimax, Evidence,
    GameSolution, SaddleCertificate, SetSolution,
};
pub use translate::{arena_to_iru, IruTranslation};
