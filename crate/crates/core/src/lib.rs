//! Solvers for entropy games and matrix multiplication games played over
//! independent-row-uncertainty (IRU) sets of non-negative matrices.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`]: exact rational matrices, spectral radius enclosures and
//!   exact algebraic comparison of spectral radii.
//! * [`iru`]: IRU families, enumeration, products, joint spectral
//!   radius/subradius and the hourglass alternative.
//! * [`lp`]: an exact rational simplex and the threshold decision procedures
//!   with checkable certificates.
//! * [`games`]: arenas, the arena to IRU translation, saddle points, forest
//!   counting, payoff simulation and the mean-payoff reduction.
//! * [`machine`]: two-counter machines and their encodings into matrix games.
//! * [`formats`]: JSON file formats shared with the command line tool.
//! * [`random`]: seeded instance generators.

pub mod error;
pub mod formats;
pub mod games;
pub mod iru;
pub mod linalg;
pub mod lp;
pub mod machine;
pub mod random;

pub use error::{Error, Result};
pub use games::{
    arena_to_iru, eg_payoff_entropy, find_saddle, forest_counts, mpg_to_weighted_eg, mpg_value_brute_force,
    population_trace, simulate_payoff, solve, solve_sets, Arena, ForestTrace, GameSolution, GrowthReport,
    IruTranslation, MatrixOracle, MpgArena, Player, PositionalStrategy, SaddleCertificate, StrategyOracle,
};
pub use iru::{hourglass_check, jsr_jssr, right_product, sample_conv, IruSet, RadiusPair, RowSet, DEFAULT_ENUM_CAP};
pub use linalg::{
    certify_radius_lower, certify_radius_upper, mat_mul, one_norm, perron_vector, spectral_radius, Matrix,
    RadiusEstimate, Rational, Vector,
};
pub use lp::{
    decide_jsr_le, decide_jsr_lt, decide_jssr_ge, decide_jssr_gt, decide_mm_ge, decide_mm_le, decide_mm_lt, lp_max,
    value_bisection, verify_certificate, Certificate, CertificateKind, Decision, FeasibilitySystem, LpOutcome,
    ValueInterval,
};
pub use machine::{
    check_nonneg_punishment, encode_integer, encode_nonneg, run_scripted_play, EncodedMmg, EvePolicy, TwoCounterMachine,
};
