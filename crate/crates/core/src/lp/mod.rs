//! Exact linear programming and the threshold decisions built on it.

mod decide;
mod simplex;

pub use decide::{
    decide_jsr_le, decide_jsr_lt, decide_jssr_ge, decide_jssr_gt, decide_mm_ge, decide_mm_ge_with_cap, decide_mm_le,
    decide_mm_le_with_cap, decide_mm_lt, decide_mm_lt_with_cap, max_product_norm, value_bisection,
    value_bisection_with_cap, verify_certificate, Certificate, CertificateKind, Decision, ValueInterval,
};
pub use simplex::{lp_max, Constraint, FeasibilitySystem, LpOutcome, Relation};
