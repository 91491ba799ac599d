//! Exact rational linear algebra plus the floating-point spectral machinery
//! whose results are always handed back as exact rational enclosures.

mod matrix;
pub mod poly;
mod rational;
mod spectral;

pub use matrix::{mat_mul, one_norm, Matrix, Orientation, Vector};
pub use rational::{
    format_rational, parse_rational, rational_from_f64, rationalize, to_f64, Rational, DEFAULT_DENOMINATOR_CAP,
};
pub(crate) use rational::{log2_big, log2_rational};
pub use spectral::{
    certify_radius_lower, certify_radius_upper, gelfand_bounds, perron_vector, radius_f64, spectral_radius,
    spectral_radius_with_witness, strongly_connected_components, CollatzWitness, RadiusEstimate, DEFAULT_ITERATION_CAP,
    DEFAULT_TOLERANCE,
};
