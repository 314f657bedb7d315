//! Numeric substrate shared by every other module.

mod accum;
mod dd;
mod fit;
mod phase;
mod rational;

pub use accum::{ComplexAccumulator, ACCUMULATOR_ERROR_CONSTANT};
pub use dd::DoubleDouble;
pub use fit::least_squares_slope;
pub use phase::{e_of, frac_dist, reduce_phase, Phase, MAX_REDUCIBLE};
pub use rational::{
    parse_rational, rat, rational_string, rational_to_f64, serialize_rational, Rational,
};

pub use num::complex::Complex64;
