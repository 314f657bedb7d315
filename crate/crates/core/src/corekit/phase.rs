use std::f64::consts::TAU;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Largest magnitude accepted by [`reduce_phase`]. Below 2^52 the integer part of
/// `hi` is exact, and a double-double value keeps at least 2^-52 absolute resolution.
pub const MAX_REDUCIBLE: f64 = 4_503_599_627_370_496.0; // 2^52

/// A real number modulo 1, stored in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..1.0).contains(&value) {
            Ok(Phase(value))
        } else {
            Err(Error::domain(format!("phase {value} outside [0, 1)")))
        }
    }

    /// Reduces any finite `f64` modulo 1.
    pub fn wrap(x: f64) -> Self {
        let v = x - x.floor();
        Phase(if v >= 1.0 { 0.0 } else { v })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn frac_dist(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("frac_dist of non-finite {x}")));
    }
    Ok((x - x.round()).abs())
}

/// Reduces an extended-precision value modulo 1.
///
/// The absolute error of the returned phase is the error already present in `x`
/// plus at most one rounding of a value in `[0, 1)`.
pub fn reduce_phase(x: DoubleDouble) -> Result<Phase> {
    if !x.is_finite() {
        return Err(Error::Precision(format!(
            "cannot reduce non-finite value {x:?}"
        )));
    }
    if x.hi.abs() > MAX_REDUCIBLE {
        return Err(Error::Precision(format!(
            "|{}| exceeds the reducible range 2^52",
            x.hi
        )));
    }
    let int_part = x.hi.floor();
    // hi - floor(hi) is exact in this range.
    let r = DoubleDouble::from_f64(x.hi - int_part) + DoubleDouble::from_f64(x.lo);
    Ok(Phase::wrap(r.hi - r.hi.floor() + r.lo))
}

/// `exp(2*pi*i*x)`.
///
/// The phase is split into a multiple of 1/4 and a remainder in `[-1/8, 1/8]`,
/// so quarter-turns are exact and the trigonometric calls see small arguments.
pub fn e_of(x: Phase) -> Complex64 {
    let v = x.value();
    let quarter = (v * 4.0).round();
    let r = v - quarter * 0.25;
    let (s, c) = (TAU * r).sin_cos();
    match (quarter as i64).rem_euclid(4) {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}
