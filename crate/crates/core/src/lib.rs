//! Exact and empirical companions to the Vinogradov-mean-value approach to
//! k-th derivative estimates for exponential sums.
//!
//! * [`corekit`]: exact rationals, double-double phase reduction, `e(x)`, compensated sums.
//! * [`exppair`]: exponent pairs, the A and B processes, process words.
//! * [`meanvalue`]: exact solution counts for Vinogradov's system.
//! * [`expsum`]: phase families, raw exponential sums and the competing upper bounds.
//! * [`counting`]: the pair-counting functions, the spacing lemma and the Fejér product kernel.
//! * [`zetabounds`]: the piecewise-linear exponent function, its exact inequality battery,
//!   the subconvexity constant and empirical zeta main sums.

pub mod corekit;
pub mod counting;
pub mod error;
pub mod exppair;
pub mod expsum;
pub mod meanvalue;
pub mod zetabounds;

pub use error::{Error, Result};
