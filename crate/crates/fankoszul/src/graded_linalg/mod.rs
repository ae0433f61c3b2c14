//! Exact graded linear algebra over the rationals.

pub mod matrix;
pub mod module;
pub mod poly;

pub use matrix::{q, q_from_str, q_to_string, qfrac, Mat, Q};
pub use module::{kernel_degreewise, DegreewiseModule, GradedMap};
pub use poly::{subst_cached, FreeShape, PolyMat};

use crate::{Error, Result};

/// Default internal-degree cutoff for a fan of the given rank and largest shift.
pub fn default_cutoff(rank: usize, max_shift: i64) -> i64 {
    2 * rank as i64 + max_shift.abs() + 6
}

/// Largest cutoff tried before giving up.
pub const CUTOFF_CAP: i64 = 256;

/// Runs `f` with increasing cutoffs, doubling whenever it reports that the cutoff was too small.
pub fn with_cutoff<T>(start: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut d = start.max(2);
    loop {
        match f(d) {
            Err(Error::CutoffTooSmall { cutoff }) => {
                if d >= CUTOFF_CAP {
                    return Err(Error::CutoffTooSmall { cutoff });
                }
                d = (2 * d).min(CUTOFF_CAP);
            }
            other => return other,
        }
    }
}
