//! Finite-difference complete-monotonicity testing.
//!
//! A function f on (0, inf) is completely monotone when (-1)^k f^(k) >= 0
//! for every k. The discrete analogue tested here is
//!
//! ```text
//! (-1)^k Delta_h^k f(s) >= -slack      for all k <= K and grid points s,
//! ```
//!
//! with forward differences of step `h = cfg.cm_step` and
//! `slack = 10 * cfg.abs_tol`. Order-8 differences amplify roundoff by
//! about 2^8, so the slack keeps exactly-CM fixtures from false-failing
//! at working precision.

use serde::{Deserialize, Serialize};

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outcome of a complete-monotonicity probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmReport<T> {
    /// Highest forward-difference order K that was checked.
    pub order_tested: usize,
    /// Grid points the stencils were anchored at.
    pub grid: Vec<T>,
    /// Number of (k, s) pairs that breached the sign requirement.
    pub violation_count: usize,
    /// Worst breach: largest positive value of -(-1)^k Delta_h^k f(s).
    /// Zero when there are no violations.
    pub max_violation: T,
    pub passed: bool,
}

/// Probes `f` for complete monotonicity on `grid`.
///
/// Every grid point must satisfy `s > cm_order * cm_step` so the whole
/// forward stencil stays inside (0, inf). Non-finite samples are an
/// evaluation failure.
pub fn cm_test<T, F>(f: F, grid: &[T], cfg: &NumericConfig<T>) -> Result<CmReport<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    cfg.validate()?;
    let order = cfg.cm_order;
    let h = cfg.cm_step;
    let slack = T::cst(10.0) * cfg.abs_tol;
    let reach = T::from_usize(order).unwrap() * h;

    for &s in grid {
        if !(s > reach) {
            return Err(Error::InvalidArgument(format!(
                "grid point {s} must exceed cm_order * cm_step = {reach}"
            )));
        }
    }

    let mut violation_count = 0usize;
    let mut max_violation = T::zero();

    let mut samples = vec![T::zero(); order + 1];
    let mut diffs = vec![T::zero(); order + 1];
    for &s in grid {
        for (j, slot) in samples.iter_mut().enumerate() {
            let u = s + T::from_usize(j).unwrap() * h;
            let v = f(u);
            if !v.is_finite() {
                return Err(Error::EvaluationFailure(format!(
                    "sample non-finite at s = {u}"
                )));
            }
            *slot = v;
        }
        diffs.copy_from_slice(&samples);
        // Level k of the difference table, with the alternating sign folded in.
        let mut sign = T::one();
        for k in 0..=order {
            if k > 0 {
                for j in 0..=(order - k) {
                    diffs[j] = diffs[j + 1] - diffs[j];
                }
                sign = -sign;
            }
            let signed = sign * diffs[0];
            if signed < -slack {
                violation_count += 1;
                if -signed > max_violation {
                    max_violation = -signed;
                }
            }
        }
    }

    Ok(CmReport {
        order_tested: order,
        grid: grid.to_vec(),
        violation_count,
        max_violation,
        passed: violation_count == 0,
    })
}
