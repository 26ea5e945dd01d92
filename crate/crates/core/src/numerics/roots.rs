//! Sign-change scanning with bisection refinement.

use serde::{Deserialize, Serialize};

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A refined root together with its final bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketedRoot<T> {
    pub root: T,
    pub bracket: (T, T),
}

/// Scans `[t_lo, t_hi]` in increments of `step`, records sign changes and
/// refines each by bisection until the bracket is narrower than
/// `cfg.abs_tol`. Roots come back in increasing order.
///
/// Root pairs closer together than `step` produce no sign change at the
/// scan resolution and are missed; that is part of the contract.
pub fn find_roots_bracketed<T, F>(
    f: F,
    t_lo: T,
    t_hi: T,
    step: T,
    cfg: &NumericConfig<T>,
) -> Result<Vec<BracketedRoot<T>>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    cfg.validate()?;
    if !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!(
            "scan range inverted or empty: [{t_lo}, {t_hi}]"
        )));
    }
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be > 0, got {step}")));
    }

    let span = t_hi - t_lo;
    let intervals = (span / step).ceil().max(T::one());
    let n = intervals.to_usize().ok_or_else(|| {
        Error::InvalidArgument("scan range produces too many intervals".into())
    })?;
    let width = span / intervals;

    let sample = |i: usize| -> Result<(T, T)> {
        let t = if i == n {
            t_hi
        } else {
            t_lo + T::from_usize(i).unwrap() * width
        };
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::EvaluationFailure(format!(
                "scan sample non-finite at t = {t}"
            )));
        }
        Ok((t, v))
    };

    let mut roots = Vec::new();
    let (mut t_prev, mut f_prev) = sample(0)?;
    if f_prev == T::zero() {
        roots.push(BracketedRoot {
            root: t_prev,
            bracket: (t_prev, t_prev),
        });
    }
    for i in 1..=n {
        let (t_cur, f_cur) = sample(i)?;
        if f_cur == T::zero() {
            roots.push(BracketedRoot {
                root: t_cur,
                bracket: (t_cur, t_cur),
            });
        } else if f_prev * f_cur < T::zero() {
            roots.push(bisect(&f, t_prev, t_cur, f_prev, cfg.abs_tol)?);
        }
        t_prev = t_cur;
        f_prev = f_cur;
    }
    Ok(roots)
}

pub(crate) fn bisect<T, F>(f: &F, mut a: T, mut b: T, mut fa: T, tol: T) -> Result<BracketedRoot<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let half = T::cst(0.5);
    for _ in 0..200 {
        if b - a < tol {
            break;
        }
        let mid = (a + b) * half;
        if mid <= a || mid >= b {
            break; // bracket no longer splittable at working precision
        }
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(Error::EvaluationFailure(format!(
                "bisection sample non-finite at t = {mid}"
            )));
        }
        if fm == T::zero() {
            return Ok(BracketedRoot {
                root: mid,
                bracket: (mid, mid),
            });
        }
        if (fa > T::zero()) == (fm > T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(BracketedRoot {
        root: (a + b) * half,
        bracket: (a, b),
    })
}
