//! Desk-scale zero census on the critical line and a positive floor for
//! |xi| on off-line grids of the strip.
//!
//! Scans partition their range into independent node evaluations that may
//! run on any number of threads; the detection and merge steps consume the
//! node values in index order, so parallel and serial runs produce
//! bit-identical results.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::numerics::roots::{bisect, BracketedRoot};
use crate::scalar::Scalar;
use crate::xi::{xi_cosine_integral, xi_direct, XiRoute};

/// One refined zero of `Xi` on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroHit<T> {
    pub t: T,
    pub bracket_width: T,
    pub route: XiRoute,
}

/// Zero census over a scanned range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList<T> {
    pub zeros: Vec<ZeroHit<T>>,
    pub range_scanned: (T, T),
    pub scan_step: T,
}

/// Grid minimum of `|xi|` over a rectangle of the strip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripCensus<T> {
    pub sigma_grid: Vec<T>,
    pub t_grid: Vec<T>,
    pub min_abs_xi: T,
    pub argmin: (T, T),
    pub cell_count: usize,
}

/// Default scan step below t = 60; the minimal zero gap at desk scale is
/// more than an order of magnitude larger.
pub const DEFAULT_SCAN_STEP: f64 = 0.05;

/// Real `Xi(t)` by the requested route.
pub fn xi_line_value<T: Scalar>(t: T, route: XiRoute, cfg: &NumericConfig<T>) -> Result<T> {
    match route {
        XiRoute::Direct => Ok(xi_direct(Complex::new(T::cst(0.5), t), cfg)?.re),
        XiRoute::CosineIntegral => Ok(xi_cosine_integral(Complex::new(t, T::zero()), cfg)?
            .value
            .re),
        XiRoute::KernelTransform => Err(Error::InvalidArgument(
            "the kernel transform covers |Re z| < 1/2 and cannot scan the line".into(),
        )),
    }
}

/// Sign-change scan of `Xi` over `[t_lo, t_hi]` with bisection refinement.
///
/// Node evaluation fans out over threads; detection and merge are
/// sequential in node order, so the result is deterministic.
pub fn scan_critical_line<T: Scalar>(
    t_lo: T,
    t_hi: T,
    step: T,
    route: XiRoute,
    cfg: &NumericConfig<T>,
) -> Result<ZeroList<T>> {
    cfg.validate()?;
    if !(t_lo >= T::zero()) || !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!(
            "scan range must satisfy 0 <= t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be > 0, got {step}")));
    }

    let span = t_hi - t_lo;
    let intervals = (span / step).ceil().max(T::one());
    let n = intervals
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("scan range produces too many intervals".into()))?;
    let width = span / intervals;

    let node = |i: usize| -> T {
        if i == n {
            t_hi
        } else {
            t_lo + T::from_usize(i).unwrap() * width
        }
    };
    let f = |t: T| xi_line_value(t, route, cfg).unwrap_or_else(|_| T::nan());

    let values: Vec<T> = (0..=n).into_par_iter().map(|i| f(node(i))).collect();
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::EvaluationFailure(format!(
                "scan sample non-finite at t = {}",
                node(i)
            )));
        }
    }

    // classify intervals in index order, then refine in parallel
    enum Hit<T> {
        Exact(T),
        Change(usize),
    }
    let mut hits = Vec::new();
    if values[0] == T::zero() {
        hits.push(Hit::Exact(node(0)));
    }
    for i in 1..=n {
        if values[i] == T::zero() {
            hits.push(Hit::Exact(node(i)));
        } else if values[i - 1] * values[i] < T::zero() {
            hits.push(Hit::Change(i - 1));
        }
    }

    let refined: Vec<Result<BracketedRoot<T>>> = hits
        .par_iter()
        .map(|hit| match hit {
            Hit::Exact(t) => Ok(BracketedRoot {
                root: *t,
                bracket: (*t, *t),
            }),
            Hit::Change(i) => bisect(&f, node(*i), node(*i + 1), values[*i], cfg.abs_tol),
        })
        .collect();

    let mut zeros = Vec::with_capacity(refined.len());
    for r in refined {
        let root = r?;
        zeros.push(ZeroHit {
            t: root.root,
            bracket_width: root.bracket.1 - root.bracket.0,
            route,
        });
    }

    Ok(ZeroList {
        zeros,
        range_scanned: (t_lo, t_hi),
        scan_step: step,
    })
}

/// Evaluates `|xi(sigma + it)|` on a rectangular grid strictly inside the
/// right half of the strip and returns the minimum with its location.
///
/// This is evidence gathering at desk scale, explicitly not a proof of
/// nonvanishing.
pub fn scan_strip<T: Scalar>(
    sigma_lo: T,
    sigma_hi: T,
    t_lo: T,
    t_hi: T,
    d_sigma: T,
    d_t: T,
    cfg: &NumericConfig<T>,
) -> Result<StripCensus<T>> {
    cfg.validate()?;
    let half = T::cst(0.5);
    if !(half < sigma_lo) || !(sigma_lo < sigma_hi) || !(sigma_hi < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "sigma range must satisfy 1/2 < lo < hi < 1, got [{sigma_lo}, {sigma_hi}]"
        )));
    }
    if !(t_lo <= t_hi) {
        return Err(Error::InvalidArgument(format!(
            "t range inverted: [{t_lo}, {t_hi}]"
        )));
    }
    if !(d_sigma > T::zero()) || !(d_t > T::zero()) {
        return Err(Error::InvalidArgument("grid steps must be > 0".into()));
    }

    let sigma_grid = build_grid(sigma_lo, sigma_hi, d_sigma);
    let t_grid = build_grid(t_lo, t_hi, d_t);
    if sigma_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidArgument("census grid is empty".into()));
    }

    let cells: Vec<(usize, usize)> = (0..sigma_grid.len())
        .flat_map(|j| (0..t_grid.len()).map(move |i| (j, i)))
        .collect();
    let values: Vec<T> = cells
        .par_iter()
        .map(|&(j, i)| {
            xi_direct(Complex::new(sigma_grid[j], t_grid[i]), cfg)
                .map(|v| v.norm())
                .unwrap_or_else(|_| T::nan())
        })
        .collect();

    let mut min_abs_xi = T::infinity();
    let mut argmin = (sigma_grid[0], t_grid[0]);
    for (&(j, i), &v) in cells.iter().zip(&values) {
        if !v.is_finite() {
            return Err(Error::EvaluationFailure(format!(
                "census sample non-finite at sigma = {}, t = {}",
                sigma_grid[j], t_grid[i]
            )));
        }
        if v < min_abs_xi {
            min_abs_xi = v;
            argmin = (sigma_grid[j], t_grid[i]);
        }
    }

    Ok(StripCensus {
        cell_count: cells.len(),
        sigma_grid,
        t_grid,
        min_abs_xi,
        argmin,
    })
}

fn build_grid<T: Scalar>(lo: T, hi: T, step: T) -> Vec<T> {
    let count_f = ((hi - lo) / step + T::cst(1e-9)).floor();
    let count = count_f.to_usize().unwrap_or(0) + 1;
    (0..count)
        .map(|i| lo + T::from_usize(i).unwrap() * step)
        .collect()
}

/// Zero counts over `[0, t_hi]` from the direct product route and the
/// cosine-integral route; the two must agree.
pub fn zero_count_cross_check<T: Scalar>(t_hi: T, cfg: &NumericConfig<T>) -> Result<(usize, usize)> {
    if !(t_hi > T::zero()) || !(t_hi <= T::cst(60.0)) {
        return Err(Error::InvalidArgument(format!(
            "cross-check covers 0 < t_hi <= 60, got {t_hi}"
        )));
    }
    let step = T::cst(DEFAULT_SCAN_STEP);
    let direct = scan_critical_line(T::zero(), t_hi, step, XiRoute::Direct, cfg)?;
    let integral = scan_critical_line(T::zero(), t_hi, step, XiRoute::CosineIntegral, cfg)?;
    Ok((direct.zeros.len(), integral.zeros.len()))
}
