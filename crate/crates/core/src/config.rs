//! Numeric configuration threaded through every evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerances and truncation budgets for the numeric kernels.
///
/// A value of this type fully determines every node set, truncation point
/// and summation order, so identical configs give bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericConfig<T = f64> {
    /// Absolute residual tolerance; also the theta-series tail target and
    /// the bisection bracket width.
    pub abs_tol: T,
    /// Relative residual tolerance.
    pub rel_tol: T,
    /// Truncation point `U` for half-line integrals.
    pub quad_upper_cut: T,
    /// Gauss-Legendre nodes per quadrature panel.
    pub quad_nodes: usize,
    /// Maximum finite-difference order `K` for complete-monotonicity tests.
    pub cm_order: usize,
    /// Finite-difference step `h > 0`.
    pub cm_step: T,
}

impl<T: Scalar> Default for NumericConfig<T> {
    fn default() -> Self {
        NumericConfig {
            abs_tol: T::cst(1e-12),
            rel_tol: T::cst(1e-9),
            quad_upper_cut: T::cst(600.0),
            quad_nodes: 16,
            cm_order: 8,
            cm_step: T::cst(0.05),
        }
    }
}

impl<T: Scalar> NumericConfig<T> {
    /// Checks the field invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidArgument("abs_tol must be > 0".into()));
        }
        if !(self.rel_tol > T::zero()) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidArgument("rel_tol must be > 0".into()));
        }
        if !(self.quad_upper_cut > T::zero()) || !self.quad_upper_cut.is_finite() {
            return Err(Error::InvalidArgument("quad_upper_cut must be > 0".into()));
        }
        if self.quad_nodes == 0 {
            return Err(Error::InvalidArgument("quad_nodes must be >= 1".into()));
        }
        if self.cm_order == 0 {
            return Err(Error::InvalidArgument("cm_order must be >= 1".into()));
        }
        if !(self.cm_step > T::zero()) || !self.cm_step.is_finite() {
            return Err(Error::InvalidArgument("cm_step must be > 0".into()));
        }
        Ok(())
    }

    /// Same config with a different half-line truncation point.
    pub fn with_upper_cut(mut self, cut: T) -> Self {
        self.quad_upper_cut = cut;
        self
    }

    /// Same config with a different finite-difference step.
    pub fn with_cm_step(mut self, step: T) -> Self {
        self.cm_step = step;
        self
    }
}

/// Full run configuration: numeric kernel settings plus the knobs the
/// verification pipeline and CLI add on top.
///
/// This is the schema of the flat `key = value` config file accepted by
/// the CLI; unknown keys are rejected, missing keys take defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub quad_upper_cut: f64,
    pub quad_nodes: usize,
    pub cm_order: usize,
    pub cm_step: f64,
    /// Truncation level for the mixture series over n.
    pub n_max: usize,
    /// Default t-step for line and strip scans.
    pub scan_step: f64,
    /// Default sigma-step for strip scans.
    pub scan_dsigma: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let num = NumericConfig::<f64>::default();
        RunConfig {
            abs_tol: num.abs_tol,
            rel_tol: num.rel_tol,
            quad_upper_cut: num.quad_upper_cut,
            quad_nodes: num.quad_nodes,
            cm_order: num.cm_order,
            cm_step: num.cm_step,
            n_max: 16,
            scan_step: 0.05,
            scan_dsigma: 0.05,
        }
    }
}

impl RunConfig {
    /// The kernel-level slice of the configuration.
    pub fn numeric(&self) -> NumericConfig<f64> {
        NumericConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            quad_upper_cut: self.quad_upper_cut,
            quad_nodes: self.quad_nodes,
            cm_order: self.cm_order,
            cm_step: self.cm_step,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.numeric().validate()?;
        if self.n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be >= 1".into()));
        }
        if !(self.scan_step > 0.0) {
            return Err(Error::InvalidArgument("scan_step must be > 0".into()));
        }
        if !(self.scan_dsigma > 0.0) {
            return Err(Error::InvalidArgument("scan_dsigma must be > 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        NumericConfig::<f64>::default().validate().unwrap();
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_fields() {
        let cfg = NumericConfig::<f64> {
            abs_tol: 0.0,
            ..NumericConfig::default()
        };
        assert!(cfg.validate().is_err());

        let cfg = NumericConfig::<f64> {
            cm_step: -1.0,
            ..NumericConfig::default()
        };
        assert!(cfg.validate().is_err());

        let cfg = NumericConfig::<f64> {
            quad_nodes: 0,
            ..NumericConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn f32_instantiation_works() {
        let cfg = NumericConfig::<f32> {
            abs_tol: 1e-5,
            ..NumericConfig::default()
        };
        cfg.validate().unwrap();
    }
}
