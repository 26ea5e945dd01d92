//! The derivation-chain registry: ten both-sides comparisons, each
//! materialized as a [`StepReport`].
//!
//! Steps S1-S5 and S8 check identities that hold to quadrature accuracy
//! and carry a pass/fail verdict with a tolerance scaled from
//! `cfg.abs_tol`. Steps S6, S7, S9 and S10 are `measured_only`: they
//! evaluate manipulations the source derivation does not establish
//! computationally (the mixture rewrite, the signed-measure mass, the
//! convolution-class diagnostics, the strip floor), so the pipeline
//! records their numbers without laundering them into a green checkmark.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::NumericConfig;
use crate::divisibility::{ggc_diagnostics, kristiansen_lt, DiscreteMixture};
use crate::error::Result;
use crate::mixture::{
    half_identity_report, rhs_as_written, SignedMixtureMeasure,
};
use crate::numerics::{cm_test, integrate_half_line_real};
use crate::scanner::scan_strip;
use crate::theta::{psi_kernel, psi_kernel_alternate, psi_kernel_series_residual};
use crate::xi::{xi_cosine_integral, xi_direct, xi_kernel_transform};
use crate::{Cplx, Real};

/// Identifier of one derivation-chain check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum StepId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
}

impl StepId {
    pub const ALL: [StepId; 10] = [
        StepId::S1,
        StepId::S2,
        StepId::S3,
        StepId::S4,
        StepId::S5,
        StepId::S6,
        StepId::S7,
        StepId::S8,
        StepId::S9,
        StepId::S10,
    ];
}

impl std::fmt::Display for StepId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for StepId {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        StepId::ALL
            .iter()
            .copied()
            .find(|id| format!("{id:?}") == s)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("unknown step id: {s}")))
    }
}

/// Verdict of one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    MeasuredOnly,
}

/// Complex number in report form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexParts {
    pub re: Real,
    pub im: Real,
}

impl From<Cplx> for ComplexParts {
    fn from(v: Cplx) -> Self {
        ComplexParts { re: v.re, im: v.im }
    }
}

/// Machine-readable record of one executed step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub step_id: StepId,
    pub description: String,
    /// Parameters and secondary measurements, stringified deterministically.
    pub inputs: BTreeMap<String, String>,
    /// Both sides of the comparison; absent when the step errored.
    pub lhs: Option<ComplexParts>,
    pub rhs: Option<ComplexParts>,
    pub abs_residual: Option<Real>,
    pub rel_residual: Option<Real>,
    pub verdict: Verdict,
    /// Present exactly for toleranced steps.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance_used: Option<Real>,
    /// Wall-clock runtime. Populated in memory on every run but stripped
    /// from serialized reports unless timing output is requested, so that
    /// identical runs produce byte-identical files.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
    /// Structured failure captured from the underlying modules.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Parameters of a pipeline run. The defaults reproduce the desk-scale
/// verification described in the README.
#[derive(Debug, Clone, PartialEq)]
pub struct StepParams {
    /// Truncation level of the mixture series.
    pub n_max: u32,
    /// S1 grid: t in [0, t_max] step t_step.
    pub t_max: Real,
    pub t_step: Real,
    /// S2/S4 grid: u in [0, u_max] step u_step.
    pub u_max: Real,
    pub u_step: Real,
    /// S3 sample points z (re, im), all with |Re z| < 1/2.
    pub z_samples: Vec<(Real, Real)>,
    /// S5 grid: s values crossed with sigma values.
    pub phi_s_values: Vec<Real>,
    pub phi_sigma_values: Vec<Real>,
    /// S8: number of random mixtures and the generator seed.
    pub kristiansen_fixtures: usize,
    pub seed: u64,
    /// S9 diagnostics: sigma and the s-grid for the ratio.
    pub ggc_sigma: Real,
    pub ggc_grid: Vec<Real>,
    /// S10 census: (sigma_lo, sigma_hi, d_sigma, t_lo, t_hi, d_t).
    pub strip: (Real, Real, Real, Real, Real, Real),
}

impl Default for StepParams {
    fn default() -> Self {
        StepParams {
            n_max: 16,
            t_max: 30.0,
            t_step: 0.25,
            u_max: 5.0,
            u_step: 0.25,
            z_samples: vec![
                (0.4, 0.0),
                (-0.4, 0.0),
                (0.3, 0.0),
                (-0.3, 0.0),
                (0.2, 0.0),
                (-0.2, 0.0),
                (0.1, 0.0),
                (-0.1, 0.0),
                (0.1, 0.1),
                (-0.15, -0.1),
            ],
            phi_s_values: vec![-0.05, -0.025, 0.0, 0.025, 0.05],
            phi_sigma_values: vec![-0.2, -0.1, 0.0, 0.1, 0.2],
            kristiansen_fixtures: 50,
            seed: 0x5eed_cafe,
            ggc_sigma: 0.0,
            ggc_grid: (1..=8).map(|i| 2.5e-4 * i as Real).collect(),
            strip: (0.6, 0.9, 0.05, 0.0, 30.0, 0.25),
        }
    }
}

// Per-step tolerance, as a multiple of cfg.abs_tol. At the default
// abs_tol = 1e-12 these pin the acceptance thresholds; looser configs
// loosen every step monotonically.
fn tolerance_factor(id: StepId) -> Option<Real> {
    match id {
        StepId::S1 => Some(1e4),  // two-route agreement, 1e-8 at default
        StepId::S2 => Some(1e4),  // kernel series residual, 1e-8
        StepId::S3 => Some(1e5),  // kernel transform vs direct, 1e-7
        StepId::S4 => Some(1e2),  // Gaussian half-line identity, 1e-10
        StepId::S5 => Some(1e5),  // phi <-> Xi correspondence, 1e-7
        StepId::S8 => Some(10.0), // CM slack
        _ => None,
    }
}

fn fmt(v: Real) -> String {
    format!("{v:.17e}")
}

struct StepBody {
    description: String,
    inputs: BTreeMap<String, String>,
    lhs: Cplx,
    rhs: Cplx,
    /// Overrides |lhs - rhs| when the step's residual is not literally
    /// that distance (S8 encodes its criterion this way).
    residual_override: Option<Real>,
}

/// Executes one step. Underlying errors are captured in the report, never
/// propagated as a crash.
pub fn run_step(id: StepId, params: &StepParams, cfg: &NumericConfig<Real>) -> StepReport {
    let started = Instant::now();
    let outcome = dispatch(id, params, cfg);
    let runtime_ms = started.elapsed().as_millis() as u64;
    let tolerance_used = tolerance_factor(id).map(|f| f * cfg.abs_tol);

    match outcome {
        Ok(body) => {
            let abs_residual = body
                .residual_override
                .unwrap_or_else(|| (body.lhs - body.rhs).norm());
            let scale = body.lhs.norm().max(body.rhs.norm());
            let rel_residual = if scale > 0.0 {
                abs_residual / scale
            } else {
                abs_residual
            };
            let verdict = match tolerance_used {
                Some(tol) => {
                    if abs_residual <= tol {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    }
                }
                None => Verdict::MeasuredOnly,
            };
            StepReport {
                step_id: id,
                description: body.description,
                inputs: body.inputs,
                lhs: Some(body.lhs.into()),
                rhs: Some(body.rhs.into()),
                abs_residual: Some(abs_residual),
                rel_residual: Some(rel_residual),
                verdict,
                tolerance_used,
                runtime_ms: Some(runtime_ms),
                error: None,
            }
        }
        Err(err) => StepReport {
            step_id: id,
            description: format!("{id} failed to execute"),
            inputs: BTreeMap::new(),
            lhs: None,
            rhs: None,
            abs_residual: None,
            rel_residual: None,
            verdict: Verdict::Fail,
            tolerance_used,
            runtime_ms: Some(runtime_ms),
            error: Some(err.to_string()),
        },
    }
}

/// Runs S1 through S10 in order.
pub fn run_all(params: &StepParams, cfg: &NumericConfig<Real>) -> Vec<StepReport> {
    StepId::ALL
        .iter()
        .map(|&id| run_step(id, params, cfg))
        .collect()
}

/// True when some toleranced step failed (the pipeline's exit criterion).
pub fn any_toleranced_failure(reports: &[StepReport]) -> bool {
    reports.iter().any(|r| r.verdict == Verdict::Fail)
}

/// Canonical JSON for one report. Timing is stripped unless requested so
/// identical runs serialize byte-identically.
pub fn report_to_json(report: &StepReport, include_timing: bool) -> String {
    let mut r = report.clone();
    if !include_timing {
        r.runtime_ms = None;
    }
    serde_json::to_string_pretty(&r).expect("report serialization cannot fail")
}

/// Canonical JSON summary of a full run.
pub fn summary_to_json(reports: &[StepReport], include_timing: bool) -> String {
    #[derive(Serialize)]
    struct Line {
        step_id: StepId,
        verdict: Verdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        abs_residual: Option<Real>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tolerance_used: Option<Real>,
        #[serde(skip_serializing_if = "Option::is_none")]
        runtime_ms: Option<u64>,
    }
    #[derive(Serialize)]
    struct Summary {
        overall: &'static str,
        steps: Vec<Line>,
    }
    let summary = Summary {
        overall: if any_toleranced_failure(reports) {
            "fail"
        } else {
            "pass"
        },
        steps: reports
            .iter()
            .map(|r| Line {
                step_id: r.step_id,
                verdict: r.verdict,
                abs_residual: r.abs_residual,
                tolerance_used: r.tolerance_used,
                runtime_ms: if include_timing { r.runtime_ms } else { None },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&summary).expect("summary serialization cannot fail")
}

fn dispatch(id: StepId, params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    match id {
        StepId::S1 => step_two_route_agreement(params, cfg),
        StepId::S2 => step_kernel_series(params, cfg),
        StepId::S3 => step_kernel_transform(params, cfg),
        StepId::S4 => step_gaussian_half_line(params, cfg),
        StepId::S5 => step_phi_correspondence(params, cfg),
        StepId::S6 => step_mixture_identity(params, cfg),
        StepId::S7 => step_sign_census(params, cfg),
        StepId::S8 => step_gamma_mixture_divisibility(params, cfg),
        StepId::S9 => step_ratio_diagnostics(params, cfg),
        StepId::S10 => step_strip_census(params, cfg),
    }
}

fn grid(max: Real, step: Real) -> Vec<Real> {
    let count = (max / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| i as Real * step).collect()
}

/// S1: the cosine-integral representation against the direct product,
/// maximized over a real grid.
fn step_two_route_agreement(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let mut worst: Option<(Real, Cplx, Cplx)> = None;
    for t in grid(params.t_max, params.t_step) {
        let routed = xi_cosine_integral(Cplx::new(t, 0.0), cfg)?;
        let direct = xi_direct(Cplx::new(0.5, t), cfg)?;
        let residual = (routed.value - direct).norm();
        if worst.is_none() || residual > worst.as_ref().unwrap().0 {
            worst = Some((residual, routed.value, direct));
        }
    }
    let (residual, lhs, rhs) = worst.expect("grid is nonempty");
    let mut inputs = BTreeMap::new();
    inputs.insert("t_max".into(), fmt(params.t_max));
    inputs.insert("t_step".into(), fmt(params.t_step));
    inputs.insert("max_residual".into(), fmt(residual));
    Ok(StepBody {
        description: "cosine-integral representation of Xi against the direct product xi(1/2+it) \
                      on a real grid"
            .into(),
        inputs,
        lhs,
        rhs,
        residual_override: Some(residual),
    })
}

/// S2: the two series forms of the even kernel on a u-grid.
fn step_kernel_series(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let mut worst = (0.0_f64, 0.0_f64);
    for u in grid(params.u_max, params.u_step) {
        let residual = psi_kernel_series_residual(u, cfg)?;
        if residual >= worst.0 {
            worst = (residual, u);
        }
    }
    let (residual, u_star) = worst;
    let lhs = Cplx::new(psi_kernel(u_star, cfg)?, 0.0);
    let rhs = Cplx::new(psi_kernel_alternate(u_star, cfg)?, 0.0);
    let mut inputs = BTreeMap::new();
    inputs.insert("u_max".into(), fmt(params.u_max));
    inputs.insert("u_step".into(), fmt(params.u_step));
    inputs.insert("argmax_u".into(), fmt(u_star));
    Ok(StepBody {
        description: "evenness/series form of the kernel: psi(e^u)e^{u/4} - e^{-u/4}/2 against \
                      e^{-u/4}psi(e^{-u}) - e^{u/4}/2 (equivalent to the theta transformation)"
            .into(),
        inputs,
        lhs,
        rhs,
        residual_override: Some(residual),
    })
}

/// S3: the bilateral kernel transform against xi(1/2 - z), plus the
/// residual of the alternative reading xi(1/2 + z) for the record.
fn step_kernel_transform(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let mut worst: Option<(Real, Cplx, Cplx, Cplx)> = None;
    for &(re, im) in &params.z_samples {
        let z = Cplx::new(re, im);
        let routed = xi_kernel_transform(z, cfg)?;
        let direct = xi_direct(Cplx::new(0.5, 0.0) - z, cfg)?;
        let residual = (routed.value - direct).norm();
        if worst.is_none() || residual > worst.as_ref().unwrap().0 {
            worst = Some((residual, routed.value, direct, z));
        }
    }
    let (residual, lhs, rhs, z_star) = worst.expect("sample set is nonempty");
    let alternate = xi_direct(Cplx::new(0.5, 0.0) + z_star, cfg)?;
    let mut inputs = BTreeMap::new();
    inputs.insert("samples".into(), params.z_samples.len().to_string());
    inputs.insert("argmax_z_re".into(), fmt(z_star.re));
    inputs.insert("argmax_z_im".into(), fmt(z_star.im));
    inputs.insert(
        "residual_vs_reflected_reading".into(),
        fmt((lhs - alternate).norm()),
    );
    Ok(StepBody {
        description: "bilateral kernel transform of Xi(iz) against xi(1/2 - z); the inputs also \
                      record the distance to the reflected reading xi(1/2 + z), which only \
                      coincides through the functional equation"
            .into(),
        inputs,
        lhs,
        rhs,
        residual_override: Some(residual),
    })
}

/// S4: the Gaussian half-line integral identity
/// `int_0^inf e^{-pi v^2 e^{-u}} dv = e^{u/2} / 2`.
fn step_gaussian_half_line(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let mut worst: Option<(Real, Cplx, Cplx)> = None;
    for u in grid(params.u_max, params.u_step) {
        let scale = (-u).exp();
        let quad = integrate_half_line_real(
            |v: Real| (-std::f64::consts::PI * v * v * scale).exp(),
            1.0,
            cfg,
        )?;
        let expected = Cplx::new(0.5 * (0.5 * u).exp(), 0.0);
        let residual = (quad.value - expected).norm();
        if worst.is_none() || residual > worst.as_ref().unwrap().0 {
            worst = Some((residual, quad.value, expected));
        }
    }
    let (residual, lhs, rhs) = worst.expect("grid is nonempty");
    let mut inputs = BTreeMap::new();
    inputs.insert("u_max".into(), fmt(params.u_max));
    inputs.insert("u_step".into(), fmt(params.u_step));
    inputs.insert("max_residual".into(), fmt(residual));
    Ok(StepBody {
        description: "Gaussian half-line identity int_0^inf e^{-pi v^2 e^{-u}} dv = e^{u/2}/2 \
                      on a u-grid"
            .into(),
        inputs,
        lhs,
        rhs,
        residual_override: Some(residual),
    })
}

/// S5: the normalized transform against Xi under the observed argument
/// mapping z = 2s + sigma.
fn step_phi_correspondence(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    use crate::divisibility::phi_sigma;
    let mut worst: Option<(Real, Cplx, Cplx, Real, Real)> = None;
    for &sigma in &params.phi_sigma_values {
        for &s in &params.phi_s_values {
            let eval = phi_sigma(Cplx::new(s, 0.0), sigma, cfg)?;
            let z = 2.0 * s + sigma;
            let lhs = eval.value * eval.normalizer * (z * z - 0.25) / 2.0;
            let rhs = xi_direct(Cplx::new(0.5 - z, 0.0), cfg)?;
            let residual = (lhs - rhs).norm();
            if worst.is_none() || residual > worst.as_ref().unwrap().0 {
                worst = Some((residual, lhs, rhs, s, sigma));
            }
        }
    }
    let (residual, lhs, rhs, s_star, sigma_star) = worst.expect("grid is nonempty");
    let mut inputs = BTreeMap::new();
    inputs.insert(
        "grid".into(),
        format!(
            "{} s-values x {} sigma-values",
            params.phi_s_values.len(),
            params.phi_sigma_values.len()
        ),
    );
    inputs.insert("argmax_s".into(), fmt(s_star));
    inputs.insert("argmax_sigma".into(), fmt(sigma_star));
    inputs.insert("argument_mapping".into(), "z = 2s + sigma".into());
    Ok(StepBody {
        description: "normalized kernel transform phi_sigma(s) xi(sigma) ((2s+sigma)^2-1/4)/2 \
                      against xi(1/2-(2s+sigma)); zeros correspond under the same mapping"
            .into(),
        inputs,
        lhs,
        rhs,
        residual_override: Some(residual),
    })
}

/// S6: the positive-half mixture rewrite, measured only.
fn step_mixture_identity(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let s = Cplx::new(0.0, 0.0);
    let report = half_identity_report(s, 0.0, params.n_max, cfg)?;
    let coarse = rhs_as_written(s, 0.0, (params.n_max / 2).max(1), true, cfg)?;
    let fine = rhs_as_written(s, 0.0, params.n_max, true, cfg)?;

    let mut inputs = BTreeMap::new();
    inputs.insert("n_max".into(), params.n_max.to_string());
    inputs.insert("residual_written".into(), fmt(report.residual_written));
    inputs.insert("residual_mixture".into(), fmt(report.residual_mixture));
    inputs.insert(
        "rhs_as_written_re".into(),
        fmt(report.rhs_as_written.re),
    );
    inputs.insert(
        format!("rhs_as_written_re_n{}", (params.n_max / 2).max(1)),
        fmt(coarse.value.re),
    );
    inputs.insert(
        "refinement_delta".into(),
        fmt((fine.value - coarse.value).norm()),
    );
    if let Some(tail) = fine.n_tail_estimate {
        inputs.insert("n_tail_estimate".into(), fmt(tail));
    }
    inputs.insert("grid_error_estimate".into(), fmt(fine.grid_error_estimate));
    if let Some(zero_limit) = fine.zero_lower_limit_value {
        inputs.insert("zero_lower_limit_re".into(), fmt(zero_limit.re));
    }
    Ok(StepBody {
        description: "positive-half mixture rewrite at (s, sigma) = (0, 0): transform side \
                      against the signed-measure form; the literal series form and a zero-lower-\
                      limit reading are recorded in the inputs. Measured only - the rewrite is \
                      not established computationally"
            .into(),
        inputs,
        lhs: report.lhs,
        rhs: report.rhs_mixture_form,
        residual_override: Some(report.residual_mixture),
    })
}

/// S7: sign census of the two-channel measure, measured only.
fn step_sign_census(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    cfg.validate()?;
    let measure = SignedMixtureMeasure::<Real>::build(params.n_max);
    let mut total_exponential = 0.0;
    let mut total_gamma = 0.0;
    let mut worst_exponential: Real = f64::NEG_INFINITY;
    let mut inputs = BTreeMap::new();
    for n in 1..=params.n_max {
        let (exponential, gamma_two) = measure.level_channel_totals(n);
        total_exponential += exponential;
        total_gamma += gamma_two;
        worst_exponential = worst_exponential.max(exponential);
        inputs.insert(format!("r1_total_n{n:02}"), fmt(exponential));
    }
    inputs.insert("n_max".into(), params.n_max.to_string());
    inputs.insert("r2_total".into(), fmt(total_gamma));
    inputs.insert("r1_max_over_levels".into(), fmt(worst_exponential));
    inputs.insert("atom_count".into(), measure.atoms.len().to_string());
    Ok(StepBody {
        description: "sign census of the two-channel measure: the exponential channel carries \
                      strictly negative mass at every level, so the object is a signed measure, \
                      not a distribution function. Measured only"
            .into(),
        inputs,
        lhs: Cplx::new(total_exponential, 0.0),
        rhs: Cplx::new(0.0, 0.0),
        residual_override: None,
    })
}

/// S8: Gamma(2)-mixture transforms are accepted by the CM probe and the
/// non-transform fixture is rejected.
fn step_gamma_mixture_divisibility(
    params: &StepParams,
    cfg: &NumericConfig<Real>,
) -> Result<StepBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let grid = [0.5, 0.8, 1.2, 1.7, 2.3];
    let mut max_violation: Real = 0.0;
    let mut all_passed = true;
    for _ in 0..params.kristiansen_fixtures {
        let atoms: Vec<(Real, Real)> = (0..rng.gen_range(1..=6))
            .map(|_| (rng.gen_range(0.0..5.0), rng.gen_range(0.01..1.0)))
            .collect();
        let mix = DiscreteMixture::new_normalized(atoms)?;
        let report = cm_test(|s| kristiansen_lt(&mix, s).unwrap_or(Real::NAN), &grid, cfg)?;
        all_passed &= report.passed;
        max_violation = max_violation.max(report.max_violation);
    }

    // negative control: 1/(1+s^2) is no Laplace transform of a positive
    // measure; its second difference goes negative below s = 1/sqrt(3).
    // Recorded, not gating: at loose tolerances the slack swallows the
    // control's violation, and the step's verdict must stay monotone in
    // the configured tolerance. The default-tolerance rejection is an
    // acceptance criterion of its own.
    let negative_grid: Vec<Real> = (0..7).map(|i| 0.45 + 0.25 * i as Real).collect();
    let negative = cm_test(|s: Real| 1.0 / (1.0 + s * s), &negative_grid, cfg)?;

    let mut inputs = BTreeMap::new();
    inputs.insert("fixtures".into(), params.kristiansen_fixtures.to_string());
    inputs.insert("seed".into(), params.seed.to_string());
    inputs.insert("order".into(), cfg.cm_order.to_string());
    inputs.insert("all_fixtures_passed".into(), all_passed.to_string());
    inputs.insert("control_rejected".into(), (!negative.passed).to_string());
    inputs.insert(
        "control_max_violation".into(),
        fmt(negative.max_violation),
    );
    Ok(StepBody {
        description: "Gamma(2) scale mixtures pass the complete-monotonicity probe at the \
                      configured order (they are transforms of infinitely divisible laws); the \
                      outcome of the deliberate non-transform fixture 1/(1+s^2) is recorded in \
                      the inputs"
            .into(),
        inputs,
        lhs: Cplx::new(max_violation, 0.0),
        rhs: Cplx::new(0.0, 0.0),
        residual_override: Some(max_violation),
    })
}

/// S9: ratio diagnostics for the would-be convolution-class representation,
/// measured only.
fn step_ratio_diagnostics(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let diag = ggc_diagnostics(params.ggc_sigma, &params.ggc_grid, cfg)?;
    let mut inputs = BTreeMap::new();
    inputs.insert("sigma".into(), fmt(params.ggc_sigma));
    inputs.insert("grid_points".into(), params.ggc_grid.len().to_string());
    inputs.insert(
        "ratio_cm_violations".into(),
        diag.cm_report.violation_count.to_string(),
    );
    inputs.insert(
        "log_ratio_cm_violations".into(),
        diag.log_ratio_cm_report.violation_count.to_string(),
    );
    inputs.insert(
        "near_zero_excluded".into(),
        diag.near_zero_excluded.len().to_string(),
    );
    let increasing = diag.ratio_values.windows(2).all(|w| w[0] < w[1]);
    let decreasing = diag.ratio_values.windows(2).all(|w| w[0] > w[1]);
    inputs.insert(
        "ratio_monotonicity".into(),
        if increasing {
            "increasing".into()
        } else if decreasing {
            "decreasing".into()
        } else {
            "mixed".to_string()
        },
    );
    let last = *diag.ratio_values.last().expect("grid nonempty");
    Ok(StepBody {
        description: "ratio diagnostics R(s) = phi(0)/phi(sqrt(s)): complete-monotonicity \
                      probes of R and -(log R)' recorded. Measured only - no finite stencil \
                      certifies membership in a convolution class"
            .into(),
        inputs,
        lhs: Cplx::new(last, 0.0),
        rhs: Cplx::new(1.0, 0.0),
        residual_override: None,
    })
}

/// S10: the strip census, measured only - evidence, not proof.
fn step_strip_census(params: &StepParams, cfg: &NumericConfig<Real>) -> Result<StepBody> {
    let (sigma_lo, sigma_hi, d_sigma, t_lo, t_hi, d_t) = params.strip;
    let census = scan_strip(sigma_lo, sigma_hi, t_lo, t_hi, d_sigma, d_t, cfg)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(
        "sigma_range".into(),
        format!("[{}, {}] step {}", sigma_lo, sigma_hi, d_sigma),
    );
    inputs.insert(
        "t_range".into(),
        format!("[{}, {}] step {}", t_lo, t_hi, d_t),
    );
    inputs.insert("cells".into(), census.cell_count.to_string());
    inputs.insert("argmin_sigma".into(), fmt(census.argmin.0));
    inputs.insert("argmin_t".into(), fmt(census.argmin.1));
    Ok(StepBody {
        description: "off-line census: minimum of |xi| over the grid is recorded as desk-scale \
                      evidence of nonvanishing, explicitly not a proof"
            .into(),
        inputs,
        lhs: Cplx::new(census.min_abs_xi, 0.0),
        rhs: Cplx::new(0.0, 0.0),
        residual_override: None,
    })
}
