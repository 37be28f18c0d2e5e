//! The functional inequality itself: norms on the settings torus, the
//! scalar-product bound for harmonic correlations, and verdicts.
//!
//! A violation holds when ||E_qm||^2 exceeds the local bound B strictly.
//! For a pure harmonic A cos(phi_1 + ... + phi_n - alpha) the two sides
//! are ||E_qm||^2 = A^2 (2pi)^n / 2 and B = 4^n A; both are computed
//! here, the norm either analytically from the correlation tensor or by
//! rectangle-rule quadrature, which is exact for trigonometric
//! polynomials of per-variable degree below the number of grid points.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{correlation_tensor, detect_harmonic, CorrelationTensor, HarmonicForm};
use crate::state::QuantumState;

/// Margins this close to zero count as ties and report "not violated".
pub const MARGIN_TIE_TOL: f64 = 1e-12;

/// Hard cap on the total number of quadrature nodes M^n.
pub const QUADRATURE_BUDGET: f64 = 1e8;

/// Relative tolerance for the optional quadrature cross-check of the
/// analytic norm.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// Product rectangle rule on [0, 2pi)^n with M left-endpoint nodes per
/// dimension. Exact for trigonometric polynomials of per-variable degree
/// at most M - 1, so M = 4 already integrates squared correlations
/// exactly; larger M only spreads floating-point error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    points_per_dim: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_POINTS: usize = 4;

    pub fn new(points_per_dim: usize) -> Result<Self> {
        if points_per_dim < 3 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least 3 points per dimension, got {points_per_dim}"
            )));
        }
        Ok(Self { points_per_dim })
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    /// Errors out when M^n would exceed [`QUADRATURE_BUDGET`] nodes.
    pub fn check_budget(&self, n: usize) -> Result<()> {
        let total = (self.points_per_dim as f64).powi(n as i32);
        if total > QUADRATURE_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "{}^{} = {:.2e} quadrature nodes exceed {:.0e}",
                self.points_per_dim, n, total, QUADRATURE_BUDGET
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { points_per_dim: Self::DEFAULT_POINTS }
    }
}

/// <f|g> = integral of f*g over [0, 2pi)^n by the product rectangle rule.
///
/// The outer dimension is split across threads; every chunk is summed in
/// index order and the chunk results are folded in index order, so the
/// result does not depend on the thread count.
pub fn inner_product<F, G>(f: F, g: G, n: usize, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
{
    use rayon::prelude::*;
    crate::threads::ensure_pool();

    if n == 0 {
        return Err(Error::InvalidParameter("inner product needs n >= 1".into()));
    }
    quad.check_budget(n)?;
    let m = quad.points_per_dim;
    let step = TAU / m as f64;
    let inner_count: u64 = (m as u64).pow(n as u32 - 1);

    let chunks: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|k0| {
            let mut angles = vec![0.0; n];
            angles[0] = k0 as f64 * step;
            let mut sum = 0.0;
            for flat in 0..inner_count {
                let mut rest = flat;
                for slot in angles.iter_mut().skip(1) {
                    *slot = (rest % m as u64) as f64 * step;
                    rest /= m as u64;
                }
                sum += f(&angles) * g(&angles);
            }
            sum
        })
        .collect();
    Ok(chunks.iter().sum::<f64>() * step.powi(n as i32))
}

/// ||E||^2 from the tensor alone: the basis functions prod f_{s_n} are
/// orthogonal with squared norm pi per variable, so
/// ||E||^2 = pi^n sum_s T_s^2.
pub fn norm_sq_analytic(tensor: &CorrelationTensor) -> f64 {
    PI.powi(tensor.n_qubits() as i32) * tensor.sum_of_squares()
}

/// ||E||^2 by quadrature of the tensor-reconstructed correlation.
pub fn norm_sq_quadrature(tensor: &CorrelationTensor, quad: &QuadratureSpec) -> Result<f64> {
    let n = tensor.n_qubits();
    inner_product(|a| tensor.evaluate(a), |a| tensor.evaluate(a), n, quad)
}

/// Local-hidden-variable bound B = 4^n A on <E_qm|E_lhv> for a pure
/// harmonic with amplitude A. Errors for non-harmonic forms, where this
/// bound is not established.
pub fn lhv_bound_harmonic(harmonic: &HarmonicForm, n: usize) -> Result<f64> {
    if !harmonic.is_pure_harmonic {
        return Err(Error::NotHarmonic);
    }
    Ok(4f64.powi(n as i32) * harmonic.amplitude)
}

/// How the reported norm was obtained: analytically from the tensor, or
/// analytically with a passing quadrature cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    Analytic,
    Quadrature,
}

/// Verdict of the functional inequality for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub n_qubits: usize,
    pub norm_sq: f64,
    pub lhv_bound: f64,
    /// norm_sq - lhv_bound; positive margins beyond [`MARGIN_TIE_TOL`]
    /// mean violation.
    pub margin: f64,
    pub violated: bool,
    pub method: NormMethod,
    pub harmonic: HarmonicForm,
}

/// Runs the full pipeline on a state: tensor extraction, harmonic
/// detection, analytic norm (cross-checked by quadrature when `quad` is
/// given and the node budget allows), bound, margin, verdict.
pub fn violation_report(
    state: &QuantumState,
    quad: Option<&QuadratureSpec>,
) -> Result<ViolationReport> {
    let n = state.n_qubits();
    let tensor = correlation_tensor(state);
    let harmonic = detect_harmonic(&tensor, state);
    if !harmonic.is_pure_harmonic {
        return Err(Error::NotHarmonic);
    }
    // For a pure harmonic the norm is a function of the amplitude alone,
    // which keeps the reported margin free of the last-bit phase rounding
    // that the 2^n tensor coefficients would drag in; the tensor identity
    // still has to agree.
    let norm_sq = TAU.powi(n as i32) * harmonic.amplitude * harmonic.amplitude / 2.0;
    let by_tensor = norm_sq_analytic(&tensor);
    let tensor_rel = (by_tensor - norm_sq).abs() / norm_sq.abs().max(1.0);
    if tensor_rel > CROSS_CHECK_TOL {
        return Err(Error::CrossCheckFailed(format!(
            "tensor norm {by_tensor:.12e} vs harmonic norm {norm_sq:.12e} (rel {tensor_rel:.2e})"
        )));
    }
    let mut method = NormMethod::Analytic;
    if let Some(q) = quad {
        let by_quad = norm_sq_quadrature(&tensor, q)?;
        let rel = (by_quad - norm_sq).abs() / norm_sq.abs().max(1.0);
        if rel > CROSS_CHECK_TOL {
            return Err(Error::CrossCheckFailed(format!(
                "quadrature norm {by_quad:.12e} vs analytic {norm_sq:.12e} (rel {rel:.2e})"
            )));
        }
        method = NormMethod::Quadrature;
    }
    let lhv_bound = lhv_bound_harmonic(&harmonic, n)?;
    let margin = norm_sq - lhv_bound;
    Ok(ViolationReport {
        n_qubits: n,
        norm_sq,
        lhv_bound,
        margin,
        violated: margin > MARGIN_TIE_TOL,
        method,
        harmonic,
    })
}

/// Amplitude threshold of the GHZ family: the functional inequality is
/// violated exactly when sin(2 beta) > 2 (2/pi)^n.
pub fn ghz_threshold_functional(n: usize) -> f64 {
    2.0 * (2.0 / PI).powi(n as i32)
}

/// The functional threshold next to the standard two-setting threshold
/// 1/sqrt(2^{n-1}) (exact for odd n; the even-n two-setting optimum is
/// not settled, the formula is the conventional reference value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdComparison {
    pub n_qubits: usize,
    pub functional: f64,
    pub two_setting: f64,
    /// True when the functional witness detects weaker entanglement,
    /// i.e. its threshold is strictly smaller.
    pub functional_wins: bool,
}

pub fn threshold_comparison(n: usize) -> ThresholdComparison {
    let functional = ghz_threshold_functional(n);
    let two_setting = 1.0 / 2f64.powi(n as i32 - 1).sqrt();
    ThresholdComparison {
        n_qubits: n,
        functional,
        two_setting,
        functional_wins: functional < two_setting,
    }
}
