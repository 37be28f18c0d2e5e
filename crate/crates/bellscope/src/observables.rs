//! Phase observables in the x-y plane and the correlation functions they
//! induce on the settings torus.
//!
//! O(phi) = cos(phi) sigma_x + sin(phi) sigma_y has eigenvalues +-1 and
//! only off-diagonal entries, so the full correlation
//! E(phi_1, ..., phi_n) = Tr((O(phi_1) x ... x O(phi_n)) rho) picks up
//! exactly the anti-diagonal matrix elements rho[complement(u), u]. That
//! identity drives every evaluator here: the trace reduces to
//! E = sum_u rho[~u, u] e^{i sum_n (2 u_n - 1) phi_n}, a trigonometric
//! polynomial of degree one per variable.

use std::f64::consts::TAU;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::QuantumState;

/// Cross coefficients at or below this count as zero when deciding
/// whether a correlation function is a pure harmonic.
pub const HARMONIC_TOL: f64 = 1e-12;

/// The spin observable cos(phi) sigma_x + sin(phi) sigma_y, written
/// directly as [[0, e^{-i phi}], [e^{i phi}, 0]].
pub fn phase_observable(phi: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, -phi),
        Complex64::from_polar(1.0, phi),
        Complex64::new(0.0, 0.0),
    )
}

/// One angle per qubit, stored reduced into [0, 2pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSettings {
    angles: Vec<f64>,
}

impl PhaseSettings {
    pub fn new(angles: &[f64]) -> Self {
        Self { angles: angles.iter().map(|a| a.rem_euclid(TAU)).collect() }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Sparse list of the anti-diagonal entries gamma_u = rho[~u, u] that a
/// phase-observable correlation can see. Building it costs one pass over
/// 2^n entries; evaluation is O(terms * n).
#[derive(Debug, Clone)]
pub(crate) struct CorrelationProfile {
    n: usize,
    terms: Vec<(usize, Complex64)>,
}

impl CorrelationProfile {
    pub(crate) fn new(state: &QuantumState) -> Self {
        let n = state.n_qubits();
        let dim = state.dim();
        let full = dim - 1;
        let mut terms = Vec::new();
        for u in 0..dim {
            let gamma = state.entry(full ^ u, u);
            if gamma != Complex64::new(0.0, 0.0) {
                terms.push((u, gamma));
            }
        }
        Self { n, terms }
    }

    /// E(angles) = sum_u gamma_u e^{i sum_n (2 u_n - 1) angle_n}. The sum
    /// is real for Hermitian states; the real part is returned.
    pub(crate) fn eval(&self, angles: &[f64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(u, gamma) in &self.terms {
            let mut theta = 0.0;
            for (k, &angle) in angles.iter().enumerate() {
                if (u >> (self.n - 1 - k)) & 1 == 1 {
                    theta += angle;
                } else {
                    theta -= angle;
                }
            }
            acc += gamma * Complex64::from_polar(1.0, theta);
        }
        debug_assert!(acc.im.abs() <= 1e-9 * (1.0 + acc.re.abs()));
        acc.re
    }
}

/// Full correlation Tr((O(phi_1) x ... x O(phi_n)) rho), a real number in
/// [-1, 1].
pub fn correlation(state: &QuantumState, settings: &PhaseSettings) -> Result<f64> {
    if settings.len() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.n_qubits(),
            got: settings.len(),
        });
    }
    Ok(CorrelationProfile::new(state).eval(settings.angles()))
}

/// Coefficients T_s = Tr((sigma_{s_1} x ... x sigma_{s_n}) rho) over all
/// words s in {x, y}^n. Word index: bit (n - k) of the index is 1 when
/// site k measures sigma_y, matching the basis-index convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor {
    n_qubits: usize,
    coeffs: Vec<f64>,
}

impl CorrelationTensor {
    /// Builds a tensor from raw coefficients, one per word in {x, y}^n.
    pub fn from_coeffs(n_qubits: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                got: coeffs.len(),
            });
        }
        Ok(Self { n_qubits, coeffs })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coeff(&self, word: usize) -> f64 {
        self.coeffs[word]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.coeffs.iter().map(|t| t * t).sum()
    }

    /// E(angles) = sum_s T_s prod_n f_{s_n}(angle_n) with f_x = cos and
    /// f_y = sin.
    pub fn evaluate(&self, angles: &[f64]) -> f64 {
        let n = self.n_qubits;
        assert_eq!(angles.len(), n, "settings length must match qubit count");
        let cs: Vec<(f64, f64)> = angles.iter().map(|a| (a.cos(), a.sin())).collect();
        let mut total = 0.0;
        for (s, &t) in self.coeffs.iter().enumerate() {
            if t == 0.0 {
                continue;
            }
            let mut prod = t;
            for (k, &(c, si)) in cs.iter().enumerate() {
                prod *= if (s >> (n - 1 - k)) & 1 == 1 { si } else { c };
            }
            total += prod;
        }
        total
    }
}

/// Extracts the full x-y correlation tensor of `state`. Each T_s is the
/// trace against a Pauli word, computed through the anti-diagonal
/// profile; sigma_x contributes 1 on both off-diagonal slots and sigma_y
/// contributes -i at (0,1) and i at (1,0).
pub fn correlation_tensor(state: &QuantumState) -> CorrelationTensor {
    use rayon::prelude::*;
    crate::threads::ensure_pool();

    let n = state.n_qubits();
    let profile = CorrelationProfile::new(state);
    let words = 1usize << n;
    let coeffs: Vec<f64> = (0..words)
        .into_par_iter()
        .map(|s| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(u, gamma) in &profile.terms {
                let mut factor = Complex64::new(1.0, 0.0);
                for k in 0..n {
                    let bit_pos = n - 1 - k;
                    if (s >> bit_pos) & 1 == 1 {
                        // sigma_y entry at (u_k, 1 - u_k)
                        factor *= if (u >> bit_pos) & 1 == 1 {
                            Complex64::new(0.0, 1.0)
                        } else {
                            Complex64::new(0.0, -1.0)
                        };
                    }
                }
                acc += gamma * factor;
            }
            debug_assert!(acc.im.abs() <= 1e-9 * (1.0 + acc.re.abs()));
            acc.re
        })
        .collect();
    CorrelationTensor { n_qubits: n, coeffs }
}

/// Single-harmonic form A cos(phi_1 + ... + phi_n - phase) of a
/// correlation function, when it has one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicForm {
    pub amplitude: f64,
    pub phase: f64,
    pub is_pure_harmonic: bool,
}

impl HarmonicForm {
    /// Synthetic harmonic with a known amplitude and phase offset.
    pub fn new(amplitude: f64, phase: f64) -> Result<Self> {
        if amplitude < 0.0 || amplitude.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "harmonic amplitude must be nonnegative, got {amplitude}"
            )));
        }
        Ok(Self { amplitude, phase: phase.rem_euclid(TAU), is_pure_harmonic: true })
    }

    pub fn evaluate(&self, angles: &[f64]) -> f64 {
        self.amplitude * (angles.iter().sum::<f64>() - self.phase).cos()
    }
}

/// Reads off the harmonic A cos(sum phi - alpha) carried by the extreme
/// coherence gamma = <0..0|rho|1..1>: A = 2|gamma| and alpha = -arg gamma.
///
/// The form is a *pure* harmonic exactly when every mixed-word cross
/// coefficient Tr((M_{u_1} x ... x M_{u_n}) rho) vanishes, where
/// M_0 = |0><1| and M_1 = |1><0|; each such coefficient is the matrix
/// entry rho[~u, u], so the check scans the anti-diagonal. As a numerical
/// guard the tensor norm identity sum_s T_s^2 = 2^{n-1} A^2 must hold too.
pub fn detect_harmonic(tensor: &CorrelationTensor, state: &QuantumState) -> HarmonicForm {
    let dim = state.dim();
    let full = dim - 1;
    let gamma = state.entry(0, full);
    let amplitude = 2.0 * gamma.norm();
    let phase = if amplitude > 0.0 { (-gamma.arg()).rem_euclid(TAU) } else { 0.0 };

    let mut pure = true;
    for u in 1..full {
        if state.entry(full ^ u, u).norm() > HARMONIC_TOL {
            pure = false;
            break;
        }
    }
    if pure {
        let expected = 2f64.powi(state.n_qubits() as i32 - 1) * amplitude * amplitude;
        if (tensor.sum_of_squares() - expected).abs() > 1e-10 * (1.0 + expected) {
            pure = false;
        }
    }
    HarmonicForm { amplitude, phase, is_pure_harmonic: pure }
}
