//! Multiqubit density matrices and bipartite separability checks.
//!
//! Basis convention: qubit 1 maps to the most significant bit of the
//! computational-basis index, so |0...0> is index 0 and |1...1> is the
//! last index. All states are validated Hermitian, unit-trace, positive
//! semidefinite density matrices.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Entries further than this from Hermitian symmetry reject a matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues below the negative of this reject a matrix as non-positive.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Density matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl QuantumState {
    /// Generalized GHZ state sin(beta)|0...0> + cos(beta)|1...1>.
    ///
    /// Requires `n >= 2` and `beta` in `[0, pi/4]`. At `beta = pi/4` this
    /// is the maximally entangled GHZ state; at `beta = 0` it is the
    /// product state |1...1>.
    pub fn generalized_ghz(n: usize, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "generalized GHZ needs n >= 2 qubits, got {n}"
            )));
        }
        if !(0.0..=PI / 4.0 + 1e-15).contains(&beta) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in [0, pi/4], got {beta}"
            )));
        }
        let dim = 1usize << n;
        let (s, c) = (beta.sin(), beta.cos());
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(s * s, 0.0);
        m[(0, dim - 1)] = Complex64::new(s * c, 0.0);
        m[(dim - 1, 0)] = Complex64::new(s * c, 0.0);
        m[(dim - 1, dim - 1)] = Complex64::new(c * c, 0.0);
        Ok(Self { n_qubits: n, matrix: m })
    }

    /// Bound-entangled family of Duer: an equal-weight GHZ projector with
    /// phase `alpha` plus single-excitation projectors,
    ///
    /// rho = 1/(n+1) ( |GHZ><GHZ| + 1/2 sum_k (P_k + Pbar_k) ),
    ///
    /// where |GHZ> = (|0...0> + e^{i alpha}|1...1>)/sqrt(2), P_k projects
    /// onto the basis state with a single 1 at qubit k, and Pbar_k onto
    /// its bit-flipped partner. Requires `n >= 3`.
    pub fn dur(n: usize, alpha: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "the Duer family needs n >= 3 qubits, got {n}"
            )));
        }
        let dim = 1usize << n;
        let w = 1.0 / (n as f64 + 1.0);
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(w / 2.0, 0.0);
        m[(dim - 1, dim - 1)] = Complex64::new(w / 2.0, 0.0);
        m[(0, dim - 1)] = Complex64::from_polar(w / 2.0, -alpha);
        m[(dim - 1, 0)] = Complex64::from_polar(w / 2.0, alpha);
        for k in 1..=n {
            let idx = 1usize << (n - k);
            m[(idx, idx)] += Complex64::new(w / 2.0, 0.0);
            m[(dim - 1 - idx, dim - 1 - idx)] += Complex64::new(w / 2.0, 0.0);
        }
        Ok(Self { n_qubits: n, matrix: m })
    }

    /// Wraps an explicit matrix after validating that it is a density
    /// matrix: Hermitian to [`HERMITICITY_TOL`], unit trace to
    /// [`TRACE_TOL`], and positive semidefinite to [`POSITIVITY_TOL`].
    pub fn from_matrix(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n as u32)
            .filter(|_| (1..=24).contains(&n))
            .ok_or_else(|| Error::InvalidParameter(format!("unsupported qubit count {n}")))?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        let mut herm_dev: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                herm_dev = herm_dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity deviation {herm_dev:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1 within {TRACE_TOL:.0e}")));
        }
        let min_eig = matrix
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} is below -{POSITIVITY_TOL:.0e}"
            )));
        }
        Ok(Self { n_qubits: n, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Hilbert-space dimension 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Eigenvalues of the density matrix, sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut evs: Vec<f64> = self.matrix.symmetric_eigenvalues().iter().cloned().collect();
        evs.sort_by(|a, b| a.total_cmp(b));
        evs
    }

    /// Transposes the tensor factors on side A of `cut`, leaving side B
    /// untouched. The result is Hermitian with the same trace but is not
    /// necessarily positive; its spectrum decides the PPT criterion.
    pub fn partial_transpose(&self, cut: &Bipartition) -> Result<DMatrix<Complex64>> {
        if cut.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: cut.n_qubits });
        }
        let dim = self.dim();
        let mask = cut.mask();
        let keep = !mask & (dim - 1);
        let mut out = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let src_row = (j & mask) | (i & keep);
                let src_col = (i & mask) | (j & keep);
                out[(i, j)] = self.matrix[(src_row, src_col)];
            }
        }
        Ok(out)
    }

    /// Positive-partial-transpose check across `cut`. A negative
    /// eigenvalue below `-tol` certifies entanglement across the cut
    /// (Peres criterion); a PPT verdict alone does not certify
    /// separability for multiqubit cuts.
    pub fn ppt_check(&self, cut: &Bipartition, tol: f64) -> Result<PptCheck> {
        let pt = self.partial_transpose(cut)?;
        let min_eigenvalue = pt
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        Ok(PptCheck { ppt: min_eigenvalue >= -tol, min_eigenvalue })
    }
}

/// Phase constant pi/(4(n-1)) used as the default GHZ phase for the
/// Duer family; the family's properties hold for any phase.
pub fn dur_default_phase(n: usize) -> f64 {
    PI / (4.0 * (n as f64 - 1.0))
}

/// Split of qubits 1..=n into a transposed side A and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    n_qubits: usize,
}

impl Bipartition {
    /// Side A as 1-based qubit labels; both sides must be nonempty.
    pub fn new(side_a: &[usize], n_qubits: usize) -> Result<Self> {
        if side_a.is_empty() {
            return Err(Error::InvalidBipartition("side A is empty".into()));
        }
        let mut sorted = side_a.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != side_a.len() {
            return Err(Error::InvalidBipartition("side A lists a qubit twice".into()));
        }
        if sorted[0] < 1 || *sorted.last().unwrap() > n_qubits {
            return Err(Error::InvalidBipartition(format!(
                "qubit labels must lie in 1..={n_qubits}"
            )));
        }
        if sorted.len() == n_qubits {
            return Err(Error::InvalidBipartition("side B is empty".into()));
        }
        Ok(Self { side_a: sorted, n_qubits })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (1..=self.n_qubits).filter(|q| !self.side_a.contains(q)).collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Basis-index bitmask of side A (qubit 1 is the most significant bit).
    fn mask(&self) -> usize {
        self.side_a.iter().fold(0usize, |m, q| m | (1 << (self.n_qubits - q)))
    }
}

/// Outcome of a PPT check: verdict and the minimum eigenvalue backing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptCheck {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n_qubits: usize,
    dim: usize,
    /// Row-major entries as [re, im] pairs.
    entries: Vec<[f64; 2]>,
}

impl Serialize for QuantumState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = self.matrix[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        StateRepr { n_qubits: self.n_qubits, dim, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuantumState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        if repr.dim != 1usize << repr.n_qubits {
            return Err(D::Error::custom(format!(
                "dim {} does not match 2^{}",
                repr.dim, repr.n_qubits
            )));
        }
        if repr.entries.len() != repr.dim * repr.dim {
            return Err(D::Error::custom(format!(
                "expected {} entries, got {}",
                repr.dim * repr.dim,
                repr.entries.len()
            )));
        }
        let m = DMatrix::from_fn(repr.dim, repr.dim, |i, j| {
            let [re, im] = repr.entries[i * repr.dim + j];
            Complex64::new(re, im)
        });
        QuantumState::from_matrix(repr.n_qubits, m).map_err(D::Error::custom)
    }
}
