//! Functional Bell inequalities over continuous measurement settings.
//!
//! Every party n measures a phase observable O(phi_n) in the x-y plane of
//! the Bloch sphere, so the quantum correlation function E(phi_1, ...,
//! phi_n) is a function on the torus [0, 2pi)^n rather than a finite table.
//! Local hidden variables bound the scalar product <E_qm|E_lhv> by a
//! constant B, and since <E_qm|E_lhv> <= B for every LHV model while
//! E_qm's squared norm is ||E_qm||^2 = <E_qm|E_qm>, the inequality
//! ||E_qm||^2 > B certifies that no LHV model reproduces E_qm.
//!
//! For states whose correlation function is a single harmonic
//! A cos(phi_1 + ... + phi_n - alpha), the bound is B = 4^n A while
//! ||E_qm||^2 = A^2 (2pi)^n / 2, which makes the witness strictly stronger
//! than the standard two-setting Mermin-Klyshko inequalities from four
//! qubits on. The crate covers two families end to end: the generalized
//! GHZ states sin(beta)|0..0> + cos(beta)|1..1> and the bound-entangled
//! Duer states, which violate the functional inequality from n = 6 while
//! staying positive under partial transposition of every single qubit.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example ghz_threshold        amplitude threshold of the GHZ family
//! cargo run --example dur_violation       violation onset for the Duer family
//! cargo run --example bound_entanglement  PPT cut table and the witness together
//! cargo run --example lhv_oracle          discrete LHV maximizers vs the 4^n bound
//! cargo run --example mk_comparison       Mermin-Klyshko baseline comparison
//! cargo run --example correlation_structure  tensors, harmonics, quadrature
//! ```
//!
//! The `bellscope` binary exposes the same machinery as subcommands
//! (`report`, `scan`, `entanglement`, `oracle`, `mk`); see the README.
//!
//! ```
//! use bellscope::{QuantumState, violation_report};
//!
//! let state = QuantumState::generalized_ghz(5, 0.115).unwrap();
//! let report = violation_report(&state, None).unwrap();
//! assert!(report.violated);
//! ```

pub mod cli;
mod error;
pub mod functional;
pub mod lhv;
pub mod mk;
pub mod observables;
pub mod state;
mod threads;

pub use error::{Error, Result};
pub use functional::{
    ghz_threshold_functional, inner_product, lhv_bound_harmonic, norm_sq_analytic,
    norm_sq_quadrature, threshold_comparison, violation_report, NormMethod, QuadratureSpec,
    ThresholdComparison, ViolationReport, MARGIN_TIE_TOL,
};
pub use lhv::{
    maximize_decoupled, maximize_exhaustive, maximize_greedy, scalar_product_discrete,
    OracleMethod, OracleResult, ResponseStrategy,
};
pub use mk::{mk_maximize, mk_value, mk_weights, MkResult, MkSettings, MK_VIOLATION_TOL};
pub use observables::{
    correlation, correlation_tensor, detect_harmonic, phase_observable, CorrelationTensor,
    HarmonicForm, PhaseSettings,
};
pub use state::{
    dur_default_phase, Bipartition, PptCheck, QuantumState, HERMITICITY_TOL, POSITIVITY_TOL,
    TRACE_TOL,
};
