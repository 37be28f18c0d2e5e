//! Two-settings-per-site Mermin-Klyshko baseline.
//!
//! The MK operator is built by the standard recursion
//! B_k = (B_{k-1} (O_k + O_k') + B_{k-1}' (O_k - O_k')) / 2 with
//! B_1 = O_1, normalized so every local-hidden-variable model satisfies
//! B_N <= 1 while quantum mechanics reaches 2^{(N-1)/2}. Expanding the
//! recursion expresses B_N as a weighted sum of full correlation
//! functions, one per choice of primed or unprimed setting at each site;
//! [`mk_weights`] carries those weights and [`mk_value`] contracts them
//! against correlations of a state. Observables stay in the x-y plane.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::CorrelationProfile;
use crate::state::QuantumState;

/// Violation requires value > 1 + this slack.
pub const MK_VIOLATION_TOL: f64 = 1e-9;

const SWEEP_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 500;

/// Two candidate angles per site; site k measures O(pairs[k].0) or
/// O(pairs[k].1). Angles are stored reduced to [0, 2 pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MkSettings {
    pairs: Vec<(f64, f64)>,
}

impl MkSettings {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("settings need at least one site".into()));
        }
        Ok(Self {
            pairs: pairs.into_iter().map(|(a, b)| (a.rem_euclid(TAU), b.rem_euclid(TAU))).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }
}

/// Correlation weights of the expanded MK operator, indexed by the
/// prime-choice word: bit (n - k) of the index is 1 when site k uses its
/// primed setting. Recursion on words: appending site k maps weight w
/// to (w + w-bar)/2 on the unprimed branch and (w - w-bar)/2 on the
/// primed branch, where w-bar is the weight of the all-primes-swapped
/// word.
pub fn mk_weights(n: usize) -> Vec<f64> {
    assert!(n >= 1, "weights need at least one site");
    let mut weights = vec![1.0, 0.0];
    for _ in 1..n {
        let len = weights.len();
        let mut next = vec![0.0; 2 * len];
        for (w, &c) in weights.iter().enumerate() {
            let swapped = weights[!w & (len - 1)];
            next[w << 1] = 0.5 * (c + swapped);
            next[(w << 1) | 1] = 0.5 * (c - swapped);
        }
        weights = next;
    }
    weights
}

/// B_N expectation for a state at fixed settings.
pub fn mk_value(state: &QuantumState, settings: &MkSettings) -> Result<f64> {
    let n = state.n_qubits();
    if settings.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: settings.len() });
    }
    let profile = CorrelationProfile::new(state);
    Ok(contract(&profile, &mk_weights(n), settings.pairs(), n))
}

fn contract(profile: &CorrelationProfile, weights: &[f64], pairs: &[(f64, f64)], n: usize) -> f64 {
    let mut angles = vec![0.0; n];
    let mut total = 0.0;
    for (word, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (k, slot) in angles.iter_mut().enumerate() {
            let pair = pairs[k];
            *slot = if (word >> (n - 1 - k)) & 1 == 0 { pair.0 } else { pair.1 };
        }
        total += w * profile.eval(&angles);
    }
    total
}

/// Best MK value found together with how it was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MkResult {
    pub value: f64,
    pub lhv_bound: f64,
    pub violated: bool,
    pub settings: MkSettings,
    pub restarts: usize,
}

/// Multi-start coordinate ascent over the 2N angles.
///
/// Restricted to any single angle the objective is an exact sinusoid
/// K + U cos x + V sin x, so each coordinate step samples it at
/// x = 0, pi/2, pi and jumps to the analytic maximum atan2(V, U).
/// Restarts are independent and merge to the best value, ties to the
/// lowest restart index; the whole search is deterministic.
pub fn mk_maximize(state: &QuantumState, restarts: usize) -> Result<MkResult> {
    use rayon::prelude::*;
    crate::threads::ensure_pool();

    if restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let n = state.n_qubits();
    let profile = CorrelationProfile::new(state);
    let weights = mk_weights(n);

    let runs: Vec<(f64, Vec<(f64, f64)>)> = (0..restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(restart as u64);
            let mut pairs: Vec<(f64, f64)> =
                (0..n).map(|_| (rng.gen::<f64>() * TAU, rng.gen::<f64>() * TAU)).collect();
            let mut value = contract(&profile, &weights, &pairs, n);
            for _ in 0..MAX_SWEEPS {
                for site in 0..n {
                    for primed in [false, true] {
                        let set = |pairs: &mut Vec<(f64, f64)>, x: f64| {
                            if primed {
                                pairs[site].1 = x;
                            } else {
                                pairs[site].0 = x;
                            }
                        };
                        set(&mut pairs, 0.0);
                        let f0 = contract(&profile, &weights, &pairs, n);
                        set(&mut pairs, FRAC_PI_2);
                        let f1 = contract(&profile, &weights, &pairs, n);
                        set(&mut pairs, PI);
                        let f2 = contract(&profile, &weights, &pairs, n);
                        let mean = 0.5 * (f0 + f2);
                        let (u, v) = (f0 - mean, f1 - mean);
                        set(&mut pairs, v.atan2(u).rem_euclid(TAU));
                    }
                }
                let swept = contract(&profile, &weights, &pairs, n);
                let gain = swept - value;
                value = swept;
                if gain <= SWEEP_TOL {
                    break;
                }
            }
            (value, pairs)
        })
        .collect();

    let (value, pairs) = runs
        .into_iter()
        .reduce(|best, cand| if cand.0 > best.0 { cand } else { best })
        .expect("at least one restart");
    Ok(MkResult {
        value,
        lhv_bound: 1.0,
        violated: value > 1.0 + MK_VIOLATION_TOL,
        settings: MkSettings::new(pairs)?,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::dur_default_phase;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    #[test]
    fn weight_recursion_reproduces_chsh_and_mermin() {
        assert_eq!(mk_weights(1), vec![1.0, 0.0]);
        assert_eq!(mk_weights(2), vec![0.5, 0.5, 0.5, -0.5]);
        assert_eq!(mk_weights(3), vec![0.0, 0.5, 0.5, 0.0, 0.5, 0.0, 0.0, -0.5]);
    }

    #[test]
    fn deterministic_strategies_never_exceed_one() {
        // Independent normalization check: enumerate every deterministic
        // two-outcome assignment and confirm the LHV maximum is exactly 1.
        for n in 1..=4 {
            let weights = mk_weights(n);
            let mut best: f64 = f64::NEG_INFINITY;
            for assign in 0..(1u32 << (2 * n)) {
                let mut value = 0.0;
                for (word, &w) in weights.iter().enumerate() {
                    let mut prod = 1.0;
                    for k in 0..n {
                        let primed = (word >> (n - 1 - k)) & 1;
                        let bit = (assign >> (2 * k + primed)) & 1;
                        prod *= if bit == 1 { -1.0 } else { 1.0 };
                    }
                    value += w * prod;
                }
                best = best.max(value);
            }
            assert_relative_eq!(best, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn mermin_settings_reach_two() {
        let state = QuantumState::generalized_ghz(3, std::f64::consts::FRAC_PI_4).unwrap();
        let settings =
            MkSettings::new(vec![(-PI / 6.0, PI / 3.0); 3]).unwrap();
        let v = mk_value(&state, &settings).unwrap();
        assert!((v - 2.0).abs() <= 1e-14, "got {v}");
    }

    #[test]
    fn ghz_maximum_matches_the_closed_form() {
        let beta = 0.35;
        for n in 2..=6 {
            let state = QuantumState::generalized_ghz(n, beta).unwrap();
            let r = mk_maximize(&state, 16).unwrap();
            let target = (2.0 * beta).sin() * 2f64.powf((n as f64 - 1.0) / 2.0);
            assert_relative_eq!(r.value, target, epsilon = 1e-4);
            assert_eq!(r.lhv_bound, 1.0);
        }
    }

    #[test]
    fn dense_grid_never_beats_the_optimizer_at_two_qubits() {
        let state = QuantumState::generalized_ghz(2, 0.35).unwrap();
        let best = mk_maximize(&state, 16).unwrap().value;
        let steps = 20;
        let mut grid_best = f64::NEG_INFINITY;
        for a in 0..steps {
            for ap in 0..steps {
                for b in 0..steps {
                    for bp in 0..steps {
                        let to = |i: usize| TAU * i as f64 / steps as f64;
                        let settings =
                            MkSettings::new(vec![(to(a), to(ap)), (to(b), to(bp))]).unwrap();
                        grid_best = grid_best.max(mk_value(&state, &settings).unwrap());
                    }
                }
            }
        }
        assert!(grid_best <= best + 1e-6, "grid {grid_best} vs optimizer {best}");
        assert_relative_eq!(best, (0.7f64).sin() * 2f64.sqrt(), epsilon = 1e-6);
    }

    #[test]
    fn dur_crossover_sits_at_eight_qubits() {
        for n in 4..=8 {
            let state = QuantumState::dur(n, dur_default_phase(n)).unwrap();
            let r = mk_maximize(&state, 8).unwrap();
            let target = 2f64.powf((n as f64 - 1.0) / 2.0) / (n as f64 + 1.0);
            assert_relative_eq!(r.value, target, epsilon = 1e-3);
            assert_eq!(r.violated, n >= 8, "n={n} value={}", r.value);
        }
    }

    #[test]
    fn flip_projectors_have_no_xy_correlations() {
        // The mixture terms of the Dur family are basis-state projectors;
        // every x-y correlation of such a state vanishes identically.
        let n = 5;
        let dim = 1usize << n;
        for k in 0..n {
            let idx = 1usize << (n - 1 - k);
            let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
            m[(idx, idx)] = Complex64::new(1.0, 0.0);
            let state = QuantumState::from_matrix(n, m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            for _ in 0..10 {
                let angles: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
                let settings = crate::observables::PhaseSettings::new(&angles);
                let e = crate::observables::correlation(&state, &settings).unwrap();
                assert!(e.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn product_states_respect_the_bound() {
        let n = 3;
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let m = DMatrix::from_element(dim, dim, amp * amp.conj());
        let state = QuantumState::from_matrix(n, m).unwrap();
        let r = mk_maximize(&state, 8).unwrap();
        assert!(r.value <= 1.0 + MK_VIOLATION_TOL, "got {}", r.value);
        assert!(r.value > 0.99);
        assert!(!r.violated);
    }

    #[test]
    fn shifting_any_angle_by_a_turn_changes_nothing() {
        let state = QuantumState::generalized_ghz(3, 0.5).unwrap();
        let base = MkSettings::new(vec![(0.3, 1.1), (2.0, 0.4), (5.0, 2.2)]).unwrap();
        let shifted =
            MkSettings::new(vec![(0.3 + TAU, 1.1), (2.0, 0.4 - TAU), (5.0, 2.2)]).unwrap();
        let a = mk_value(&state, &base).unwrap();
        let b = mk_value(&state, &shifted).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn result_serializes_with_settings() {
        let state = QuantumState::generalized_ghz(2, 0.4).unwrap();
        let r = mk_maximize(&state, 2).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["settings"]["pairs"].is_array());
        let back: MkResult = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn dimension_and_restart_guards() {
        let state = QuantumState::generalized_ghz(3, 0.4).unwrap();
        let settings = MkSettings::new(vec![(0.0, 1.0); 2]).unwrap();
        assert!(mk_value(&state, &settings).is_err());
        assert!(mk_maximize(&state, 0).is_err());
        assert!(MkSettings::new(vec![]).is_err());
    }
}
