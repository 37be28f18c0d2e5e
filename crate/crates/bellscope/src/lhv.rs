//! Numerical check of the local-hidden-variable side of the inequality.
//!
//! A deterministic local strategy assigns a fixed response I_n(phi) = +-1
//! to every site and grid setting; the mixture over hidden variables is
//! maximized at such an extremal strategy because the scalar product is
//! linear in the mixing weights. On the grid phi_k = 2 pi k / M the
//! scalar product with a pure harmonic factorizes,
//!
//!   value = A Re[e^{-i alpha} prod_n c_n],
//!   c_n   = sum_k I_n(k) e^{i phi_k} (2 pi / M),
//!
//! so sites can be optimized one at a time (the modulus of each c_n)
//! and their phases aligned afterwards by rotating a single site's
//! pattern in whole grid steps. The maximizers of |c_n| are exactly the
//! half-plane sign patterns I(k) = sign(cos(phi_k - theta)), which makes
//! a sweep over the kink cells of theta equivalent to enumerating all
//! 2^M patterns; both searches are provided and agree bitwise.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::observables::HarmonicForm;

/// Per-site enumeration is 2^M patterns; this caps it at 65536.
pub const MAX_EXHAUSTIVE_GRID: usize = 16;

/// Largest grid accepted by the decoupled and greedy maximizers.
pub const MAX_GRID: usize = 4096;

/// Deterministic restarts used by [`maximize_greedy`].
const GREEDY_RESTARTS: u64 = 4;

const GREEDY_MAX_SWEEPS: usize = 200;

/// Deterministic local responses I_n(k) in {+1, -1}, one row per site,
/// one column per grid angle phi_k = 2 pi k / M.
///
/// Serializes as a bit matrix: row strings of '0' (+1) and '1' (-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseStrategy {
    n_qubits: usize,
    grid_size: usize,
    responses: Vec<Vec<i8>>,
}

impl ResponseStrategy {
    pub fn new(n_qubits: usize, grid_size: usize, responses: Vec<Vec<i8>>) -> Result<Self> {
        if n_qubits == 0 || grid_size == 0 {
            return Err(Error::InvalidParameter(
                "strategy needs at least one site and one grid point".into(),
            ));
        }
        if responses.len() != n_qubits {
            return Err(Error::DimensionMismatch { expected: n_qubits, got: responses.len() });
        }
        for row in &responses {
            if row.len() != grid_size {
                return Err(Error::DimensionMismatch { expected: grid_size, got: row.len() });
            }
            if row.iter().any(|&v| v != 1 && v != -1) {
                return Err(Error::InvalidParameter("responses must be exactly +1 or -1".into()));
            }
        }
        Ok(Self { n_qubits, grid_size, responses })
    }

    /// All sites share one response pattern.
    pub fn uniform(n_qubits: usize, pattern: Vec<i8>) -> Result<Self> {
        let grid_size = pattern.len();
        Self::new(n_qubits, grid_size, vec![pattern; n_qubits])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn responses(&self) -> &[Vec<i8>] {
        &self.responses
    }

    pub fn site(&self, n: usize) -> &[i8] {
        &self.responses[n]
    }
}

#[derive(Serialize, Deserialize)]
struct StrategyRepr {
    n_qubits: usize,
    grid_size: usize,
    response_bits: Vec<String>,
}

impl Serialize for ResponseStrategy {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let response_bits = self
            .responses
            .iter()
            .map(|row| row.iter().map(|&v| if v == 1 { '0' } else { '1' }).collect())
            .collect();
        StrategyRepr {
            n_qubits: self.n_qubits,
            grid_size: self.grid_size,
            response_bits,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ResponseStrategy {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = StrategyRepr::deserialize(de)?;
        let mut responses = Vec::with_capacity(repr.response_bits.len());
        for row in &repr.response_bits {
            let decoded: std::result::Result<Vec<i8>, D::Error> = row
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(1),
                    '1' => Ok(-1),
                    other => Err(D::Error::custom(format!("invalid response bit {other:?}"))),
                })
                .collect();
            responses.push(decoded?);
        }
        Self::new(repr.n_qubits, repr.grid_size, responses).map_err(D::Error::custom)
    }
}

/// Which search produced an [`OracleResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMethod {
    Exhaustive,
    Decoupled,
    Greedy,
}

/// Outcome of a strategy search: the achieved scalar product and the
/// strategy that achieved it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_value: f64,
    pub best_strategy: ResponseStrategy,
    pub method: OracleMethod,
}

fn grid_units(m: usize) -> Vec<Complex64> {
    (0..m).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).collect()
}

/// c = (sum_k I_k e^{i phi_k}) * (2 pi / M), summed in grid order.
fn site_factor(pattern: &[i8], units: &[Complex64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (&v, &u) in pattern.iter().zip(units) {
        if v == 1 {
            sum += u;
        } else {
            sum -= u;
        }
    }
    sum * (TAU / units.len() as f64)
}

/// A Re[e^{-i alpha} prod_n c_n], the product folded in site order. Every
/// search path reports values through this one function so that returned
/// maxima agree bitwise with re-evaluating the returned strategy.
fn value_from_factors(harmonic: &HarmonicForm, factors: &[Complex64]) -> f64 {
    let mut prod = Complex64::new(1.0, 0.0);
    for &c in factors {
        prod *= c;
    }
    harmonic.amplitude * (Complex64::from_polar(1.0, -harmonic.phase) * prod).re
}

/// Discrete scalar product <E_qm | E_lhv> of a pure harmonic with a
/// deterministic strategy, by the factorized identity above. Equal to
/// the direct M^N-term rectangle-rule sum.
pub fn scalar_product_discrete(harmonic: &HarmonicForm, strategy: &ResponseStrategy) -> f64 {
    let units = grid_units(strategy.grid_size);
    let factors: Vec<Complex64> =
        strategy.responses.iter().map(|row| site_factor(row, &units)).collect();
    value_from_factors(harmonic, &factors)
}

/// True when `a` sorts before `b` with +1 ordered ahead of -1.
fn lex_less(a: &[i8], b: &[i8]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return *x > *y;
        }
    }
    false
}

fn better(cand_gain: f64, cand: &[i8], best_gain: f64, best: &[i8]) -> bool {
    if cand_gain != best_gain {
        return cand_gain > best_gain;
    }
    lex_less(cand, best)
}

/// Half-plane pattern sign(cos(phi_k - theta)).
fn arc_pattern(theta: f64, m: usize) -> Vec<i8> {
    (0..m)
        .map(|k| if (TAU * k as f64 / m as f64 - theta).cos() >= 0.0 { 1 } else { -1 })
        .collect()
}

/// One candidate per kink cell of theta; the kinks sit where a grid
/// angle crosses the half-plane boundary, at phi_k +- pi/2. Midpoints of
/// consecutive kinks (wrapping once around) hit every cell, so every
/// global maximizer of |c| appears among the candidates.
fn arc_candidates(m: usize) -> Vec<Vec<i8>> {
    let mut kinks: Vec<f64> = (0..m)
        .flat_map(|k| {
            let phi = TAU * k as f64 / m as f64;
            [(phi + FRAC_PI_2).rem_euclid(TAU), (phi - FRAC_PI_2).rem_euclid(TAU)]
        })
        .collect();
    kinks.sort_by(f64::total_cmp);
    let len = kinks.len();
    (0..len)
        .map(|i| {
            let lo = kinks[i];
            let hi = if i + 1 < len { kinks[i + 1] } else { kinks[0] + TAU };
            arc_pattern((lo + hi) / 2.0, m)
        })
        .collect()
}

/// Best single-site pattern by |c|, ties broken toward the
/// lexicographically smallest pattern (+1 before -1).
fn best_site_pattern<I>(candidates: I, units: &[Complex64]) -> Vec<i8>
where
    I: IntoIterator<Item = Vec<i8>>,
{
    let mut best: Option<(f64, Vec<i8>)> = None;
    for cand in candidates {
        let gain = site_factor(&cand, units).norm_sqr();
        match &best {
            Some((bg, bp)) if !better(gain, &cand, *bg, bp) => {}
            _ => best = Some((gain, cand)),
        }
    }
    best.expect("candidate set is never empty").1
}

/// Rotates the site-0 pattern through all m grid steps and both signs,
/// keeping the candidate with the largest scalar product (first
/// candidate wins ties). This is the phase-alignment step: rotating a
/// pattern by r steps multiplies its factor by e^{i 2 pi r / M}.
fn align_site0(
    harmonic: &HarmonicForm,
    mut responses: Vec<Vec<i8>>,
    units: &[Complex64],
) -> (Vec<Vec<i8>>, f64) {
    let m = units.len();
    let mut factors: Vec<Complex64> =
        responses.iter().map(|row| site_factor(row, units)).collect();
    let base = responses[0].clone();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_pattern = base.clone();
    for r in 0..m {
        let rotated: Vec<i8> = (0..m).map(|k| base[(k + m - r) % m]).collect();
        for flip in [false, true] {
            let cand: Vec<i8> = if flip {
                rotated.iter().map(|&v| -v).collect()
            } else {
                rotated.clone()
            };
            factors[0] = site_factor(&cand, units);
            let value = value_from_factors(harmonic, &factors);
            if value > best_value {
                best_value = value;
                best_pattern = cand;
            }
        }
    }
    responses[0] = best_pattern;
    (responses, best_value)
}

fn check_grid(n: usize, m: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one site".into()));
    }
    if m < 4 {
        return Err(Error::InvalidParameter(format!("grid size must be at least 4, got {m}")));
    }
    if m > cap {
        return Err(Error::BudgetExceeded(format!("grid size {m} exceeds cap {cap}")));
    }
    Ok(())
}

fn assemble(
    harmonic: &HarmonicForm,
    n: usize,
    m: usize,
    per_site: Vec<i8>,
    method: OracleMethod,
) -> Result<OracleResult> {
    let units = grid_units(m);
    let (responses, best_value) = align_site0(harmonic, vec![per_site; n], &units);
    Ok(OracleResult {
        best_value,
        best_strategy: ResponseStrategy::new(n, m, responses)?,
        method,
    })
}

/// Maximizes the scalar product site by site: the optimal pattern for
/// each |c_n| is a half-plane sign pattern, found by the kink-cell
/// sweep, and the phases are then aligned by [`align_site0`].
pub fn maximize_decoupled(harmonic: &HarmonicForm, n: usize, m: usize) -> Result<OracleResult> {
    check_grid(n, m, MAX_GRID)?;
    let units = grid_units(m);
    let per_site = best_site_pattern(arc_candidates(m), &units);
    assemble(harmonic, n, m, per_site, OracleMethod::Decoupled)
}

/// Enumerates all 2^M single-site sign patterns (the sites decouple, so
/// the per-site winner plus alignment is the global product maximum).
/// Certifies [`maximize_decoupled`] at small grids; results agree
/// bitwise because both searches rank the same candidates the same way.
pub fn maximize_exhaustive(harmonic: &HarmonicForm, n: usize, m: usize) -> Result<OracleResult> {
    use rayon::prelude::*;
    crate::threads::ensure_pool();

    check_grid(n, m, MAX_EXHAUSTIVE_GRID)?;
    let units = grid_units(m);
    let per_site = (0u64..1 << m)
        .into_par_iter()
        .map(|bits| {
            let pattern: Vec<i8> =
                (0..m).map(|k| if (bits >> k) & 1 == 1 { -1 } else { 1 }).collect();
            let gain = site_factor(&pattern, &units).norm_sqr();
            (gain, pattern)
        })
        .reduce_with(|a, b| if better(b.0, &b.1, a.0, &a.1) { b } else { a })
        .expect("at least one pattern")
        .1;
    assemble(harmonic, n, m, per_site, OracleMethod::Exhaustive)
}

/// Seeded multi-start single-flip ascent; a cross-check path that never
/// sees the arc structure. Each restart flips single responses while the
/// scalar product strictly improves, then gets the same alignment pass.
pub fn maximize_greedy(harmonic: &HarmonicForm, n: usize, m: usize) -> Result<OracleResult> {
    check_grid(n, m, MAX_GRID)?;
    let units = grid_units(m);
    let scale = TAU / m as f64;
    let mut best: Option<(Vec<Vec<i8>>, f64)> = None;

    for restart in 0..GREEDY_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(restart);
        let mut responses: Vec<Vec<i8>> = (0..n)
            .map(|_| (0..m).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())
            .collect();
        let mut factors: Vec<Complex64> =
            responses.iter().map(|row| site_factor(row, &units)).collect();
        let mut value = value_from_factors(harmonic, &factors);

        for _ in 0..GREEDY_MAX_SWEEPS {
            let mut improved = false;
            for site in 0..n {
                for k in 0..m {
                    let old = factors[site];
                    let delta = units[k] * (2.0 * responses[site][k] as f64 * scale);
                    factors[site] = old - delta;
                    let flipped = value_from_factors(harmonic, &factors);
                    if flipped > value {
                        responses[site][k] = -responses[site][k];
                        value = flipped;
                        improved = true;
                    } else {
                        factors[site] = old;
                    }
                }
            }
            if !improved {
                break;
            }
        }

        let (responses, value) = align_site0(harmonic, responses, &units);
        match &best {
            Some((_, bv)) if value <= *bv => {}
            _ => best = Some((responses, value)),
        }
    }

    let (responses, best_value) = best.expect("at least one restart");
    Ok(OracleResult {
        best_value,
        best_strategy: ResponseStrategy::new(n, m, responses)?,
        method: OracleMethod::Greedy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn sign_cos_strategy(n: usize, m: usize) -> ResponseStrategy {
        ResponseStrategy::uniform(n, arc_pattern(0.0, m)).unwrap()
    }

    fn unit_harmonic() -> HarmonicForm {
        HarmonicForm::new(1.0, 0.0).unwrap()
    }

    #[test]
    fn sign_cos_recovers_the_continuum_value() {
        let v = scalar_product_discrete(&unit_harmonic(), &sign_cos_strategy(1, 360));
        assert!((v - 4.0).abs() < 1e-3, "got {v}");

        let v = scalar_product_discrete(&unit_harmonic(), &sign_cos_strategy(2, 360));
        assert!((v - 16.0).abs() < 2e-2, "got {v}");
    }

    #[test]
    fn constant_responses_integrate_to_zero() {
        let strategy = ResponseStrategy::uniform(3, vec![1; 8]).unwrap();
        let v = scalar_product_discrete(&HarmonicForm::new(0.7, 0.4).unwrap(), &strategy);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn factorized_form_equals_the_direct_sum() {
        let m = 8;
        let harmonic = HarmonicForm::new(0.9, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let rows: Vec<Vec<i8>> = (0..2)
                .map(|_| (0..m).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())
                .collect();
            let strategy = ResponseStrategy::new(2, m, rows.clone()).unwrap();
            let step = TAU / m as f64;
            let mut direct = 0.0;
            for k1 in 0..m {
                for k2 in 0..m {
                    let phi = (k1 as f64 + k2 as f64) * step;
                    direct += harmonic.amplitude
                        * (phi - harmonic.phase).cos()
                        * (rows[0][k1] * rows[1][k2]) as f64
                        * step
                        * step;
                }
            }
            let fast = scalar_product_discrete(&harmonic, &strategy);
            assert!((fast - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn negating_one_site_negates_the_value_exactly() {
        let harmonic = HarmonicForm::new(0.8, 1.1).unwrap();
        let m = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<i8>> = (0..3)
            .map(|_| (0..m).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())
            .collect();
        let v = scalar_product_discrete(&harmonic, &ResponseStrategy::new(3, m, rows.clone()).unwrap());
        let mut negated = rows;
        for r in &mut negated[1] {
            *r = -*r;
        }
        let w = scalar_product_discrete(&harmonic, &ResponseStrategy::new(3, m, negated).unwrap());
        assert_eq!(v, -w);
    }

    #[test]
    fn decoupled_approaches_the_bound_at_large_grids() {
        let r = maximize_decoupled(&unit_harmonic(), 3, 256).unwrap();
        assert!(r.best_value >= 0.995 * 64.0, "got {}", r.best_value);
        assert!(r.best_value <= 64.0 * (1.0 + 5.0 / 256.0));
        assert_eq!(r.best_value, scalar_product_discrete(&unit_harmonic(), &r.best_strategy));

        let h = HarmonicForm::new(1.0 / 7.0, 0.0).unwrap();
        let r = maximize_decoupled(&h, 6, 256).unwrap();
        let bound = 4096.0 / 7.0;
        assert!(r.best_value >= 0.995 * bound);
        assert!(r.best_value <= bound * (1.0 + 5.0 / 256.0));
    }

    #[test]
    fn zero_amplitude_maximizes_to_zero() {
        let h = HarmonicForm::new(0.0, 0.0).unwrap();
        assert_eq!(maximize_decoupled(&h, 2, 16).unwrap().best_value, 0.0);
    }

    #[test]
    fn alignment_handles_offset_phases() {
        let h = HarmonicForm::new(0.5, 0.7).unwrap();
        let r = maximize_decoupled(&h, 2, 16).unwrap();
        let bound = 16.0 * 0.5;
        assert!(r.best_value >= bound * (PI / 16.0).cos().powi(2) * 0.999);
        assert!(r.best_value <= bound * (1.0 + 5.0 / 16.0));
    }

    #[test]
    fn exhaustive_matches_decoupled_bitwise() {
        for (n, m) in [(1, 8), (2, 12), (1, 4), (2, 8)] {
            let h = HarmonicForm::new(1.0, 0.0).unwrap();
            let a = maximize_exhaustive(&h, n, m).unwrap();
            let b = maximize_decoupled(&h, n, m).unwrap();
            assert_eq!(a.best_value, b.best_value, "n={n} m={m}");
            assert_eq!(a.best_strategy, b.best_strategy, "n={n} m={m}");
        }
    }

    #[test]
    fn coarsest_grid_lands_strictly_below_the_continuum() {
        // At m = 4 the achievable product phases sit pi/4 away from zero,
        // so the best value is pi rather than the per-site modulus pi*sqrt(2).
        let r = maximize_exhaustive(&unit_harmonic(), 1, 4).unwrap();
        assert_relative_eq!(r.best_value, PI, epsilon = 1e-12);
        assert!(r.best_value < 4.0);
    }

    #[test]
    fn single_site_value_climbs_from_below() {
        // 4 (pi/M) / tan(pi/M) at even M: increasing in M, always below 4.
        let mut last = 0.0;
        for m in [8, 16, 32, 64, 128, 256] {
            let v = maximize_decoupled(&unit_harmonic(), 1, m).unwrap().best_value;
            let expected = 4.0 * (PI / m as f64) / (PI / m as f64).tan();
            assert_relative_eq!(v, expected, max_relative = 1e-12);
            assert!(v > last && v < 4.0);
            last = v;
        }
    }

    #[test]
    fn greedy_is_competitive_with_decoupled() {
        let h = HarmonicForm::new(1.0, 0.4).unwrap();
        let d = maximize_decoupled(&h, 3, 64).unwrap();
        let g = maximize_greedy(&h, 3, 64).unwrap();
        assert!(g.best_value >= 0.9 * d.best_value, "greedy {} vs {}", g.best_value, d.best_value);
        assert!(g.best_value <= d.best_value * (1.0 + 1e-12));
        assert_eq!(g.best_value, scalar_product_discrete(&h, &g.best_strategy));
        assert_eq!(g.method, OracleMethod::Greedy);
    }

    #[test]
    fn grid_guards() {
        let h = unit_harmonic();
        assert!(matches!(maximize_exhaustive(&h, 2, 20), Err(Error::BudgetExceeded(_))));
        assert!(matches!(maximize_decoupled(&h, 2, 3), Err(Error::InvalidParameter(_))));
        assert!(matches!(maximize_decoupled(&h, 2, 8192), Err(Error::BudgetExceeded(_))));
        assert!(matches!(maximize_decoupled(&h, 0, 8), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn strategy_validation_and_serde() {
        assert!(ResponseStrategy::new(2, 3, vec![vec![1, -1, 1], vec![1, 0, 1]]).is_err());
        assert!(ResponseStrategy::new(2, 3, vec![vec![1, -1, 1]]).is_err());
        assert!(ResponseStrategy::new(1, 2, vec![vec![1, -1, 1]]).is_err());

        let s = ResponseStrategy::new(2, 4, vec![vec![1, -1, 1, 1], vec![-1, -1, 1, -1]]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"response_bits\":[\"0100\",\"1101\"]"), "{json}");
        let back: ResponseStrategy = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);

        let bad = r#"{"n_qubits":1,"grid_size":2,"response_bits":["0x"]}"#;
        assert!(serde_json::from_str::<ResponseStrategy>(bad).is_err());
    }

    #[test]
    fn oracle_result_serializes_with_the_bit_matrix() {
        let r = maximize_decoupled(&unit_harmonic(), 1, 4).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["method"], "decoupled");
        assert!(json["best_strategy"]["response_bits"].is_array());
        let back: OracleResult = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }
}
