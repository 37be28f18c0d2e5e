//! Violation threshold of the generalized GHZ family.
//!
//! sin(beta)|0..0> + cos(beta)|1..1> violates the functional inequality
//! exactly when sin(2 beta) > 2 (2/pi)^n, a window that widens with n
//! and beats the two-setting threshold 1/sqrt(2^{n-1}) from n = 4 on.
//!
//! Run with: cargo run --release -p bellscope --example ghz_threshold

use bellscope::{ghz_threshold_functional, threshold_comparison, violation_report, QuantumState};

fn main() {
    println!("n   functional threshold   two-setting threshold   functional wins");
    for n in 3..=8 {
        let c = threshold_comparison(n);
        println!(
            "{n}   {:<20.12} {:<23.12} {}",
            c.functional, c.two_setting, c.functional_wins
        );
        assert_eq!(c.functional_wins, n >= 4);
    }

    println!();
    println!("verdicts straddling the threshold (margin relative to the bound):");
    println!("n   sin2b/threshold   violated   margin/bound");
    for n in 3..=8 {
        let threshold = ghz_threshold_functional(n);
        for factor in [0.9, 0.999999, 1.000001, 1.1] {
            let beta = (threshold * factor).asin() / 2.0;
            let state = QuantumState::generalized_ghz(n, beta).unwrap();
            let report = violation_report(&state, None).unwrap();
            println!(
                "{n}   {factor:<17} {:<10} {:+.3e}",
                report.violated,
                report.margin / report.lhv_bound
            );
            assert_eq!(report.violated, factor > 1.0, "n={n} factor={factor}");
        }
    }

    // The threshold formula itself, against the norm and bound it came
    // from: (2pi)^n sin^2/2 = 4^n sin at sin = 2(2/pi)^n.
    for n in 3..=8 {
        let s = ghz_threshold_functional(n);
        let norm_sq = (2.0 * std::f64::consts::PI).powi(n as i32) * s * s / 2.0;
        let bound = 4f64.powi(n as i32) * s;
        assert!((norm_sq - bound).abs() <= 1e-9 * bound);
    }
    println!();
    println!("threshold identity (2pi)^n s^2/2 = 4^n s checked for n = 3..8");
}
