//! Functional violation onset in the Dur family.
//!
//! The Dur states mix a phased GHZ projector with flip-pair projectors;
//! their correlation keeps the single-harmonic shape with amplitude
//! 1/(n+1), so norm and bound have closed forms and the verdict flips
//! at n = 6 no matter the phase parameter.
//!
//! Run with: cargo run --release -p bellscope --example dur_violation

use std::f64::consts::TAU;

use bellscope::{dur_default_phase, violation_report, QuantumState};

fn main() {
    println!("n   norm_sq          lhv_bound        margin           violated");
    for n in 3..=8 {
        let state = QuantumState::dur(n, dur_default_phase(n)).unwrap();
        let report = violation_report(&state, None).unwrap();

        let closed_norm = TAU.powi(n as i32) / (2.0 * ((n + 1) * (n + 1)) as f64);
        let closed_bound = 4f64.powi(n as i32) / (n + 1) as f64;
        assert!((report.norm_sq - closed_norm).abs() <= 1e-12 * closed_norm);
        assert!((report.lhv_bound - closed_bound).abs() <= 1e-12 * closed_bound);
        assert_eq!(report.violated, n >= 6, "onset must sit at n = 6");

        println!(
            "{n}   {:<16.9} {:<16.9} {:+.9e}   {}",
            report.norm_sq, report.lhv_bound, report.margin, report.violated
        );
    }

    // The phase parameter rotates the harmonic but cannot move the
    // margin: 12 phases, one margin.
    println!();
    for n in [5, 6] {
        let margins: Vec<f64> = (0..12)
            .map(|k| {
                let alpha = k as f64 * 0.5;
                let state = QuantumState::dur(n, alpha).unwrap();
                violation_report(&state, None).unwrap().margin
            })
            .collect();
        let spread = margins.iter().fold(0.0f64, |acc, m| acc.max((m - margins[0]).abs()));
        println!("n = {n}: margin spread over 12 phases = {spread:.3e}");
        assert!(spread <= 1e-10);
    }
}
