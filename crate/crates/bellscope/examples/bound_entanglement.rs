//! Partial-transpose certificates for the Dur family.
//!
//! Every single-qubit cut of a Dur state has positive partial transpose
//! (no entanglement is distillable across those cuts), yet every
//! two-qubit cut is NPT with smallest eigenvalue exactly -1/(2(n+1)),
//! and from n = 6 the same states violate the functional inequality:
//! Bell violation from bound entanglement.
//!
//! Run with: cargo run --release -p bellscope --example bound_entanglement

use bellscope::{dur_default_phase, violation_report, Bipartition, QuantumState, POSITIVITY_TOL};

fn main() {
    for n in [4, 6] {
        let state = QuantumState::dur(n, dur_default_phase(n)).unwrap();
        println!("dur state, n = {n}");
        println!("cut     side_a    min PT eigenvalue    ppt");

        for q in 1..=n {
            let cut = Bipartition::new(&[q], n).unwrap();
            let check = state.ppt_check(&cut, POSITIVITY_TOL).unwrap();
            println!("1:{}     {{{q}}}       {:+.12e}   {}", n - 1, check.min_eigenvalue, check.ppt);
            assert!(check.ppt, "1-cuts must be PPT");
        }

        let expected = -1.0 / (2.0 * (n + 1) as f64);
        for a in 1..=n {
            for b in (a + 1)..=n {
                let cut = Bipartition::new(&[a, b], n).unwrap();
                let check = state.ppt_check(&cut, POSITIVITY_TOL).unwrap();
                if (a, b) <= (1, 3) {
                    println!(
                        "2:{}     {{{a},{b}}}     {:+.12e}   {}",
                        n - 2,
                        check.min_eigenvalue,
                        check.ppt
                    );
                }
                assert!(!check.ppt, "2-cuts must be NPT");
                assert!((check.min_eigenvalue - expected).abs() <= 1e-10);
            }
        }
        println!("all {} two-qubit cuts NPT with min eigenvalue -1/(2(n+1)) = {expected:.6}", n * (n - 1) / 2);
        println!();
    }

    // The purely PPT-looking cuts notwithstanding, n = 6 violates.
    let state = QuantumState::dur(6, dur_default_phase(6)).unwrap();
    let report = violation_report(&state, None).unwrap();
    assert!(report.violated);
    println!(
        "n = 6 verdict: norm_sq {:.6} > bound {:.6} despite PPT across every 1:5 cut",
        report.norm_sq, report.lhv_bound
    );
}
