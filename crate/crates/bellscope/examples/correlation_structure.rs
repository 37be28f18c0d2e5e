//! Anatomy of a correlation function on the settings torus.
//!
//! The x-y correlation tensor T_s = Tr((sigma_{s_1} x .. x sigma_{s_n}) rho)
//! expands E(phi_1, .., phi_n) in products of cosines and sines. For the
//! families here the expansion collapses to one harmonic
//! A cos(phi_1 + .. + phi_n - alpha), which is what licenses the 4^n A
//! bound; the example takes the tensor apart and puts it back together.
//!
//! Run with: cargo run --release -p bellscope --example correlation_structure

use bellscope::{
    correlation, correlation_tensor, detect_harmonic, norm_sq_analytic, norm_sq_quadrature,
    PhaseSettings, QuadratureSpec, QuantumState,
};
use std::f64::consts::TAU;

fn main() {
    let n = 4;
    let beta = 0.3;
    let state = QuantumState::generalized_ghz(n, beta).unwrap();
    let tensor = correlation_tensor(&state);

    println!("GHZ(n = {n}, beta = {beta}) correlation tensor (x = 0 bit, y = 1 bit):");
    println!("word   T_s");
    for (word, &t) in tensor.coeffs().iter().enumerate() {
        if t.abs() > 1e-14 {
            println!("{word:04b}   {t:+.12}");
        }
    }

    // Only even-y words survive, with alternating signs: the signature
    // of sin2b cos(sum phi) after angle addition.
    let amp = (2.0 * beta).sin();
    for (word, &t) in tensor.coeffs().iter().enumerate() {
        let ys = (word as u32).count_ones();
        let expected = match ys % 4 {
            0 => amp,
            2 => -amp,
            _ => 0.0,
        };
        assert!((t - expected).abs() <= 1e-12, "word {word:04b}");
    }

    let harmonic = detect_harmonic(&tensor, &state);
    println!();
    println!(
        "detected harmonic: amplitude {:.12}, phase {:.12}, pure: {}",
        harmonic.amplitude, harmonic.phase, harmonic.is_pure_harmonic
    );
    assert!(harmonic.is_pure_harmonic);
    assert!((harmonic.amplitude - amp).abs() <= 1e-12);

    // Tensor evaluation, the harmonic form, and the direct trace all
    // give the same number at arbitrary settings.
    let angles = [0.7, 2.1, 4.9, 0.2];
    let direct = correlation(&state, &PhaseSettings::new(&angles)).unwrap();
    let via_tensor = tensor.evaluate(&angles);
    let via_harmonic = harmonic.evaluate(&angles);
    println!();
    println!("E at {angles:?}:");
    println!("  direct trace      {direct:+.15}");
    println!("  tensor expansion  {via_tensor:+.15}");
    println!("  harmonic form     {via_harmonic:+.15}");
    assert!((direct - via_tensor).abs() <= 1e-12);
    assert!((direct - via_harmonic).abs() <= 1e-12);

    // Norm two ways: orthogonality (pi^n sum T^2) and quadrature, which
    // is exact at four points per dimension for degree-2 integrands.
    let analytic = norm_sq_analytic(&tensor);
    let quad = norm_sq_quadrature(&tensor, &QuadratureSpec::default()).unwrap();
    let closed = TAU.powi(n as i32) * amp * amp / 2.0;
    println!();
    println!("norm_sq analytic  {analytic:.12}");
    println!("norm_sq quadrature {quad:.12}");
    println!("closed form       {closed:.12}");
    assert!((analytic - quad).abs() <= 1e-10 * closed);
    assert!((analytic - closed).abs() <= 1e-12 * closed);

    // A state whose correlation is not a single harmonic: the uniform
    // superposition has T = 1 only on the all-x word.
    let dim = 1usize << n;
    let amp2 = nalgebra::DMatrix::from_element(
        dim,
        dim,
        num_complex::Complex64::new(1.0 / dim as f64, 0.0),
    );
    let plus = QuantumState::from_matrix(n, amp2).unwrap();
    let h = detect_harmonic(&correlation_tensor(&plus), &plus);
    println!();
    println!("|+..+> detected as pure harmonic: {}", h.is_pure_harmonic);
    assert!(!h.is_pure_harmonic);
}
