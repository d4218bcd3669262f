//! Oscillatory integrals: the second-derivative envelope, ℐ(m, n, q) and the Mellin identity.

use gl3lab::analysis::{
    mellin_exp_identity, oscillatory_quad, sketch_integral, stirling_relative_error, BumpKind, BumpWeight,
    OscillatoryIntegral, SketchParams,
};
use num_complex::Complex64;

fn main() -> gl3lab::Result<()> {
    let w = BumpWeight::new(BumpKind::PlateauOnOneTwo, 4.0)?;
    for a in [10.0, 1e3, 1e5] {
        let integral = OscillatoryIntegral {
            amplitude: Box::new(|t| w.value(t)),
            phase: Box::new(move |t: f64| a * (t - 1.6).powi(2) / 2.0),
            interval: w.support(),
            second_derivative_floor: Some(a),
        };
        let r = oscillatory_quad(&integral, 1e-10)?;
        println!("A = {a:>8}: |I| sqrt(A) = {:.4}, envelope {:.3e}", r.value.norm() * a.sqrt(), r.envelope.unwrap_or(f64::NAN) * a.sqrt());
    }

    let p = SketchParams { t: 1e4, alpha: 1.0, beta: 2.0 / 3.0, m: 1.0, n: 3.0, q: 7.0 };
    let r = sketch_integral(&p, &w, 1e-10)?;
    println!("I(1, 3, 7) at T = 1e4: {:.6e} (error {:.1e})", r.value, r.error_estimate);

    for x in [0.5, 5.0, 50.0] {
        let m = mellin_exp_identity(x, -0.5)?;
        let exact = Complex64::new(0.0, x).exp() - 1.0;
        println!("Mellin at x = {x}: deviation {:.2e}", (m.value - exact).norm());
    }
    for tau in [10.0, 100.0, 1000.0] {
        println!("Stirling relative error at 1/2 + {tau}i: {:.2e}", stirling_relative_error(0.5, tau));
    }
    Ok(())
}
