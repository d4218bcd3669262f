//! The delta-symbol expansion on a small grid and a Poisson summation check.

use gl3lab::analysis::{BumpKind, BumpWeight};
use gl3lab::deltamethod::{delta_eval, poisson_check, DeltaExpansion};
use num_complex::Complex64;

fn main() -> gl3lab::Result<()> {
    for (c, q) in [(20.0, 1), (50.0, 3)] {
        let d = DeltaExpansion::new(c, q)?;
        let values: Vec<String> = (-3..=3).map(|n| format!("{:.2e}", delta_eval(&d, n, 10).unwrap_or(f64::NAN))).collect();
        println!("C = {c}, q = {q}, normaliser/C = {:.4}: delta(-3..3) = [{}]", d.normalizer() / c, values.join(", "));
    }

    let v = BumpWeight::new(BumpKind::SymmetricPlateau, 2.0)?.dilate(6.0);
    let k: Vec<Complex64> = (0..9).map(|a| Complex64::new((a * a % 9) as f64, (a % 4) as f64 - 1.5)).collect();
    let r = poisson_check(&k, &v)?;
    println!(
        "Poisson: lhs {:.12}, rhs {:.12}, diff {:.2e}, dual terms {}, tail bound {:.1e}",
        r.lhs, r.rhs, r.diff, r.cutoff, r.tail_bound
    );
    Ok(())
}
