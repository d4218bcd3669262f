//! Dyadic sweep of Σ λ(1, n) e(α n^β) for sym²Δ and a fitted growth exponent.

use gl3lab::coefficients::{CoefficientProvider, FormKind};
use gl3lab::expsums::{dyadic_grid, exponent_sweep, smoothing_error_split};

fn main() -> gl3lab::Result<()> {
    let p = CoefficientProvider::build(FormKind::SymSquareDelta, 1 << 18)?;
    let report = exponent_sweep(p.table(), 1.0, 2.0 / 3.0, &dyadic_grid(8, 18), None)?;
    for row in &report.rows {
        println!("T = 2^{:<2}  |S| = {:>10.3}", row.t.log2() as u32, row.sum.norm());
    }
    println!("fitted slope {:.3} ± {:.3}", report.fitted_slope, report.slope_stderr);
    if let Some(b) = &report.predicted {
        println!("predicted exponent {} ({:.4}), previous {}", b.exponent, b.exponent_f64(), b.kms);
    }

    let split = smoothing_error_split(p.table(), 16384.0, 1.0, 2.0 / 3.0, 16.0)?;
    println!(
        "smoothed minus sharp dyadic sum: {:.3e}, window terms {}, envelope {:.3}",
        split.difference.norm(),
        split.window_count,
        split.envelope()
    );
    Ok(())
}
