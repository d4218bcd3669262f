//! Hardy's Z: zeros up to height 100 and the cubic moment against its divisor-sum approximation.

use gl3lab::coefficients::{CoefficientProvider, FormKind};
use gl3lab::hardy::{hardy_z, hardy_zeros, moment_table, zero_count_estimate};

fn main() -> gl3lab::Result<()> {
    println!("Z(0) = {:.10}", hardy_z(0.0)?);
    let zeros = hardy_zeros(0.0, 100.0, 0.05)?;
    println!("{} zeros in [0, 100] (estimate {}); first {:.6}", zeros.len(), zero_count_estimate(100.0), zeros[0]);

    let d3 = CoefficientProvider::build(FormKind::EisensteinD3, 2000)?;
    let ts: Vec<f64> = (1..=10).map(|i| 40.0 * i as f64).collect();
    for r in moment_table(d3.table(), &ts, 1e-8)? {
        println!("T = {:>5}: F3 = {:>10.3}, approx = {:>10.3}, diff/T^0.8 = {:.3}", r.t, r.f3, r.f3_approx, r.envelope_ratio());
    }
    Ok(())
}
