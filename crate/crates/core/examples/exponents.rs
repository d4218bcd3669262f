//! Closed-form exponents across β, in exact rational arithmetic.

use gl3lab::expsums::{bound_calculator, kms_crossover, Exponent};
use gl3lab::hardy::conditional_exponents;

fn main() -> gl3lab::Result<()> {
    println!("{:>6} {:>8} {:>8} {:>8}", "beta", "new", "kms", "ren-ye");
    for (n, d) in [(2, 5), (17, 37), (1, 2), (3, 5), (2, 3), (3, 4)] {
        let b = bound_calculator(1.0, Exponent::new(n, d));
        println!("{:>6} {:>8} {:>8} {:>8}", b.beta.to_string(), b.exponent.to_string(), b.kms.to_string(), b.ren_ye.to_string());
    }
    println!("crossover with the previous bound at beta = {}", kms_crossover());
    let c = conditional_exponents(Exponent::new(1, 18), Exponent::new(1, 4))?;
    println!("eta = 1/18: {}; delta = 1/4: {}", c.from_eta, c.from_delta);
    Ok(())
}
