//! Kloosterman sums, the Weil bound and correlation sums.

use gl3lab::arith::{divisor_count, gcd};
use gl3lab::charsums::{closed_form_m0, correlation_sum, kloosterman, ramanujan, CorrelationKey, CorrelationSign};

fn main() -> gl3lab::Result<()> {
    for c in [7u64, 12, 25, 97] {
        let s = kloosterman(1, 1, c)?;
        println!("S(1, 1; {c}) = {s:>9.5}  Ramanujan c_{c}(1) = {}", ramanujan(1, c)?);
    }

    let mut worst: f64 = 0.0;
    for c in 2..=60u64 {
        for a in 1..c as i64 {
            let g = gcd(a, c as i64) as f64;
            let bound = divisor_count(c) as f64 * (g * c as f64).sqrt();
            worst = worst.max(kloosterman(a, 1, c)?.abs() / bound);
        }
    }
    println!("max |S(a, 1; c)| / Weil bound over c <= 60: {worst:.4}");

    let key = CorrelationKey { m: 0, n1: 1, n2: 1, c1: 3, c2: 3, sign: CorrelationSign::Plus };
    println!("C+(0, 1, 1; 3, 3) = {} (closed form {})", correlation_sum(&key)?.re.round(), closed_form_m0(&key)?);
    let key = CorrelationKey { m: 5, c1: 4, c2: 9, ..key };
    println!("C+(5, 1, 1; 4, 9) = {:.6}", correlation_sum(&key)?);
    Ok(())
}
