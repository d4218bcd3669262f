//! Bound ratios of the iterated character sums.

use gl3lab::charsums::{
    a1_bound_sweep, recursive_charsum_a2, GeneralKey, KloostermanTable, A1_ENVELOPE_CONSTANTS, DEFAULT_OP_BUDGET,
};

fn main() -> gl3lab::Result<()> {
    for c in [5u64, 11, 23] {
        let table = KloostermanTable::new(c)?;
        let rows = a1_bound_sweep(1, 2, &table, 3, DEFAULT_OP_BUDGET)?;
        for k in 1..=3 {
            let worst = rows.iter().filter(|r| r.k == k).map(|r| r.ratio).fold(0.0, f64::max);
            println!("C = {c:>2}, k = {k}: max ratio {worst:.3} (constant {})", A1_ENVELOPE_CONSTANTS[k as usize - 1]);
        }
    }

    let key = GeneralKey { u: 1, v: 1, c: 6, q: 2, q1: 1, q2: 1, q3: 1, big_q: 6, k: 2, a: 1, b: 5 };
    let r = recursive_charsum_a2(&key, DEFAULT_OP_BUDGET)?;
    println!("general sum, C = Q = 6, q = 2, k = 2: {:.4} (envelope {:.2})", r.value, r.envelope);
    Ok(())
}
