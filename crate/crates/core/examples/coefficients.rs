//! Build both coefficient tables, check the Hecke relation and round-trip the cache.

use gl3lab::coefficients::{
    lambda2, lambda2_from_table, rankin_selberg_ratio, read_cache, write_cache, CoefficientProvider, FormKind,
    TauTable,
};

fn main() -> gl3lab::Result<()> {
    let tau = TauTable::new(64)?;
    println!("tau(p) for p < 20: {:?}", [2, 3, 5, 7, 11, 13, 17, 19].map(|p| tau.get(p).to_string()));

    for kind in [FormKind::EisensteinD3, FormKind::SymSquareDelta] {
        let p = CoefficientProvider::build(kind, 1 << 14)?;
        let head: Vec<String> = p.table()[..8].iter().map(|v| format!("{v:.4}")).collect();
        println!("{}: lambda(1, 1..8) = [{}]", kind.name(), head.join(", "));

        let worst = (1..=40u64)
            .flat_map(|m| (1..=40u64).map(move |n| (m, n)))
            .map(|(m, n)| {
                let a = lambda2(&p, m, n).unwrap_or(f64::NAN);
                (a - lambda2_from_table(&p, m as usize, n as usize)).abs()
            })
            .fold(0.0, f64::max);
        println!("  Hecke relation, m, n <= 40: max deviation {worst:.2e}");
        println!("  Rankin-Selberg ratio at N = 2^14: {:.4}", rankin_selberg_ratio(&p, 1 << 14)?);

        let dir = std::env::temp_dir().join("gl3lab-example-cache");
        std::fs::create_dir_all(&dir)?;
        let path = dir.join(format!("{}.gl3c", kind.name()));
        write_cache(&p, &path)?;
        let back = read_cache(&path)?;
        assert_eq!(back.table(), p.table());
        println!("  cache round trip through {} ok", path.display());
    }
    Ok(())
}
