//! Phase of the GL(3) Voronoi transform against the leading-term prediction.

use gl3lab::analysis::{voronoi_h, voronoi_phase_slope, BumpWeight, Sign};
use gl3lab::coefficients::SpectralParams;

fn main() -> gl3lab::Result<()> {
    let h = BumpWeight::narrow(1.0, 0.05)?;
    let params = SpectralParams::eisenstein();
    for x in [1e3, 1e4, 1e5] {
        let v = voronoi_h(x, &h, &params, Sign::Plus)?;
        let s = voronoi_phase_slope(x, &h, &params, Sign::Plus, 1e-3)?;
        println!(
            "x = {x:>7}: |H+| = {:.4e}, phase slope {:.5e} vs predicted {:.5e}",
            v.value.norm(),
            s.measured,
            s.predicted
        );
    }
    Ok(())
}
