//! Pattern label as the detected photon frequency moves, α_c = 0.
use atomloc::analysis::find_peaks;
use atomloc::scenario::preset;

fn main() -> atomloc::Result<()> {
    let base = preset("fig3a")?.with_resolution(151, 151);
    for k in 0..=26 {
        let dk = 13.0 - 0.5 * k as f64;
        let grid = base.clone().with_delta_k(dk).compute_grid()?;
        let r = find_peaks(&grid, 0.5, 0.3)?;
        let q = r.quadrant_mass.unwrap_or_default();
        println!(
            "δ_k = {dk:5.1}: {:12} {:3} peaks, quadrant III mass {:.2}",
            r.pattern.to_string(),
            r.peaks.len(),
            q[2]
        );
    }
    Ok(())
}
