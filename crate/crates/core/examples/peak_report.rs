//! Peaks, masses, quadrant fractions and pattern label for every preset.
use atomloc::analysis::find_peaks;
use atomloc::scenario::presets;

fn main() -> atomloc::Result<()> {
    for s in presets() {
        let grid = s.compute_grid()?;
        let r = find_peaks(&grid, 0.5, 0.3)?;
        let q = r.quadrant_mass.unwrap_or_default();
        println!(
            "{:6} δ_k = {:5.1}: {:2} peaks, {:12} quadrants I-IV [{:.2} {:.2} {:.2} {:.2}]",
            s.name,
            s.query.delta_k,
            r.peaks.len(),
            r.pattern.to_string(),
            q[0],
            q[1],
            q[2],
            q[3]
        );
        for p in r.peaks.iter().take(2) {
            println!(
                "         ({:+.3}, {:+.3}) {:?} height {:.4} disk mass {:.3} basin mass {:.3}",
                p.u, p.v, p.quadrant, p.height, p.mass, p.basin_mass
            );
        }
    }
    Ok(())
}
