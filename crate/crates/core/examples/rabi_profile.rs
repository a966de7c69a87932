//! Position-dependent Rabi frequency and the 1D profile W(Ω) that every grid
//! value is read from.
use std::f64::consts::PI;

use atomloc::scenario::preset;

fn main() -> atomloc::Result<()> {
    let s = preset("fig3c")?;
    println!("Ω(u, v) = {} sin u + {} sin v", s.field.omega1, s.field.omega2);
    for k in 0..=8 {
        let u = -PI + k as f64 * PI / 4.0;
        println!("  u = {u:+.3}: Ω(u, u) = {:+.4}", s.field.rabi_at(u, u));
    }

    let grid = s.with_resolution(101, 101).compute_grid()?;
    let profile = grid.rabi_profile(41).expect("grid carries its parameters");
    let top = profile.iter().map(|p| p.1).fold(0.0, f64::max);
    println!("\nW as a function of Ω (normalized grid units):");
    for (omega, w) in profile {
        let bar = "#".repeat((50.0 * w / top).round() as usize);
        println!("  {omega:+6.2} {w:.4e} {bar}");
    }
    Ok(())
}
