//! Coupling phase π mirrors the landscape through the origin: W(u, v) with
//! α_c = 0 equals W(−u, −v) with α_c = π.
use atomloc::grid::{transform_compare, GridMap};
use atomloc::scenario::preset;

fn main() -> atomloc::Result<()> {
    for x in ["a", "b", "c", "d"] {
        let a = preset(&format!("fig3{x}"))?.compute_grid()?;
        let b = preset(&format!("fig4{x}"))?.compute_grid()?;
        println!(
            "panel {x}: identity {:.3e}, point reflection {:.3e}",
            transform_compare(&a, &b, GridMap::Identity)?,
            transform_compare(&a, &b, GridMap::PointReflection)?
        );
    }
    Ok(())
}
