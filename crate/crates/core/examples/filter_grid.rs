//! Normalized filter-function grid, exact and through the Ω lookup table.
use std::time::Instant;

use atomloc::grid::{compute_grid_with, GridOptions, SolverMode};
use atomloc::scenario::preset;

fn main() -> atomloc::Result<()> {
    let s = preset("fig2d")?;
    for (label, opts) in [
        ("closed form", GridOptions::solver(SolverMode::General)),
        ("printed form", GridOptions::solver(SolverMode::PaperForm)),
        ("printed form, Ω table", GridOptions { fast_table: true, ..GridOptions::solver(SolverMode::PaperForm) }),
    ] {
        let start = Instant::now();
        let g = compute_grid_with(&s.params, &s.init, &s.field, &s.query, &s.grid, &opts)?;
        let (i, j) = g.spec.nearest_node(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        println!(
            "{label:24} {}x{} in {:6.1} ms: ∫W = {:.12}, max W = {:.5}, W(π/2, π/2) = {:.5}",
            g.spec.nx,
            g.spec.ny,
            start.elapsed().as_secs_f64() * 1e3,
            g.integral(),
            g.max_value(),
            g.value(i, j)
        );
    }
    Ok(())
}
