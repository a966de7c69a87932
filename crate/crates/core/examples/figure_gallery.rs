//! Grid CSV, heatmap, peak report and gnuplot script for every preset.
//!
//! cargo run --release --example figure_gallery -- gallery/
use std::path::PathBuf;

use atomloc::analysis::find_peaks;
use atomloc::export::{gnuplot_script, write_grid, write_heatmap, Colormap, GridFormat};
use atomloc::scenario::presets;

fn main() -> atomloc::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "gallery".into()));
    std::fs::create_dir_all(&dir).map_err(|e| atomloc::Error::Io { path: dir.clone(), source: e })?;
    for s in presets() {
        let grid = s.compute_grid()?;
        let report = find_peaks(&grid, 0.5, 0.3)?;
        let csv = format!("{}.csv", s.name);
        write_grid(&grid, GridFormat::Csv, &dir.join(&csv))?;
        write_heatmap(&grid, Colormap::Hot, &dir.join(format!("{}.ppm", s.name)))?;
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        let peaks_path = dir.join(format!("{}_peaks.json", s.name));
        std::fs::write(&peaks_path, json).map_err(|e| atomloc::Error::Io { path: peaks_path, source: e })?;
        let gp = dir.join(format!("{}.gp", s.name));
        std::fs::write(&gp, gnuplot_script(&grid, &csv, &s.name))
            .map_err(|e| atomloc::Error::Io { path: gp, source: e })?;
        println!("{}: {} ({} peaks)", s.name, report.pattern, report.peaks.len());
    }
    println!("files in {}", dir.display());
    Ok(())
}
