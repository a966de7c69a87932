//! Grayscale and hot-colormap P6 images of one preset.
//!
//! cargo run --example heatmap -- fig3c out/
use std::path::PathBuf;

use atomloc::export::{write_heatmap, Colormap};
use atomloc::scenario::preset;

fn main() -> atomloc::Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "fig3c".into());
    let dir = PathBuf::from(args.next().unwrap_or_else(|| std::env::temp_dir().display().to_string()));
    std::fs::create_dir_all(&dir).map_err(|e| atomloc::Error::Io { path: dir.clone(), source: e })?;

    let grid = preset(&id)?.compute_grid()?;
    for (name, map) in [("gray", Colormap::Gray), ("hot", Colormap::Hot)] {
        let path = dir.join(format!("{id}_{name}.ppm"));
        write_heatmap(&grid, map, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
