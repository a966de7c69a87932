//! Grid file formats: lossless CSV and JSON, P6 heatmaps and a gnuplot script.
//!
//! CSV layout:
//!
//! ```text
//! # atomloc-grid v1
//! u,v,W        one row per node, v outer ascending, u inner ascending
//! ```
//!
//! Numbers are written with 17 significant digits, so a grid read back and
//! written again is byte-identical. CSV carries no physical parameters; use
//! JSON to keep them.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FilterGrid, GridMeta, GridSpec};

pub const CSV_HEADER: &str = "# atomloc-grid v1";
pub const JSON_FORMAT: &str = "atomloc-grid v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for GridFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(GridFormat::Csv),
            "json" => Ok(GridFormat::Json),
            other => Err(format!("unknown grid format `{other}` (csv, json)")),
        }
    }
}

pub fn export_grid(grid: &FilterGrid, format: GridFormat) -> Vec<u8> {
    match format {
        GridFormat::Csv => grid_to_csv(grid).into_bytes(),
        GridFormat::Json => grid_to_json(grid).into_bytes(),
    }
}

pub fn grid_to_csv(grid: &FilterGrid) -> String {
    let spec = &grid.spec;
    let mut out = String::with_capacity(72 * spec.len() + 32);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for j in 0..spec.ny {
        let v = spec.v(j);
        for i in 0..spec.nx {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", spec.u(i), v, grid.value(i, j));
        }
    }
    out
}

/// Read a CSV grid; `origin` names the source in diagnostics.
pub fn grid_from_csv(text: &str, origin: &Path) -> Result<FilterGrid> {
    let err = |line: usize, msg: String| Error::parse(origin, format!("line {line}: {msg}"));
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => return Err(err(1, format!("expected header `{CSV_HEADER}`"))),
    }
    let mut rows: Vec<[f64; 3]> = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = [0.0; 3];
        let mut fields = line.split(',');
        for slot in row.iter_mut() {
            let f = fields.next().ok_or_else(|| err(n + 1, "expected 3 fields u,v,W".into()))?;
            *slot = f.trim().parse().map_err(|e| err(n + 1, format!("`{}`: {e}", f.trim())))?;
        }
        if fields.next().is_some() {
            return Err(err(n + 1, "expected 3 fields u,v,W".into()));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyGrid);
    }

    let v0 = rows[0][1];
    let nx = rows.iter().take_while(|r| r[1] == v0).count();
    if !rows.len().is_multiple_of(nx) {
        return Err(err(0, format!("{} rows do not form whole lines of {nx}", rows.len())));
    }
    let ny = rows.len() / nx;
    let spec =
        GridSpec { u_min: rows[0][0], u_max: rows[nx - 1][0], v_min: v0, v_max: rows[rows.len() - 1][1], nx, ny };
    spec.validate().map_err(|e| err(0, e.to_string()))?;

    // The nodes must be the ones this spec generates.
    let tol = 1e-9 * (spec.u_max - spec.u_min).abs().max(spec.v_max - spec.v_min);
    for (k, r) in rows.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        if (r[0] - spec.u(i)).abs() > tol || (r[1] - spec.v(j)).abs() > tol {
            return Err(err(k + 2, format!("node ({}, {}) is off the regular grid", r[0], r[1])));
        }
    }
    FilterGrid::from_values(spec, rows.into_iter().map(|r| r[2]).collect())
}

#[derive(Serialize, Deserialize)]
struct GridDocument {
    format: String,
    spec: GridSpec,
    meta: Option<GridMeta>,
    norm_constant: Option<f64>,
    values: Vec<f64>,
}

pub fn grid_to_json(grid: &FilterGrid) -> String {
    let doc = GridDocument {
        format: JSON_FORMAT.to_string(),
        spec: grid.spec,
        meta: grid.meta,
        norm_constant: grid.norm_constant,
        values: grid.values.clone(),
    };
    serde_json::to_string(&doc).expect("grid serializes")
}

pub fn grid_from_json(text: &str, origin: &Path) -> Result<FilterGrid> {
    let doc: GridDocument = serde_json::from_str(text).map_err(|e| Error::parse(origin, e.to_string()))?;
    if doc.format != JSON_FORMAT {
        return Err(Error::parse(origin, format!("unsupported format `{}`", doc.format)));
    }
    let mut grid = FilterGrid::from_values(doc.spec, doc.values)?;
    grid.norm_constant = doc.norm_constant;
    grid.meta = doc.meta;
    Ok(grid)
}

/// Read a grid, choosing JSON for `.json` files and CSV otherwise.
pub fn read_grid(path: &Path) -> Result<FilterGrid> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => grid_from_json(&text, path),
        _ => grid_from_csv(&text, path),
    }
}

pub fn write_grid(grid: &FilterGrid, format: GridFormat, path: &Path) -> Result<()> {
    write_bytes(path, &export_grid(grid, format))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Colormap {
    #[default]
    Gray,
    Hot,
}

impl std::str::FromStr for Colormap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gray" | "grey" => Ok(Colormap::Gray),
            "hot" => Ok(Colormap::Hot),
            other => Err(format!("unknown colormap `{other}` (gray, hot)")),
        }
    }
}

/// Black-red-yellow-white table. Entry `k` is
/// `(min(255, 3k), clamp(3k − 255, 0, 255), clamp(3k − 510, 0, 255))`,
/// e.g. `0 → (0,0,0)`, `85 → (255,0,0)`, `170 → (255,255,0)`, `255 → (255,255,255)`.
pub const HOT: [[u8; 3]; 256] = hot_table();

const fn hot_table() -> [[u8; 3]; 256] {
    let mut t = [[0u8; 3]; 256];
    let mut k = 0;
    while k < 256 {
        let x = 3 * k as i32;
        t[k] = [clamp_u8(x), clamp_u8(x - 255), clamp_u8(x - 510)];
        k += 1;
    }
    t
}

const fn clamp_u8(x: i32) -> u8 {
    if x < 0 {
        0
    } else if x > 255 {
        255
    } else {
        x as u8
    }
}

/// Intensity `round(255·W/max)` per node; a flat grid maps to 128 everywhere.
pub fn intensities(grid: &FilterGrid) -> Vec<u8> {
    let max = grid.max_value();
    let min = grid.values.iter().copied().fold(f64::INFINITY, f64::min);
    let spec = &grid.spec;
    let mut out = Vec::with_capacity(spec.len());
    for j in (0..spec.ny).rev() {
        for i in 0..spec.nx {
            let level = if max > min { (255.0 * grid.value(i, j) / max).round() as u8 } else { 128 };
            out.push(level);
        }
    }
    out
}

/// Binary P6 image, one pixel per node, `v_max` on the top row.
pub fn render_heatmap(grid: &FilterGrid, colormap: Colormap) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", grid.spec.nx, grid.spec.ny).into_bytes();
    for k in intensities(grid) {
        match colormap {
            Colormap::Gray => out.extend_from_slice(&[k, k, k]),
            Colormap::Hot => out.extend_from_slice(&HOT[k as usize]),
        }
    }
    out
}

pub fn write_heatmap(grid: &FilterGrid, colormap: Colormap, path: &Path) -> Result<()> {
    write_bytes(path, &render_heatmap(grid, colormap))
}

/// Gnuplot script drawing the CSV file `csv_name` as a surface.
pub fn gnuplot_script(grid: &FilterGrid, csv_name: &str, title: &str) -> String {
    let s = &grid.spec;
    format!(
        "# gnuplot script; run: gnuplot -p <this file>\n\
         set datafile separator ','\n\
         set datafile commentschars '#'\n\
         set title '{title}'\n\
         set xlabel 'k_1 x'\n\
         set ylabel 'k_2 y'\n\
         set zlabel 'W'\n\
         set xrange [{:.6}:{:.6}]\n\
         set yrange [{:.6}:{:.6}]\n\
         set dgrid3d {},{}\n\
         set pm3d at s\n\
         set hidden3d\n\
         unset key\n\
         splot '{csv_name}' using 1:2:3 with lines\n",
        s.u_min, s.u_max, s.v_min, s.v_max, s.ny, s.nx
    )
}
