use atomloc::analysis::find_peaks;
use atomloc::export::{grid_from_csv, grid_to_csv, read_grid, render_heatmap, write_grid, Colormap, GridFormat};
use atomloc::grid::{FilterGrid, GridSpec};
use atomloc::scenario::preset;

#[test]
fn trivial_grid_has_nine_rows() {
    let spec = GridSpec::square(3);
    let grid = FilterGrid::normalized(spec, vec![1.0; 9], None).unwrap();
    let csv = grid_to_csv(&grid);
    assert_eq!(csv.lines().count(), 10);
    assert_eq!(csv.lines().next(), Some("# atomloc-grid v1"));
}

#[test]
fn fig2d_round_trip_reproduces_peak_report() {
    let dir = tempfile::tempdir().unwrap();
    let grid = preset("fig2d").unwrap().compute_grid().unwrap();
    let csv_path = dir.path().join("fig2d.csv");
    write_grid(&grid, GridFormat::Csv, &csv_path).unwrap();
    let back = read_grid(&csv_path).unwrap();
    assert_eq!(back.values, grid.values);
    assert_eq!(grid_to_csv(&back).as_bytes(), std::fs::read(&csv_path).unwrap());

    let original = find_peaks(&grid, 0.5, 0.3).unwrap();
    let reread = find_peaks(&back, 0.5, 0.3).unwrap();
    assert_eq!(reread, original);

    let json_path = dir.path().join("fig2d.json");
    write_grid(&grid, GridFormat::Json, &json_path).unwrap();
    let back = read_grid(&json_path).unwrap();
    assert_eq!(back, grid);
}

#[test]
fn csv_import_rejects_irregular_nodes() {
    let text = "# atomloc-grid v1\n0,0,1\n1,0,1\n5,0,1\n0,1,1\n1,1,1\n5,1,1\n0,2,1\n1,2,1\n5,2,1\n";
    assert!(grid_from_csv(text, std::path::Path::new("x.csv")).is_err());
}

#[test]
fn fig2d_heatmap_brightest_at_antinodes() {
    let grid = preset("fig2d").unwrap().compute_grid().unwrap();
    let img = render_heatmap(&grid, Colormap::Gray);
    let header = b"P6\n201 201\n255\n".len();
    let px = |row: usize, col: usize| img[header + 3 * (row * 201 + col)];
    // Node (150, 150) is row 50 from the top; node (50, 50) is row 150.
    assert_eq!(px(50, 150), 255);
    assert!(px(150, 50) >= 250);
    assert!(px(50, 50) < 30 && px(150, 150) < 30);
}

#[test]
fn fig3c_ring_is_bright_in_third_quadrant() {
    let grid = preset("fig3c").unwrap().compute_grid().unwrap();
    let img = render_heatmap(&grid, Colormap::Hot);
    let header = b"P6\n201 201\n255\n".len();
    let mut third = 0u64;
    let mut rest = 0u64;
    for row in 0..201 {
        for col in 0..201 {
            let r = img[header + 3 * (row * 201 + col)] as u64;
            // v < 0 is the lower half of the image, u < 0 the left half.
            if row > 100 && col < 100 {
                third += r;
            } else {
                rest += r;
            }
        }
    }
    assert!(third > 5 * rest, "{third} vs {rest}");
}
