//! Scenario JSON round trip and validation diagnostics.
use std::path::Path;

use atomloc::scenario::{parse_scenario, preset};

fn main() -> atomloc::Result<()> {
    let s = preset("fig5b")?.with_resolution(121, 121);
    let text = s.to_json();
    println!("{text}");
    let back = parse_scenario(&text, Path::new("fig5b.json"))?;
    assert_eq!(back, s);

    let minimal = r#"{"delta": 0, "omega21": 20, "alpha_c": 0, "omega1": 3, "omega2": 3, "xi": 0.5, "delta_k": 1.5}"#;
    let m = parse_scenario(minimal, Path::new("minimal.json"))?;
    println!("minimal file: solver {}, grid {}x{}", m.solver, m.grid.nx, m.grid.ny);

    let mut bad = s.to_file();
    bad.p = 0.3;
    bad.gamma2 = 2.0;
    let err = parse_scenario(&serde_json::to_string(&bad).unwrap(), Path::new("bad.json")).unwrap_err();
    println!("rejected: {err}");
    let err = parse_scenario(r#"{"delta": 1, "omega_21": 20}"#, Path::new("typo.json")).unwrap_err();
    println!("rejected: {err}");
    Ok(())
}
