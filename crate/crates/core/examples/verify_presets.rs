//! Closed form against the oracle at 25 quasi-random nodes of every preset.
use std::time::Instant;

use atomloc::oracle::IntegrationConfig;
use atomloc::scenario::presets;
use atomloc::verify::verify_scenario;

fn main() -> atomloc::Result<()> {
    let start = Instant::now();
    for s in presets() {
        let r = verify_scenario(&s, 25, &IntegrationConfig::default())?;
        println!("{:6} max deviation {:.2e}", s.name, r.max_deviation);
    }
    println!("{:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
