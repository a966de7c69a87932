//! The simplified printed amplitude against the exact closed form. They agree
//! at Δ = 0 once ξ is replaced by π/2 − ξ, and drift apart as Δ grows.
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use atomloc::closed_form::{emitted_amplitude, emitted_amplitude_paper_form};
use atomloc::model::{EmissionQuery, InitialState, SystemParams};

fn main() -> atomloc::Result<()> {
    let query = EmissionQuery::new(2.4);
    let xi = 0.3;
    for delta in [0.0, 0.5, 1.0, 2.5] {
        let params = SystemParams::new(1.0, delta, 20.0, 0.0);
        let mut worst: f64 = 0.0;
        let mut worst_swapped: f64 = 0.0;
        for k in 0..=40 {
            let omega = -10.0 + 0.5 * k as f64;
            let printed = emitted_amplitude_paper_form(&params, &InitialState::new(xi), omega, &query)?.probability();
            let same = emitted_amplitude(&params, &InitialState::new(xi), omega, &query)?.probability();
            let swapped = emitted_amplitude(&params, &InitialState::new(FRAC_PI_2 - xi), omega, &query)?.probability();
            worst = worst.max((printed - same).abs());
            worst_swapped = worst_swapped.max((printed - swapped).abs());
        }
        println!("Δ = {delta}: max |Δ|b|²| same ξ {worst:.3e}, ξ → π/2 − ξ {worst_swapped:.3e}");
    }
    let params = SystemParams::new(1.0, 0.0, 20.0, 0.0);
    let a = emitted_amplitude_paper_form(&params, &InitialState::new(FRAC_PI_4), 3.0, &query)?.value;
    let b = emitted_amplitude(&params, &InitialState::new(FRAC_PI_4), 3.0, &query)?.value;
    println!("ξ = π/4 is its own mirror: {a:.8} vs {b:.8}");
    Ok(())
}
