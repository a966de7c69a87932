//! Eigenrates and modal coefficients of the driven excited doublet, including
//! the confluent point Ω = Δ = 0.
use atomloc::closed_form::{eigenrates, modal_solution};
use atomloc::model::{InitialState, SystemParams};

fn main() -> atomloc::Result<()> {
    let init = InitialState::new(std::f64::consts::FRAC_PI_4);
    for (delta, omega) in [(2.5, 0.0), (2.5, 5.0), (0.0, 5.0), (0.0, 0.0)] {
        let params = SystemParams::new(1.0, delta, 20.0, 0.0);
        let (l1, l2) = eigenrates(&params, omega)?;
        let m = modal_solution(&params, &init, omega)?;
        println!("Δ = {delta}, Ω = {omega}: λ₁ = {l1:.4}, λ₂ = {l2:.4}, confluent = {}", m.degenerate);
        println!("  b₁: {:.4} e^(λ₁t) + {:.4} e^(λ₂t)", m.c1, m.c1p);
        println!("  b₂: {:.4} e^(λ₁t) + {:.4} e^(λ₂t)", m.c2, m.c2p);
        if let Some([p1, p2]) = m.linear_coeffs {
            println!("  t·e^(λt) terms: {p1:.4}, {p2:.4}");
        }
        let b = m.amplitudes_at(2.0);
        println!("  |b(2)|² = {:.6} (e^-2 = {:.6})", b[0].norm_sqr() + b[1].norm_sqr(), (-2.0f64).exp());
    }
    Ok(())
}
