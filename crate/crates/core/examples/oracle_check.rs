//! Time-domain integration of the amplitude equations against the closed form.
use atomloc::closed_form::emitted_amplitude;
use atomloc::oracle::{emitted_amplitude_numeric, integrate_amplitudes, IntegrationConfig};
use atomloc::scenario::preset;

fn main() -> atomloc::Result<()> {
    let s = preset("fig2d")?;
    let cfg = IntegrationConfig::default();
    let omega = s.field.rabi_at(0.7, -0.2);

    let trace = integrate_amplitudes(&s.params, &s.init, omega, &cfg)?;
    println!(
        "Ω = {omega:.4}: {} steps ({} rejected), stopped by {:?}",
        trace.len(),
        trace.rejected_steps,
        trace.termination
    );
    for k in (0..trace.len()).step_by(trace.len() / 6) {
        let b = trace.amplitudes[k];
        println!("  t = {:7.3}  |b₁|² + |b₂|² = {:.3e}", trace.times[k], b[0].norm_sqr() + b[1].norm_sqr());
    }

    for tol in [1e-8, 1e-10] {
        let c = cfg.with_tol(tol);
        let numeric = emitted_amplitude_numeric(&s.params, &s.init, omega, &s.query, &c)?;
        let exact = emitted_amplitude(&s.params, &s.init, omega, &s.query)?.value;
        println!("tol {tol:e}: numeric {numeric:.10}, closed form {exact:.10}, |Δ| = {:.2e}", (numeric - exact).norm());
    }
    Ok(())
}
