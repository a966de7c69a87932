//! Closed form against the time-domain oracle at quasi-random grid nodes.

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::emitted_amplitude;
use crate::error::Result;
use crate::grid::{with_workers, GridSpec};
use crate::oracle::{emitted_amplitude_numeric, IntegrationConfig};
use crate::scenario::Scenario;
use crate::C64;

/// Element `index` (from 1) of the van der Corput sequence in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while index > 0 {
        x += (index % base) as f64 * inv;
        index /= base;
        inv /= base as f64;
    }
    x
}

/// First `n` points of the 2-3 Halton sequence snapped to grid nodes.
pub fn halton_nodes(spec: &GridSpec, n: usize) -> Vec<(usize, usize)> {
    (1..=n as u64)
        .map(|k| {
            let u = spec.u_min + radical_inverse(k, 2) * (spec.u_max - spec.u_min);
            let v = spec.v_min + radical_inverse(k, 3) * (spec.v_max - spec.v_min);
            spec.nearest_node(u, v)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplePoint {
    pub u: f64,
    pub v: f64,
    pub omega: f64,
    pub closed_form: C64,
    pub numeric: C64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub points: Vec<SamplePoint>,
    pub max_deviation: f64,
}

impl VerifyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Largest `|b_closed − b_numeric|` over `samples` Halton nodes of the
/// scenario grid. The general closed form is used whatever the scenario's
/// solver mode.
pub fn verify_scenario(scenario: &Scenario, samples: usize, cfg: &IntegrationConfig) -> Result<VerifyReport> {
    scenario.grid.validate()?;
    let nodes = halton_nodes(&scenario.grid, samples);
    let points = with_workers(None, || {
        nodes
            .par_iter()
            .map(|&(i, j)| {
                let (u, v) = (scenario.grid.u(i), scenario.grid.v(j));
                let omega = scenario.field.rabi_at(u, v);
                let closed_form = emitted_amplitude(&scenario.params, &scenario.init, omega, &scenario.query)?.value;
                let numeric = emitted_amplitude_numeric(&scenario.params, &scenario.init, omega, &scenario.query, cfg)?;
                Ok(SamplePoint { u, v, omega, closed_form, numeric, deviation: (closed_form - numeric).norm() })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let max_deviation = points.iter().map(|p| p.deviation).fold(0.0, f64::max);
    Ok(VerifyReport { scenario: scenario.name.clone(), points, max_deviation })
}
