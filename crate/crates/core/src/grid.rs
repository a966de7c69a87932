//! Normalized filter function over a rectangular grid of phases
//! `(u, v) = (k₁x, k₂y)`.
//!
//! Grid nodes include both ends of each axis. Every node carries the area of
//! its cell clipped to the domain (half cells on the edges, quarter cells at
//! the corners), so `Σ W·area = 1` and a constant grid equals
//! `1 / domain area` at every node.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{emitted_amplitude, emitted_amplitude_paper_form};
use crate::error::{Error, Result};
use crate::model::{validate, EmissionQuery, InitialState, StandingWaveField, SystemParams};
use crate::oracle::{emitted_amplitude_numeric, IntegrationConfig};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ATOMLOC_THREADS";

/// Samples in the optional Ω lookup table.
pub const FAST_TABLE_POINTS: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { u_min: -PI, u_max: PI, v_min: -PI, v_max: PI, nx: 201, ny: 201 }
    }
}

impl GridSpec {
    /// The principal cell `[−π, π]²` with `n × n` nodes.
    pub fn square(n: usize) -> Self {
        GridSpec { nx: n, ny: n, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.u_min, self.u_max, self.v_min, self.v_max].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::Grid("domain bounds must be finite".into()));
        }
        if !(self.u_max > self.u_min) || !(self.v_max > self.v_min) {
            return Err(Error::Grid("domain must have u_max > u_min and v_max > v_min".into()));
        }
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes per axis, got {}x{}", self.nx, self.ny)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn node(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        // Written so that symmetric domains give exactly mirrored nodes.
        let last = (n - 1) as f64;
        (lo * (last - i as f64) + hi * i as f64) / last
    }

    pub fn u(&self, i: usize) -> f64 {
        Self::node(self.u_min, self.u_max, self.nx, i)
    }

    pub fn v(&self, j: usize) -> f64 {
        Self::node(self.v_min, self.v_max, self.ny, j)
    }

    pub fn du(&self) -> f64 {
        (self.u_max - self.u_min) / (self.nx - 1) as f64
    }

    pub fn dv(&self) -> f64 {
        (self.v_max - self.v_min) / (self.ny - 1) as f64
    }

    pub fn area(&self) -> f64 {
        (self.u_max - self.u_min) * (self.v_max - self.v_min)
    }

    fn edge_weight(n: usize, i: usize, step: f64) -> f64 {
        if i == 0 || i + 1 == n {
            step / 2.0
        } else {
            step
        }
    }

    /// Area of the cell owned by node `(i, j)`.
    pub fn cell_area(&self, i: usize, j: usize) -> f64 {
        Self::edge_weight(self.nx, i, self.du()) * Self::edge_weight(self.ny, j, self.dv())
    }

    pub fn is_symmetric(&self) -> bool {
        self.u_min == -self.u_max && self.v_min == -self.v_max
    }

    /// Row-major index; rows run along `v`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Node nearest to `(u, v)`, clamped to the domain.
    pub fn nearest_node(&self, u: f64, v: f64) -> (usize, usize) {
        let snap = |x: f64, lo: f64, step: f64, n: usize| {
            let k = ((x - lo) / step).round();
            k.clamp(0.0, (n - 1) as f64) as usize
        };
        (snap(u, self.u_min, self.du(), self.nx), snap(v, self.v_min, self.dv(), self.ny))
    }
}

/// Which amplitude expression fills the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMode {
    /// Eigenmode closed form with coefficients solved from the initial state.
    #[default]
    General,
    /// The simplified amplitude as printed in the source derivation.
    PaperForm,
    /// Time-domain integration at every node.
    Oracle,
}

impl std::str::FromStr for SolverMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "general" => Ok(SolverMode::General),
            "paper-form" | "paper_form" | "paper" => Ok(SolverMode::PaperForm),
            "oracle" => Ok(SolverMode::Oracle),
            other => Err(format!("unknown solver mode `{other}` (general, paper-form, oracle)")),
        }
    }
}

impl std::fmt::Display for SolverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverMode::General => "general",
            SolverMode::PaperForm => "paper-form",
            SolverMode::Oracle => "oracle",
        })
    }
}

/// Physical inputs behind a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub params: SystemParams,
    pub field: StandingWaveField,
    pub init: InitialState,
    pub query: EmissionQuery,
    pub solver: SolverMode,
}

impl GridMeta {
    /// Unnormalized `|b_{0,1k}|²` at Rabi value `omega`.
    pub fn probability(&self, omega: f64, oracle: &IntegrationConfig) -> Result<f64> {
        emission_probability(self.solver, &self.params, &self.init, omega, &self.query, oracle)
    }
}

/// Unnormalized `|b_{0,1k}(t→∞)|²` with the chosen solver.
pub fn emission_probability(
    solver: SolverMode,
    params: &SystemParams,
    init: &InitialState,
    omega: f64,
    query: &EmissionQuery,
    oracle: &IntegrationConfig,
) -> Result<f64> {
    Ok(match solver {
        SolverMode::General => emitted_amplitude(params, init, omega, query)?.probability(),
        SolverMode::PaperForm => emitted_amplitude_paper_form(params, init, omega, query)?.probability(),
        SolverMode::Oracle => emitted_amplitude_numeric(params, init, omega, query, oracle)?.norm_sqr(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub solver: SolverMode,
    /// Interpolate from a 1D table over Ω instead of evaluating every node.
    pub fast_table: bool,
    pub oracle: IntegrationConfig,
    /// Worker cap; falls back to `ATOMLOC_THREADS`, then to rayon's default.
    pub threads: Option<usize>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            solver: SolverMode::General,
            fast_table: false,
            oracle: IntegrationConfig::default(),
            threads: None,
        }
    }
}

impl GridOptions {
    pub fn solver(solver: SolverMode) -> Self {
        GridOptions { solver, ..Default::default() }
    }
}

/// Worker cap from `ATOMLOC_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Run `f` on a pool capped at `threads` workers (or the env cap).
pub(crate) fn with_workers<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads.or_else(threads_from_env) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterGrid {
    pub spec: GridSpec,
    /// Row-major values, `v` outer and `u` inner.
    pub values: Vec<f64>,
    /// `|𝒩|²` applied to the raw `|b|²`; unknown for grids read from CSV.
    pub norm_constant: Option<f64>,
    pub meta: Option<GridMeta>,
}

impl FilterGrid {
    /// Wrap already normalized values.
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::ShapeMismatch(format!("{} values for a {}x{} grid", values.len(), spec.nx, spec.ny)));
        }
        if let Some(bad) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Grid(format!("grid values must be finite and non-negative, found {bad}")));
        }
        Ok(FilterGrid { spec, values, norm_constant: None, meta: None })
    }

    /// Normalize raw values to unit integral over the domain.
    pub fn normalized(spec: GridSpec, raw: Vec<f64>, meta: Option<GridMeta>) -> Result<Self> {
        let mut grid = FilterGrid::from_values(spec, raw)?;
        let total = grid.integral();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Grid(format!("cannot normalize a grid with integral {total}")));
        }
        let norm = 1.0 / total;
        grid.values.iter_mut().for_each(|v| *v *= norm);
        grid.norm_constant = Some(norm);
        grid.meta = meta;
        Ok(grid)
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `Σ W · cell area`, summed in row-major order.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for j in 0..self.spec.ny {
            for i in 0..self.spec.nx {
                total += self.value(i, j) * self.spec.cell_area(i, j);
            }
        }
        total
    }

    /// Signed Rabi frequency at node `(i, j)`, when the field is known.
    pub fn rabi(&self, i: usize, j: usize) -> Option<f64> {
        self.meta.map(|m| m.field.rabi_at(self.spec.u(i), self.spec.v(j)))
    }

    /// Range of Ω over the grid nodes.
    pub fn rabi_range(&self) -> Option<(f64, f64)> {
        let meta = self.meta?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..self.spec.ny {
            let v = self.spec.v(j);
            for i in 0..self.spec.nx {
                let w = meta.field.rabi_at(self.spec.u(i), v);
                lo = lo.min(w);
                hi = hi.max(w);
            }
        }
        Some((lo, hi))
    }

    /// Normalized W as a function of Ω alone, sampled at `n` points across the
    /// Ω range of the grid. Oracle grids are profiled with the general closed
    /// form, which the oracle reproduces to well below plotting resolution.
    pub fn rabi_profile(&self, n: usize) -> Option<Vec<(f64, f64)>> {
        let mut meta = self.meta?;
        let norm = self.norm_constant?;
        let (lo, hi) = self.rabi_range()?;
        if meta.solver == SolverMode::Oracle {
            meta.solver = SolverMode::General;
        }
        let oracle = IntegrationConfig::default();
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let omega = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                meta.probability(omega, &oracle).ok().map(|p| (omega, norm * p))
            })
            .collect()
    }

    /// The grid with `(u, v) → (−u, −v)` applied to its values.
    pub fn point_reflected(&self) -> Result<FilterGrid> {
        if !self.spec.is_symmetric() {
            return Err(Error::AsymmetricDomain);
        }
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..ny {
            for i in 0..nx {
                values.push(self.value(nx - 1 - i, ny - 1 - j));
            }
        }
        Ok(FilterGrid { values, ..self.clone() })
    }
}

/// Compute the normalized filter function with the general closed form.
pub fn compute_grid(
    params: &SystemParams,
    init: &InitialState,
    field: &StandingWaveField,
    query: &EmissionQuery,
    spec: &GridSpec,
) -> Result<FilterGrid> {
    compute_grid_with(params, init, field, query, spec, &GridOptions::default())
}

pub fn compute_grid_with(
    params: &SystemParams,
    init: &InitialState,
    field: &StandingWaveField,
    query: &EmissionQuery,
    spec: &GridSpec,
    opts: &GridOptions,
) -> Result<FilterGrid> {
    spec.validate()?;
    let report = validate(params, field, init);
    let admissible = match opts.solver {
        SolverMode::Oracle => report.admits_oracle(),
        _ => report.admits_closed_form(),
    };
    if !admissible {
        return Err(Error::Invalid(report));
    }
    if !query.delta_k.is_finite() {
        return Err(Error::Grid("delta_k must be finite".into()));
    }
    let meta = GridMeta { params: *params, field: *field, init: *init, query: *query, solver: opts.solver };

    let raw = with_workers(opts.threads, || {
        if opts.fast_table {
            raw_from_table(&meta, spec, &opts.oracle)
        } else {
            raw_exact(&meta, spec, &opts.oracle)
        }
    })?;
    FilterGrid::normalized(*spec, raw, Some(meta))
}

fn raw_exact(meta: &GridMeta, spec: &GridSpec, oracle: &IntegrationConfig) -> Result<Vec<f64>> {
    let rows: Vec<Vec<f64>> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            let v = spec.v(j);
            (0..spec.nx).map(|i| meta.probability(meta.field.rabi_at(spec.u(i), v), oracle)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.concat())
}

fn raw_from_table(meta: &GridMeta, spec: &GridSpec, oracle: &IntegrationConfig) -> Result<Vec<f64>> {
    let span = meta.field.peak_rabi();
    let n = FAST_TABLE_POINTS;
    let step = 2.0 * span / (n - 1) as f64;
    let table: Vec<f64> =
        (0..n).into_par_iter().map(|k| meta.probability(-span + step * k as f64, oracle)).collect::<Result<_>>()?;
    let lookup = |omega: f64| {
        if span == 0.0 {
            return table[0];
        }
        let x = ((omega + span) / step).clamp(0.0, (n - 1) as f64);
        let k = (x.floor() as usize).min(n - 2);
        let frac = x - k as f64;
        table[k] * (1.0 - frac) + table[k + 1] * frac
    };
    let rows: Vec<Vec<f64>> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            let v = spec.v(j);
            (0..spec.nx).map(|i| lookup(meta.field.rabi_at(spec.u(i), v))).collect()
        })
        .collect();
    Ok(rows.concat())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMap {
    Identity,
    PointReflection,
}

/// `max |a(u, v) − b(map(u, v))|` over all nodes.
pub fn transform_compare(a: &FilterGrid, b: &FilterGrid, map: GridMap) -> Result<f64> {
    if a.spec != b.spec {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", a.spec, b.spec)));
    }
    let b = match map {
        GridMap::Identity => std::borrow::Cow::Borrowed(b),
        GridMap::PointReflection => std::borrow::Cow::Owned(b.point_reflected()?),
    };
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}
