//! Named parameter bundles: built-in figure presets and flat JSON scenario
//! files.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{compute_grid_with, FilterGrid, GridOptions, GridSpec, SolverMode};
use crate::model::{validate, EmissionQuery, InitialState, StandingWaveField, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: SystemParams,
    pub field: StandingWaveField,
    pub init: InitialState,
    pub query: EmissionQuery,
    pub grid: GridSpec,
    pub solver: SolverMode,
}

impl Scenario {
    pub fn with_resolution(mut self, nx: usize, ny: usize) -> Self {
        self.grid.nx = nx;
        self.grid.ny = ny;
        self
    }

    pub fn with_solver(mut self, solver: SolverMode) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_delta_k(mut self, delta_k: f64) -> Self {
        self.query.delta_k = delta_k;
        self
    }

    pub fn with_xi(mut self, xi: f64) -> Self {
        self.init.xi = xi;
        self
    }

    /// Check the physical parameters and the grid.
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        let report = validate(&self.params, &self.field, &self.init);
        let ok = match self.solver {
            SolverMode::Oracle => report.admits_oracle(),
            _ => report.admits_closed_form(),
        };
        if !ok {
            return Err(Error::Invalid(report));
        }
        if !self.query.delta_k.is_finite() {
            return Err(Error::Grid("delta_k must be finite".into()));
        }
        Ok(())
    }

    pub fn grid_options(&self) -> GridOptions {
        GridOptions::solver(self.solver)
    }

    pub fn compute_grid(&self) -> Result<FilterGrid> {
        self.compute_grid_with(&self.grid_options())
    }

    pub fn compute_grid_with(&self, opts: &GridOptions) -> Result<FilterGrid> {
        compute_grid_with(&self.params, &self.init, &self.field, &self.query, &self.grid, opts)
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            name: self.name.clone(),
            gamma1: self.params.gamma1,
            gamma2: self.params.gamma2,
            delta: self.params.delta,
            omega21: self.params.omega21,
            alpha_c: self.params.alpha_c,
            p: self.params.p,
            omega1: self.field.omega1,
            omega2: self.field.omega2,
            xi: self.init.xi,
            alpha_p: self.init.alpha_p,
            delta_k: self.query.delta_k,
            u_min: self.grid.u_min,
            u_max: self.grid.u_max,
            v_min: self.grid.v_min,
            v_max: self.grid.v_max,
            nx: self.grid.nx,
            ny: self.grid.ny,
            solver: self.solver,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes")
    }
}

/// On-disk scenario layout: one flat JSON object. Decay rates default to 1,
/// `p`, `alpha_p` to 0, the grid to 201×201 over [−π, π]², the solver to
/// `general`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: String,
    #[serde(default = "one")]
    pub gamma1: f64,
    #[serde(default = "one")]
    pub gamma2: f64,
    pub delta: f64,
    pub omega21: f64,
    pub alpha_c: f64,
    #[serde(default)]
    pub p: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub xi: f64,
    #[serde(default)]
    pub alpha_p: f64,
    pub delta_k: f64,
    #[serde(default = "neg_pi")]
    pub u_min: f64,
    #[serde(default = "pi")]
    pub u_max: f64,
    #[serde(default = "neg_pi")]
    pub v_min: f64,
    #[serde(default = "pi")]
    pub v_max: f64,
    #[serde(default = "default_n")]
    pub nx: usize,
    #[serde(default = "default_n")]
    pub ny: usize,
    #[serde(default)]
    pub solver: SolverMode,
}

fn one() -> f64 {
    1.0
}
fn pi() -> f64 {
    PI
}
fn neg_pi() -> f64 {
    -PI
}
fn default_n() -> usize {
    GridSpec::default().nx
}

impl From<ScenarioFile> for Scenario {
    fn from(f: ScenarioFile) -> Self {
        Scenario {
            name: f.name,
            params: SystemParams {
                gamma1: f.gamma1,
                gamma2: f.gamma2,
                delta: f.delta,
                omega21: f.omega21,
                alpha_c: f.alpha_c,
                p: f.p,
            },
            field: StandingWaveField::new(f.omega1, f.omega2),
            init: InitialState { xi: f.xi, alpha_p: f.alpha_p },
            query: EmissionQuery::new(f.delta_k),
            grid: GridSpec { u_min: f.u_min, u_max: f.u_max, v_min: f.v_min, v_max: f.v_max, nx: f.nx, ny: f.ny },
            solver: f.solver,
        }
    }
}

pub const PRESET_IDS: [&str; 14] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c", "fig4d",
    "fig5a", "fig5b",
];

const FIG2_DELTA_K: [f64; 4] = [9.3, 5.3, 2.9, 0.1];
const FIG34_DELTA_K: [f64; 4] = [12.4, 9.5, 6.0, 2.4];

fn base(name: &str, alpha_c: f64, xi: f64, delta_k: f64) -> Scenario {
    Scenario {
        name: name.to_string(),
        params: SystemParams::new(1.0, 2.5, 20.0, alpha_c),
        field: StandingWaveField::new(5.0, 5.0),
        init: InitialState::new(xi),
        query: EmissionQuery::new(delta_k),
        grid: GridSpec::default(),
        // The figures follow the simplified printed amplitude.
        solver: SolverMode::PaperForm,
    }
}

/// Built-in figure scenario by id (`fig2a` … `fig5b`).
pub fn preset(id: &str) -> Result<Scenario> {
    let panel = |s: &str| -> Option<usize> {
        match s {
            "a" => Some(0),
            "b" => Some(1),
            "c" => Some(2),
            "d" => Some(3),
            _ => None,
        }
    };
    let unknown = || Error::UnknownPreset(id.to_string());
    let (fig, letter) = id.strip_prefix("fig").and_then(|r| r.split_at_checked(1)).ok_or_else(unknown)?;
    let k = panel(letter).ok_or_else(unknown)?;
    let s = match fig {
        "2" => base(id, FRAC_PI_2, FRAC_PI_4, FIG2_DELTA_K[k]),
        "3" => base(id, 0.0, FRAC_PI_4, FIG34_DELTA_K[k]),
        "4" => base(id, PI, FRAC_PI_4, FIG34_DELTA_K[k]),
        "5" if k == 0 => base(id, PI, 0.0, 2.4),
        "5" if k == 1 => base(id, PI, FRAC_PI_2, 2.4),
        _ => return Err(unknown()),
    };
    Ok(s)
}

pub fn presets() -> Vec<Scenario> {
    PRESET_IDS.iter().map(|id| preset(id).expect("registered preset")).collect()
}

/// Parse and validate a scenario document; `origin` names it in diagnostics.
pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::parse(origin, e.to_string()))?;
    let mut scenario = Scenario::from(file);
    if scenario.name.is_empty() {
        scenario.name = origin.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    scenario.validate()?;
    Ok(scenario)
}

/// Load a preset id, or a JSON scenario file if `source` is not a preset.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    if PRESET_IDS.contains(&source) {
        return preset(source);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, path)
}
