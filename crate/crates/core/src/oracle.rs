//! Brute-force reference: direct time-domain integration of the excited-state
//! amplitudes with an adaptive Dormand–Prince 5(4) scheme.
//!
//! The emitted-photon amplitude
//! `−i∫₀^∞ [b₁ e^{i(δ_k+ω₂₁/2)t} + b₂ e^{i(δ_k−ω₂₁/2−Δ)t}] dt`
//! is carried as a third state component, so its quadrature uses the same
//! stages, order and error control as the amplitudes themselves.
//!
//! Nothing in here touches the eigenmode solution; unequal decay rates are
//! accepted.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EmissionQuery, InitialState, SystemParams, ValidationReport, Violation};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Steps per period of the fastest phase in the integrand.
const STEPS_PER_PERIOD: f64 = 20.0;

/// Hard limit on accepted + rejected steps per run.
const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    /// Initial step (units of 1/Γ).
    pub dt: f64,
    /// Hard time cutoff.
    pub t_max: f64,
    /// Stop once `max(|b₁|, |b₂|)` drops below this.
    pub amp_floor: f64,
    /// Local error tolerance (absolute and relative).
    pub tol: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig { dt: 1e-3, t_max: 60.0, amp_floor: 1e-12, tol: 1e-10 }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("dt must be positive");
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad("t_max must be positive");
        }
        if !(self.amp_floor > 0.0 && self.amp_floor <= 1e-6) {
            return bad("amp_floor must lie in (0, 1e-6]");
        }
        if !(self.tol > 0.0 && self.tol <= 1e-6) {
            return bad("tol must lie in (0, 1e-6]");
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    AmplitudeFloor,
    TimeLimit,
}

/// Sampled excited-state amplitudes at every accepted step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTrace {
    pub times: Vec<f64>,
    pub amplitudes: Vec<[C64; 2]>,
    pub termination: Termination,
    /// Emitted amplitude accumulated along the run, when a query was supplied.
    pub emitted: Option<C64>,
    pub rejected_steps: usize,
}

impl AmplitudeTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `|b₁|² + |b₂|²` at every sample.
    pub fn excited_norms(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|[b1, b2]| b1.norm_sqr() + b2.norm_sqr())
    }
}

type State = [C64; 3];

struct Rhs {
    half_g1: f64,
    half_g2: f64,
    coupling_12: C64,
    coupling_21: C64,
    delta: f64,
    rate1: f64,
    rate2: f64,
}

impl Rhs {
    fn new(params: &SystemParams, omega: f64, query: Option<&EmissionQuery>) -> Self {
        let (rate1, rate2) = match query {
            Some(q) => (q.channel1_rate(params), q.channel2_rate(params)),
            None => (0.0, 0.0),
        };
        Rhs {
            half_g1: params.gamma1 / 2.0,
            half_g2: params.gamma2 / 2.0,
            coupling_12: -I * omega * C64::from_polar(1.0, params.alpha_c),
            coupling_21: -I * omega * C64::from_polar(1.0, -params.alpha_c),
            delta: params.delta,
            rate1,
            rate2,
        }
    }

    fn eval(&self, t: f64, y: &State) -> State {
        let [b1, b2, _] = *y;
        [
            -self.half_g1 * b1 + self.coupling_12 * b2,
            self.coupling_21 * b1 + C64::new(-self.half_g2, self.delta) * b2,
            -I * (b1 * C64::from_polar(1.0, self.rate1 * t) + b2 * C64::from_polar(1.0, self.rate2 * t)),
        ]
    }

    /// Largest angular frequency present in the integrand or the amplitudes.
    fn fastest_rate(&self) -> f64 {
        let drive = self.delta.abs() + 2.0 * self.coupling_12.norm();
        self.rate1.abs().max(self.rate2.abs()).max(drive).max(self.half_g1.max(self.half_g2))
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (coef, k) in terms {
        for n in 0..3 {
            out[n] += k[n] * (h * coef);
        }
    }
    out
}

fn run(
    params: &SystemParams,
    init: &InitialState,
    omega: f64,
    query: Option<&EmissionQuery>,
    cfg: &IntegrationConfig,
) -> Result<AmplitudeTrace> {
    cfg.validate()?;
    if params.p != 0.0 {
        return Err(Error::Invalid(ValidationReport {
            violations: vec![Violation::InterferenceUnsupported { p: params.p }],
        }));
    }
    if !(params.gamma1 > 0.0 && params.gamma2 > 0.0) {
        return Err(Error::Invalid(ValidationReport {
            violations: vec![Violation::NonPositiveDecay {
                field: if params.gamma1 > 0.0 { "gamma2" } else { "gamma1" }.into(),
                value: params.gamma1.min(params.gamma2),
            }],
        }));
    }

    let rhs = Rhs::new(params, omega, query);
    let h_max = (2.0 * std::f64::consts::PI / rhs.fastest_rate()) / STEPS_PER_PERIOD;
    let [b1, b2] = init.amplitudes();
    let mut y: State = [b1, b2, C64::new(0.0, 0.0)];
    let mut t = 0.0;
    let mut h = cfg.dt.min(h_max);
    let mut k1 = rhs.eval(t, &y);

    let mut times = vec![0.0];
    let mut amplitudes = vec![[y[0], y[1]]];
    let mut rejected_steps = 0;
    let mut last_rejected = false;
    let mut termination = Termination::TimeLimit;

    for _ in 0..MAX_STEPS {
        if y[0].norm().max(y[1].norm()) < cfg.amp_floor {
            termination = Termination::AmplitudeFloor;
            break;
        }
        if t >= cfg.t_max {
            break;
        }
        h = h.min(cfg.t_max - t);

        let k2 = rhs.eval(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs.eval(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs.eval(t + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs.eval(t + C5 * h, &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs.eval(t + h, &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = combine(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs.eval(t + h, &y_new);

        let mut err_sq = 0.0;
        for n in 0..3 {
            let e = (k1[n] * E1 + k3[n] * E3 + k4[n] * E4 + k5[n] * E5 + k6[n] * E6 + k7[n] * E7) * h;
            let scale = cfg.tol + cfg.tol * y[n].norm().max(y_new[n].norm());
            err_sq += (e.norm() / scale).powi(2);
        }
        let err = (err_sq / 3.0).sqrt();

        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k7;
            times.push(t);
            amplitudes.push([y[0], y[1]]);
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * if last_rejected { grow.min(1.0) } else { grow }).min(h_max);
            last_rejected = false;
        } else {
            rejected_steps += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            last_rejected = true;
        }
    }

    Ok(AmplitudeTrace { times, amplitudes, termination, emitted: query.map(|_| y[2]), rejected_steps })
}

fn check_converged(trace: AmplitudeTrace, cfg: &IntegrationConfig) -> Result<AmplitudeTrace> {
    match trace.termination {
        Termination::AmplitudeFloor => Ok(trace),
        Termination::TimeLimit => {
            let [b1, b2] = trace.amplitudes.last().copied().unwrap_or_default();
            Err(Error::NonConvergence { t_max: cfg.t_max, residual: b1.norm().max(b2.norm()), floor: cfg.amp_floor })
        }
    }
}

/// Integrate `(b₁, b₂)` from the initial state until the amplitudes fall
/// below `amp_floor`.
pub fn integrate_amplitudes(
    params: &SystemParams,
    init: &InitialState,
    omega: f64,
    cfg: &IntegrationConfig,
) -> Result<AmplitudeTrace> {
    check_converged(run(params, init, omega, None, cfg)?, cfg)
}

/// Integrate the amplitudes and, alongside, the emitted-photon amplitude for
/// `query`; returns the full trace.
pub fn integrate_with_emission(
    params: &SystemParams,
    init: &InitialState,
    omega: f64,
    query: &EmissionQuery,
    cfg: &IntegrationConfig,
) -> Result<AmplitudeTrace> {
    check_converged(run(params, init, omega, Some(query), cfg)?, cfg)
}

/// Numerically integrated `b_{0,1k}(t→∞)` with unit coupling constants.
pub fn emitted_amplitude_numeric(
    params: &SystemParams,
    init: &InitialState,
    omega: f64,
    query: &EmissionQuery,
    cfg: &IntegrationConfig,
) -> Result<C64> {
    let trace = integrate_with_emission(params, init, omega, query, cfg)?;
    Ok(trace.emitted.expect("query supplied"))
}
