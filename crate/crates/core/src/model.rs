//! Atomic and drive parameters, the initial state and the standing-wave Rabi
//! profile. Frequencies and rates are expressed in units of Γ; angles and
//! phases in radians.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Ratio `ω₂₁ / max(Γ₁, Γ₂)` below which the rotating terms `e^{±iω₂₁t}` of the
/// cross-decay coupling can no longer be dropped safely.
pub const MIN_SPLITTING_RATIO: f64 = 10.0;

/// Atomic constants and coupling-field detuning/phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Decay rate of `|1⟩ → |0⟩`.
    pub gamma1: f64,
    /// Decay rate of `|2⟩ → |0⟩`.
    pub gamma2: f64,
    /// Drive detuning `Δ = ω_c − ω₂₁`.
    pub delta: f64,
    /// Splitting `ω₂₁` of the two excited levels.
    pub omega21: f64,
    /// Phase of the coupling field.
    pub alpha_c: f64,
    /// Dipole alignment `p`; only `p = 0` (orthogonal dipoles) is supported.
    pub p: f64,
}

impl SystemParams {
    /// Equal decay rates `Γ₁ = Γ₂ = gamma`, no interference.
    pub fn new(gamma: f64, delta: f64, omega21: f64, alpha_c: f64) -> Self {
        SystemParams { gamma1: gamma, gamma2: gamma, delta, omega21, alpha_c, p: 0.0 }
    }

    /// The common decay rate when `Γ₁ = Γ₂`.
    pub fn common_gamma(&self) -> Option<f64> {
        (self.gamma1 == self.gamma2).then_some(self.gamma1)
    }

    pub fn with_alpha_c(mut self, alpha_c: f64) -> Self {
        self.alpha_c = alpha_c;
        self
    }
}

/// Rabi amplitudes of the two crossed standing waves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandingWaveField {
    pub omega1: f64,
    pub omega2: f64,
}

impl StandingWaveField {
    pub fn new(omega1: f64, omega2: f64) -> Self {
        StandingWaveField { omega1, omega2 }
    }

    /// Signed Rabi frequency at phases `u = k₁x`, `v = k₂y`.
    #[inline]
    pub fn rabi_at(&self, u: f64, v: f64) -> f64 {
        self.omega1 * u.sin() + self.omega2 * v.sin()
    }

    /// Largest attainable `|Ω|`, reached at the antinodes `(±π/2, ±π/2)`.
    pub fn peak_rabi(&self) -> f64 {
        self.omega1.abs() + self.omega2.abs()
    }
}

/// Free-function form of [`StandingWaveField::rabi_at`].
pub fn rabi_at(field: &StandingWaveField, u: f64, v: f64) -> f64 {
    field.rabi_at(u, v)
}

/// Initial superposition `cos ξ |1⟩ + e^{iα_p} sin ξ |2⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub xi: f64,
    #[serde(default)]
    pub alpha_p: f64,
}

impl InitialState {
    pub fn new(xi: f64) -> Self {
        InitialState { xi, alpha_p: 0.0 }
    }

    /// Amplitudes `(b₁(0), b₂(0))`.
    pub fn amplitudes(&self) -> [C64; 2] {
        [C64::new(self.xi.cos(), 0.0), C64::from_polar(self.xi.sin(), self.alpha_p)]
    }
}

/// Detuning of the detected photon, `δ_k = ω_k − (ω₂₀ + ω₁₀)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionQuery {
    pub delta_k: f64,
}

impl EmissionQuery {
    pub fn new(delta_k: f64) -> Self {
        EmissionQuery { delta_k }
    }

    /// Phase rate of the `|1⟩ → |0⟩` channel in the emitted-amplitude integrand.
    pub fn channel1_rate(&self, params: &SystemParams) -> f64 {
        self.delta_k + params.omega21 / 2.0
    }

    /// Phase rate of the `|2⟩ → |0⟩` channel.
    pub fn channel2_rate(&self, params: &SystemParams) -> f64 {
        self.delta_k - params.omega21 / 2.0 - params.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// Blocks every solver path that depends on the violated rule.
    Error,
    /// Results are computed but the approximation behind them is weak.
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonFinite { field: String },
    NonPositiveDecay { field: String, value: f64 },
    InterferenceUnsupported { p: f64 },
    UnequalDecayRates { gamma1: f64, gamma2: f64 },
    NegativeRabiAmplitude { field: String, value: f64 },
    WeakSplitting { ratio: f64 },
}

impl Violation {
    pub fn severity(&self) -> Severity {
        match self {
            Violation::WeakSplitting { .. } => Severity::Warning,
            _ => Severity::Error,
        }
    }

    /// Whether the time-domain integrator can still run despite this violation.
    pub fn blocks_oracle(&self) -> bool {
        !matches!(self, Violation::UnequalDecayRates { .. } | Violation::WeakSplitting { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { field } => write!(f, "{field} is not finite"),
            Violation::NonPositiveDecay { field, value } => {
                write!(f, "{field} must be positive (got {value})")
            }
            Violation::InterferenceUnsupported { p } => {
                write!(f, "interference unsupported: p must be 0 (got {p})")
            }
            Violation::UnequalDecayRates { gamma1, gamma2 } => {
                write!(f, "closed form requires equal decay rates (gamma1 = {gamma1}, gamma2 = {gamma2})")
            }
            Violation::NegativeRabiAmplitude { field, value } => {
                write!(f, "{field} must be non-negative (got {value})")
            }
            Violation::WeakSplitting { ratio } => write!(
                f,
                "omega21 is only {ratio:.3} times the largest decay rate (recommended >= {MIN_SPLITTING_RATIO})"
            ),
        }
    }
}

/// Structured list of invariant violations. Empty means every solver path is
/// admissible.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity() == Severity::Error)
    }

    /// No error-level violations; warnings are tolerated.
    pub fn admits_closed_form(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn admits_oracle(&self) -> bool {
        !self.violations.iter().any(Violation::blocks_oracle)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Check every parameter invariant and list the violations.
pub fn validate(params: &SystemParams, field: &StandingWaveField, init: &InitialState) -> ValidationReport {
    let mut violations = Vec::new();
    let finite = [
        ("gamma1", params.gamma1),
        ("gamma2", params.gamma2),
        ("delta", params.delta),
        ("omega21", params.omega21),
        ("alpha_c", params.alpha_c),
        ("p", params.p),
        ("omega1", field.omega1),
        ("omega2", field.omega2),
        ("xi", init.xi),
        ("alpha_p", init.alpha_p),
    ];
    for (name, value) in finite {
        if !value.is_finite() {
            violations.push(Violation::NonFinite { field: name.into() });
        }
    }
    for (name, value) in [("gamma1", params.gamma1), ("gamma2", params.gamma2)] {
        if value.is_finite() && value <= 0.0 {
            violations.push(Violation::NonPositiveDecay { field: name.into(), value });
        }
    }
    if params.p != 0.0 {
        violations.push(Violation::InterferenceUnsupported { p: params.p });
    }
    if params.gamma1 != params.gamma2 {
        violations.push(Violation::UnequalDecayRates { gamma1: params.gamma1, gamma2: params.gamma2 });
    }
    for (name, value) in [("omega1", field.omega1), ("omega2", field.omega2)] {
        if value < 0.0 {
            violations.push(Violation::NegativeRabiAmplitude { field: name.into(), value });
        }
    }
    let max_gamma = params.gamma1.max(params.gamma2);
    if max_gamma > 0.0 && params.omega21.is_finite() {
        let ratio = params.omega21 / max_gamma;
        if ratio < MIN_SPLITTING_RATIO {
            violations.push(Violation::WeakSplitting { ratio });
        }
    }
    ValidationReport { violations }
}
