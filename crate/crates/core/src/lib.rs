//! Two-dimensional atom localization from the spontaneous-emission spectrum of
//! a driven three-level ladder atom.
//!
//! The two excited levels `|1⟩` and `|2⟩` are coupled by a pair of crossed
//! standing waves whose Rabi frequency depends on position,
//! `Ω(u, v) = Ω₁ sin u + Ω₂ sin v` with `u = k₁x`, `v = k₂y`. Both levels decay
//! to `|0⟩`. Detecting the emitted photon at detuning `δ_k` makes the
//! conditional position distribution proportional to `|b_{0,1k}(t→∞)|²`, which
//! this crate evaluates over a grid of positions.
//!
//! Layout:
//!
//! - [`model`]: parameters, initial state, the standing-wave Rabi profile, validation
//! - [`closed_form`]: eigenmode solution and long-time emitted amplitude
//! - [`oracle`]: adaptive time-domain integration used as an independent check
//! - [`grid`]: normalized filter-function grids and grid transforms
//! - [`analysis`]: peaks, masses, quadrant fractions and pattern labels
//! - [`scenario`], [`export`], [`verify`], [`cli`]: presets, file formats and the command line
//!
//! All rates and frequencies are in units of the decay rate Γ.
//!
//! ```
//! use atomloc::scenario::preset;
//! use atomloc::analysis::find_peaks;
//!
//! let scenario = preset("fig2d").unwrap().with_resolution(101, 101);
//! let grid = scenario.compute_grid().unwrap();
//! let report = find_peaks(&grid, 0.5, 0.3).unwrap();
//! assert_eq!(report.peaks.len(), 2);
//! ```

// Negated comparisons are used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod export;
pub mod grid;
pub mod model;
pub mod oracle;
pub mod scenario;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
