//! One-clean-qubit (DQC1) trace estimation on a virtual, polarization-controlled
//! phase-only spatial light modulator.
//!
//! A phase mask `φ(x, y)` programmed on the panel encodes the diagonal unitary
//! `U = Σ e^{-iφ}|x,y⟩⟨x,y|`. The horizontal polarization component of a beam with a
//! spatially incoherent transverse profile picks up `U`, the vertical one does not, and
//! after tracing out the transverse degrees of freedom the polarization coherence holds
//! the intensity-weighted average of `e^{-iφ}`. Measuring `σx` and `σy` then reads out
//! the normalized trace of the encoded matrix.
//!
//! The crate is organized bottom-up:
//!
//! * [`phase_mask`]: panel geometry, mask constructors, phase quantization and the
//!   `PMASK1` text format.
//! * [`beam_profile`]: normalized intensity profiles and ingestion of coincidence-count
//!   grids (`IPROF1` / `CGRID1`).
//! * [`dqc1`]: the analytic engine (controlled-phase action, dephasing, partial trace,
//!   expectation values, systematic-error propagation).
//! * [`measurement`]: seeded Monte Carlo photon counting.
//! * [`deutsch_jozsa`]: constant-vs-balanced oracle tests and the cell-size sweep.
//!
//! All numeric types are generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`, which is what the CLI uses.

// Guards like `!(x > 0.0)` are written that way on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alias;
pub mod beam_profile;
pub mod deutsch_jozsa;
pub mod dqc1;
pub mod error;
pub mod measurement;
pub mod phase_mask;
pub mod rng;
pub mod scalar;
pub mod summation;
mod text;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use beam_profile::{CountsGrid, ProfileLoad};
pub use deutsch_jozsa::{OracleVerdict, SweepRow, SweepSummary, SweepTable, Verdict};
pub use dqc1::{Axis, CountNormalization, DephasingParam, PolarizationDensityMatrix, SystematicErrors, TraceEstimate};
pub use measurement::{Basis, CountRecord, MeasurementConfig, SamplingMode};
pub use phase_mask::{CellSpec, PanelDims, PhaseMask, RampConvention};

/// Phase mask over `f64` phases.
pub type Mask = phase_mask::PhaseMask<f64>;
/// Phase mask over `f32` phases.
pub type MaskF32 = phase_mask::PhaseMask<f32>;
/// Intensity profile over `f64` weights.
pub type Profile = beam_profile::IntensityProfile<f64>;
/// Intensity profile over `f32` weights.
pub type ProfileF32 = beam_profile::IntensityProfile<f32>;
/// Coincidence-count grid over `f64` rates.
pub type Counts = beam_profile::CountsGrid<f64>;
/// Polarization state over `f64`.
pub type DensityMatrix = dqc1::PolarizationDensityMatrix<f64>;
/// Trace estimate over `f64`.
pub type Estimate = dqc1::TraceEstimate<f64>;
/// Dephasing parameter over `f64`.
pub type Dephasing = dqc1::DephasingParam<f64>;

/// Dephasing reported for the modulator used in the reference experiment.
pub const DEFAULT_DEPHASING: f64 = 0.08;
/// Number of phase levels of an 8-bit modulator.
pub const DEFAULT_PHASE_LEVELS: u32 = 256;
/// Full-HD panel width in pixels.
pub const DEFAULT_PANEL_WIDTH: usize = 1920;
/// Full-HD panel height in pixels.
pub const DEFAULT_PANEL_HEIGHT: usize = 1080;
/// Edge length, in pixels, of the square detection cells used for beam characterization.
pub const DEFAULT_COUNT_CELL: usize = 80;
