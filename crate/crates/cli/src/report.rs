//! JSON run report written by `dqc1 trace`. The schema lives in
//! `schema/run_report.schema.json`; everything outside `nondeterministic` is a pure
//! function of the invocation and its input files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use slm_dqc1::{Estimate, SystematicErrors};

pub const SCHEMA_ID: &str = "dqc1-run-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: Vec<String>,
    pub inputs: Inputs,
    pub panel: Panel,
    pub noise: Noise,
    pub analytic: EstimateJson,
    pub systematics: SystematicsJson,
    pub monte_carlo: Option<EstimateJson>,
    pub exact_flat: ComplexJson,
    pub nondeterministic: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub mask: FileDigest,
    pub profile: Option<FileDigest>,
    pub counts: Option<FileDigest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    pub dephasing: f64,
    pub phase_levels: u32,
    pub photons_per_basis: Option<u64>,
    pub seed: Option<u64>,
    pub sampling_mode: Option<String>,
    /// `"uniform"` when no profile or counts file was given.
    pub beam: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateJson {
    pub re: f64,
    pub im: f64,
    pub stat_err_re: f64,
    pub stat_err_im: f64,
    pub sys_err_re: f64,
    pub sys_err_im: f64,
    pub photons_used: u64,
}

impl From<&Estimate> for EstimateJson {
    fn from(e: &Estimate) -> Self {
        Self {
            re: e.re,
            im: e.im,
            stat_err_re: e.stat_err_re,
            stat_err_im: e.stat_err_im,
            sys_err_re: e.sys_err_re,
            sys_err_im: e.sys_err_im,
            photons_used: e.photons_used,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystematicsJson {
    pub phase_re: f64,
    pub phase_im: f64,
    pub poisson_re: f64,
    pub poisson_im: f64,
}

impl From<&SystematicErrors<f64>> for SystematicsJson {
    fn from(s: &SystematicErrors<f64>) -> Self {
        Self {
            phase_re: s.phase_re,
            phase_im: s.phase_im,
            poisson_re: s.poisson_re,
            poisson_im: s.poisson_im,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

/// Wall-clock fields, excluded from reproducibility guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_at_unix: f64,
    pub duration_seconds: f64,
}
