//! Deutsch-Jozsa by trace estimation.
//!
//! An oracle `f: pixels → {0, 1}` is written on the panel as a `{0, π}` mask. A constant
//! oracle gives `⟨σx⟩ = ±(1 − 2p)`, a balanced one gives `⟨σx⟩ = 0`; the verdict
//! thresholds the measured `⟨σx⟩`.

use rayon::prelude::*;

use crate::beam_profile::IntensityProfile;
use crate::dqc1::{self, DephasingParam};
use crate::error::{Error, Result};
use crate::measurement::{self, Basis, MeasurementConfig, SamplingMode};
use crate::phase_mask::{circular_distance, CellSpec, PhaseMask};
use crate::rng::derive_seed;
use crate::scalar::Scalar;

/// Largest distance from 0 or π, in radians, still accepted as a boolean pixel.
pub const BOOLEAN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ConstantPlus,
    ConstantMinus,
    Balanced,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConstantPlus => "constant_plus",
            Verdict::ConstantMinus => "constant_minus",
            Verdict::Balanced => "balanced",
        }
    }

    pub fn classify<T: Scalar>(statistic: T, threshold: T) -> Self {
        if statistic > threshold {
            Verdict::ConstantPlus
        } else if statistic < -threshold {
            Verdict::ConstantMinus
        } else {
            Verdict::Balanced
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict<T> {
    pub verdict: Verdict,
    /// Measured (or analytic) `⟨σx⟩`.
    pub statistic: T,
    /// Standard error of `statistic`; 0 on the analytic path.
    pub stderr: T,
    pub threshold: T,
    pub photons_used: u64,
}

/// Halfway between the balanced and constant expectations: `(1 − 2p) / 2`.
pub fn default_threshold<T: Scalar>(p: DephasingParam<T>) -> T {
    p.coherence() * T::of(0.5)
}

/// Fails with [`Error::NonBooleanMask`] on the first pixel that is neither 0 nor π.
pub fn check_boolean<T: Scalar>(mask: &PhaseMask<T>) -> Result<()> {
    let tol = T::of(BOOLEAN_TOLERANCE);
    let pi = T::PI();
    for (index, &phi) in mask.phases().iter().enumerate() {
        if circular_distance(phi, T::zero()) > tol && circular_distance(phi, pi) > tol {
            return Err(Error::NonBooleanMask {
                index,
                phase: phi.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

/// Classifies a `{0, π}` oracle mask. `config == None` uses the noiseless analytic
/// `⟨σx⟩`; otherwise `⟨σx⟩` is measured with `config.photons_per_basis` photons.
pub fn run_dj<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
    config: Option<&MeasurementConfig>,
    threshold: T,
) -> Result<OracleVerdict<T>> {
    if !(threshold > T::zero() && threshold < T::one()) {
        return Err(Error::BadThreshold(threshold.to_f64_lossy()));
    }
    check_boolean(mask)?;
    let (statistic, stderr, photons_used) = match config {
        None => (dqc1::analytic_trace(mask, profile, p)?.re, T::zero(), 0),
        Some(cfg) => {
            let rec = measurement::sample_basis(mask, profile, p, Basis::X, cfg)?;
            let (s, err) = rec.mean_and_stderr();
            (T::of(s), T::of(err), rec.total())
        }
    };
    Ok(OracleVerdict {
        verdict: Verdict::classify(statistic, threshold),
        statistic,
        stderr,
        threshold,
        photons_used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions<T> {
    pub trials: usize,
    pub master_seed: u64,
    pub threshold: T,
    /// Photon budget and sampler; `None` runs the analytic path.
    pub shots: Option<(u64, SamplingMode)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    /// Edge of the square cells, in pixels.
    pub cell_size: usize,
    pub trial: usize,
    /// Seed of both the oracle mask and its measurement.
    pub seed: u64,
    pub statistic: T,
    pub stderr: T,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary<T> {
    pub cell_size: usize,
    pub trials: usize,
    pub mean: T,
    /// Sample standard deviation (zero for a single trial).
    pub std_dev: T,
    /// Trials not classified as balanced.
    pub misclassified: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable<T> {
    pub rows: Vec<SweepRow<T>>,
    pub summaries: Vec<SweepSummary<T>>,
}

impl<T: Scalar> SweepTable<T> {
    pub const CSV_HEADER: &'static str = "cell_size,trial,seed,statistic,stderr,verdict";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.cell_size,
                r.trial,
                r.seed,
                r.statistic.to_f64_lossy(),
                r.stderr.to_f64_lossy(),
                r.verdict
            ));
        }
        out
    }
}

/// Seed of trial `trial` at cell size `cell_size`.
pub fn trial_seed(master_seed: u64, cell_size: usize, trial: usize) -> u64 {
    derive_seed(master_seed, &[cell_size as u64, trial as u64])
}

/// Runs `opts.trials` random balanced oracles for every cell size on the panel of
/// `profile` and tabulates the measured `⟨σx⟩`.
pub fn resolution_sweep<T: Scalar>(
    cell_sizes: &[usize],
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
    opts: &SweepOptions<T>,
) -> Result<SweepTable<T>> {
    let dims = profile.dims();
    let mut table = SweepTable::default();
    if opts.trials == 0 {
        return Ok(table);
    }
    for &size in cell_sizes {
        let cells = CellSpec::square(size)?;
        let rows = (0..opts.trials)
            .into_par_iter()
            .map(|trial| {
                let seed = trial_seed(opts.master_seed, size, trial);
                let mask = PhaseMask::random_balanced(dims, cells, seed)?;
                let config = opts
                    .shots
                    .map(|(n, mode)| MeasurementConfig::new(n, seed, mode))
                    .transpose()?;
                let v = run_dj(&mask, profile, p, config.as_ref(), opts.threshold)?;
                Ok(SweepRow {
                    cell_size: size,
                    trial,
                    seed,
                    statistic: v.statistic,
                    stderr: v.stderr,
                    verdict: v.verdict,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let n = T::of_usize(rows.len());
        let mean = rows.iter().fold(T::zero(), |a, r| a + r.statistic) / n;
        let std_dev = if rows.len() > 1 {
            let ss = rows
                .iter()
                .fold(T::zero(), |a, r| a + (r.statistic - mean) * (r.statistic - mean));
            (ss / (n - T::one())).sqrt()
        } else {
            T::zero()
        };
        table.summaries.push(SweepSummary {
            cell_size: size,
            trials: rows.len(),
            mean,
            std_dev,
            misclassified: rows.iter().filter(|r| r.verdict != Verdict::Balanced).count(),
        });
        table.rows.extend(rows);
    }
    Ok(table)
}
