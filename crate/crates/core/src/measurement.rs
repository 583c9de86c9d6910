//! Finite-photon polarization measurements.
//!
//! A measurement in the `σx` or `σy` basis yields `+` with probability `(1 + s) / 2`,
//! `s` being the analytic expectation. Two samplers produce the same distribution:
//!
//! * [`SamplingMode::Binomial`] draws `n₊ ~ Binomial(N, (1 + s) / 2)` in one shot.
//! * [`SamplingMode::PerPhoton`] draws each photon's pixel from the beam profile with an
//!   alias table, then its outcome from that pixel's local expectation
//!   `(1−2p) cos φ` or `(1−2p) sin φ`.
//!
//! The photon budget of the per-photon sampler is split into fixed-size shards, each
//! seeded from `(seed, basis, shard)`, and the shard totals are summed, so counts are
//! reproducible at any thread count.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::beam_profile::IntensityProfile;
use crate::dqc1::{self, DephasingParam, TraceEstimate};
use crate::error::{Error, Result};
use crate::phase_mask::PhaseMask;
use crate::rng::{derive_seed, rng_from_seed};
use crate::scalar::Scalar;

/// Photons per shard of the per-photon sampler.
pub const SHARD_PHOTONS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SamplingMode {
    PerPhoton,
    #[default]
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Y,
}

impl Basis {
    fn stream(self) -> u64 {
        match self {
            Basis::X => 0,
            Basis::Y => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementConfig {
    /// Photons detected in each basis.
    pub photons_per_basis: u64,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl MeasurementConfig {
    pub fn new(photons_per_basis: u64, seed: u64, mode: SamplingMode) -> Result<Self> {
        if photons_per_basis == 0 {
            return Err(Error::BadPhotonBudget);
        }
        Ok(Self {
            photons_per_basis,
            seed,
            mode,
        })
    }

    pub fn binomial(photons_per_basis: u64, seed: u64) -> Result<Self> {
        Self::new(photons_per_basis, seed, SamplingMode::Binomial)
    }

    pub fn per_photon(photons_per_basis: u64, seed: u64) -> Result<Self> {
        Self::new(photons_per_basis, seed, SamplingMode::PerPhoton)
    }
}

/// Outcome tally of one basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRecord {
    pub basis: Basis,
    pub n_plus: u64,
    pub n_minus: u64,
}

impl CountRecord {
    pub fn total(&self) -> u64 {
        self.n_plus + self.n_minus
    }

    /// `(n₊ − n₋) / N` and its plug-in standard error `√((1 − ŝ²) / N)`.
    pub fn mean_and_stderr(&self) -> (f64, f64) {
        let n = self.total() as f64;
        if n == 0.0 {
            return (0.0, 0.0);
        }
        let s = (self.n_plus as f64 - self.n_minus as f64) / n;
        (s, ((1.0 - s * s).max(0.0) / n).sqrt())
    }
}

/// Per-pixel sampler shared by both bases of one measurement run.
struct PixelSampler<'a, T> {
    table: AliasTable,
    phases: &'a [T],
    coherence: f64,
}

impl<'a, T: Scalar> PixelSampler<'a, T> {
    fn new(mask: &'a PhaseMask<T>, profile: &IntensityProfile<T>, p: DephasingParam<T>) -> Self {
        let weights: Vec<f64> = profile.weights().iter().map(|w| w.to_f64_lossy()).collect();
        let table = AliasTable::new(&weights).expect("profiles are nonnegative with unit sum");
        Self {
            table,
            phases: mask.phases(),
            coherence: p.coherence().to_f64_lossy(),
        }
    }

    fn count_plus(&self, basis: Basis, config: &MeasurementConfig) -> u64 {
        let n = config.photons_per_basis;
        let shards = n.div_ceil(SHARD_PHOTONS);
        let shard = |i: u64| {
            let mut rng = rng_from_seed(derive_seed(config.seed, &[basis.stream(), i]));
            let photons = SHARD_PHOTONS.min(n - i * SHARD_PHOTONS);
            let mut plus = 0u64;
            for _ in 0..photons {
                let phi = self.phases[self.table.sample(&mut rng)].to_f64_lossy();
                let local = match basis {
                    Basis::X => phi.cos(),
                    Basis::Y => phi.sin(),
                };
                let q = 0.5 * (1.0 + self.coherence * local);
                plus += u64::from(rng.random::<f64>() < q);
            }
            plus
        };
        if shards > 1 {
            (0..shards).into_par_iter().map(shard).sum()
        } else {
            shard(0)
        }
    }
}

fn binomial_plus(s: f64, basis: Basis, config: &MeasurementConfig) -> u64 {
    let q = (0.5 * (1.0 + s)).clamp(0.0, 1.0);
    let mut rng = rng_from_seed(derive_seed(config.seed, &[basis.stream()]));
    Binomial::new(config.photons_per_basis, q)
        .expect("q is clamped to [0, 1]")
        .sample(&mut rng)
}

fn record(basis: Basis, n: u64, plus: u64) -> CountRecord {
    CountRecord {
        basis,
        n_plus: plus,
        n_minus: n - plus,
    }
}

/// Simulated photon counts for one basis.
pub fn sample_basis<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
    basis: Basis,
    config: &MeasurementConfig,
) -> Result<CountRecord> {
    if config.photons_per_basis == 0 {
        return Err(Error::BadPhotonBudget);
    }
    let n = config.photons_per_basis;
    let plus = match config.mode {
        SamplingMode::Binomial => {
            let est = dqc1::analytic_trace(mask, profile, p)?;
            let s = match basis {
                Basis::X => est.re,
                Basis::Y => est.im,
            };
            binomial_plus(s.to_f64_lossy(), basis, config)
        }
        SamplingMode::PerPhoton => {
            if mask.dims() != profile.dims() {
                return Err(Error::DimsMismatch {
                    mask: mask.dims(),
                    profile: profile.dims(),
                });
            }
            PixelSampler::new(mask, profile, p).count_plus(basis, config)
        }
    };
    Ok(record(basis, n, plus))
}

/// Estimates `⟨σx⟩ + i⟨σy⟩` from one record per basis.
pub fn estimate_from_counts<T: Scalar>(x: &CountRecord, y: &CountRecord) -> TraceEstimate<T> {
    let (re, err_re) = x.mean_and_stderr();
    let (im, err_im) = y.mean_and_stderr();
    TraceEstimate {
        re: T::of(re),
        im: T::of(im),
        stat_err_re: T::of(err_re),
        stat_err_im: T::of(err_im),
        sys_err_re: T::zero(),
        sys_err_im: T::zero(),
        photons_used: x.total() + y.total(),
    }
}

/// Both bases sampled with an independent budget each, then combined.
pub fn monte_carlo_trace<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
    config: &MeasurementConfig,
) -> Result<TraceEstimate<T>> {
    if config.photons_per_basis == 0 {
        return Err(Error::BadPhotonBudget);
    }
    let n = config.photons_per_basis;
    let (x, y) = match config.mode {
        SamplingMode::Binomial => {
            let est = dqc1::analytic_trace(mask, profile, p)?;
            (
                record(Basis::X, n, binomial_plus(est.re.to_f64_lossy(), Basis::X, config)),
                record(Basis::Y, n, binomial_plus(est.im.to_f64_lossy(), Basis::Y, config)),
            )
        }
        SamplingMode::PerPhoton => {
            if mask.dims() != profile.dims() {
                return Err(Error::DimsMismatch {
                    mask: mask.dims(),
                    profile: profile.dims(),
                });
            }
            let sampler = PixelSampler::new(mask, profile, p);
            (
                record(Basis::X, n, sampler.count_plus(Basis::X, config)),
                record(Basis::Y, n, sampler.count_plus(Basis::Y, config)),
            )
        }
    };
    Ok(estimate_from_counts(&x, &y))
}
