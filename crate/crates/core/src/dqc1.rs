//! Analytic DQC1 engine.
//!
//! The input is `|+⟩⟨+| ⊗ ρ_t` with the transverse state `ρ_t = Σ c_ij |x_i,y_j⟩⟨x_i,y_j|`.
//! The modulator applies `S = |H⟩⟨H| ⊗ U + |V⟩⟨V| ⊗ 1` with `U = Σ e^{-iφ_ij}|ij⟩⟨ij|`.
//! Tracing out the transverse degrees of freedom and shrinking the coherence by the
//! dephasing factor `1 − 2p` leaves
//!
//! ```text
//! ρ_pol = ½ [ 1                       (1−2p) Σ c e^{−iφ} ]
//!           [ (1−2p) Σ c e^{+iφ}        1                 ]
//! ```
//!
//! so `⟨σx⟩ = (1−2p) Σ c cos φ` and `⟨σy⟩ = (1−2p) Σ c sin φ`. The crate reports the
//! complex number `⟨σx⟩ + i⟨σy⟩ = (1−2p) Σ c e^{+iφ}`; the trace of the `e^{−iφ}`
//! matrix is its complex conjugate.

use num_complex::Complex;

use crate::beam_profile::{CountsGrid, IntensityProfile};
use crate::error::{Error, Result};
use crate::phase_mask::PhaseMask;
use crate::scalar::Scalar;
use crate::summation::{self, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Polarization dephasing strength `p ∈ [0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DephasingParam<T>(T);

impl<T: Scalar> DephasingParam<T> {
    pub fn new(p: T) -> Result<Self> {
        if p >= T::zero() && p <= T::of(0.5) {
            Ok(Self(p))
        } else {
            Err(Error::BadDephasing(p.to_f64_lossy()))
        }
    }

    pub fn ideal() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Factor `1 − 2p` applied to the polarization coherences.
    pub fn coherence(self) -> T {
        T::one() - T::of(2.0) * self.0
    }
}

/// 2x2 polarization density matrix in the `{H, V}` basis.
///
/// Stored as the two real populations and the `HV` coherence; `ρ_VH = conj(ρ_HV)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationDensityMatrix<T> {
    hh: T,
    vv: T,
    hv: Complex<T>,
}

impl<T: Scalar> PolarizationDensityMatrix<T> {
    pub fn new(hh: T, vv: T, hv: Complex<T>) -> Self {
        Self { hh, vv, hv }
    }

    /// The diagonal state `|+⟩⟨+|`.
    pub fn plus() -> Self {
        let half = T::of(0.5);
        Self::new(half, half, Complex::new(half, T::zero()))
    }

    pub fn hh(&self) -> T {
        self.hh
    }

    pub fn vv(&self) -> T {
        self.vv
    }

    pub fn hv(&self) -> Complex<T> {
        self.hv
    }

    pub fn vh(&self) -> Complex<T> {
        self.hv.conj()
    }

    /// Full matrix `[[ρ_HH, ρ_HV], [ρ_VH, ρ_VV]]`.
    pub fn entries(&self) -> [[Complex<T>; 2]; 2] {
        [
            [Complex::new(self.hh, T::zero()), self.hv],
            [self.vh(), Complex::new(self.vv, T::zero())],
        ]
    }

    pub fn trace(&self) -> T {
        self.hh + self.vv
    }

    pub fn determinant(&self) -> T {
        self.hh * self.vv - self.hv.norm_sqr()
    }

    /// Unit trace and positive semidefinite within `tol`. Hermiticity holds by
    /// construction.
    pub fn is_valid(&self, tol: T) -> bool {
        (self.trace() - T::one()).abs() <= tol
            && self.hh >= -tol
            && self.vv >= -tol
            && self.determinant() >= -tol
    }

    /// `Tr(ρ σ)` for the Pauli operator along `axis`.
    pub fn expectation(&self, axis: Axis) -> T {
        let two = T::of(2.0);
        match axis {
            Axis::X => two * self.hv.re,
            Axis::Y => -two * self.hv.im,
            Axis::Z => self.hh - self.vv,
        }
    }
}

/// Estimate of the normalized trace `⟨σx⟩ + i⟨σy⟩` with its uncertainties.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceEstimate<T> {
    pub re: T,
    pub im: T,
    pub stat_err_re: T,
    pub stat_err_im: T,
    pub sys_err_re: T,
    pub sys_err_im: T,
    /// Photons spent; 0 for analytic results.
    pub photons_used: u64,
}

impl<T: Scalar> TraceEstimate<T> {
    pub fn analytic(re: T, im: T) -> Self {
        Self {
            re,
            im,
            stat_err_re: T::zero(),
            stat_err_im: T::zero(),
            sys_err_re: T::zero(),
            sys_err_im: T::zero(),
            photons_used: 0,
        }
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }

    pub fn with_systematics(mut self, sys: &SystematicErrors<T>) -> Self {
        self.sys_err_re = sys.total_re();
        self.sys_err_im = sys.total_im();
        self
    }
}

/// Systematic uncertainty split by source.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SystematicErrors<T> {
    /// Phase-step contribution to `⟨σx⟩` and `⟨σy⟩`.
    pub phase_re: T,
    pub phase_im: T,
    /// Poissonian count contribution.
    pub poisson_re: T,
    pub poisson_im: T,
}

impl<T: Scalar> SystematicErrors<T> {
    pub fn total_re(&self) -> T {
        self.phase_re.hypot(self.poisson_re)
    }

    pub fn total_im(&self) -> T {
        self.phase_im.hypot(self.poisson_im)
    }
}

fn check_dims<T: Scalar>(mask: &PhaseMask<T>, profile: &IntensityProfile<T>) -> Result<()> {
    if mask.dims() != profile.dims() {
        return Err(Error::DimsMismatch {
            mask: mask.dims(),
            profile: profile.dims(),
        });
    }
    Ok(())
}

/// `(Σ c cos φ, Σ c sin φ)`, compensated and reduced in a fixed row order.
pub fn weighted_phase_sums<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
) -> Result<(T, T)> {
    check_dims(mask, profile)?;
    let width = mask.dims().width;
    let (phases, weights) = (mask.phases(), profile.weights());
    let [cos, sin] = summation::reduce_rows::<T, 2, _>(phases.len(), width, |r, acc| {
        let range = r * width..(r + 1) * width;
        for (&phi, &w) in phases[range.clone()].iter().zip(&weights[range]) {
            let (s, c) = phi.sin_cos();
            acc[0] += w * c;
            acc[1] += w * s;
        }
    });
    Ok((cos, sin))
}

/// Polarization state after the modulator, the dephasing channel and the partial trace
/// over the transverse degrees of freedom.
pub fn apply_slm<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
) -> Result<PolarizationDensityMatrix<T>> {
    let (cos, sin) = weighted_phase_sums(mask, profile)?;
    let half = T::of(0.5);
    let scale = half * p.coherence();
    Ok(PolarizationDensityMatrix::new(
        half,
        half,
        Complex::new(scale * cos, -(scale * sin)),
    ))
}

pub fn expectation<T: Scalar>(rho: &PolarizationDensityMatrix<T>, axis: Axis) -> T {
    rho.expectation(axis)
}

/// Intensity-weighted, dephased prediction `(1−2p) Σ c e^{iφ}`.
pub fn analytic_trace<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
) -> Result<TraceEstimate<T>> {
    let (cos, sin) = weighted_phase_sums(mask, profile)?;
    let k = p.coherence();
    Ok(TraceEstimate::analytic(k * cos, k * sin))
}

/// Flat-beam, dephasing-free normalized trace `Σ e^{iφ} / (N_x N_y)`.
pub fn exact_normalized_trace<T: Scalar>(mask: &PhaseMask<T>) -> Complex<T> {
    let width = mask.dims().width;
    let phases = mask.phases();
    let [cos, sin] = summation::reduce_rows::<T, 2, _>(phases.len(), width, |r, acc| {
        for &phi in &phases[r * width..(r + 1) * width] {
            let (s, c) = phi.sin_cos();
            acc[0] += c;
            acc[1] += s;
        }
    });
    let n = T::of_usize(phases.len());
    Complex::new(cos / n, sin / n)
}

/// How the Poisson term treats the normalization `N = Σ C_IJ` of the count grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CountNormalization {
    /// `N` is a fixed constant; each cell's intensity error is independent and
    /// `∂⟨σx⟩/∂C_IJ = (1−2p) K_IJ / N`.
    #[default]
    Fixed,
    /// `N` moves with the counts; `∂⟨σx⟩/∂C_IJ = (1−2p)(K_IJ − K̄) / N`.
    Renormalized,
}

/// Systematic uncertainty of [`analytic_trace`] from the phase step `2π / levels` and
/// from Poissonian fluctuations `√C_IJ` of the cell counts the profile was built from.
///
/// Both sources are treated as independent per pixel and per cell and added in
/// quadrature. The Poisson term assumes `profile` came from `counts` through
/// [`IntensityProfile::from_counts`]; with `counts == None` it is zero. `K_IJ` is the
/// mean of `cos φ` (or `sin φ`) over cell `(I, J)`.
pub fn propagate_systematics<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
    levels: u32,
    counts: Option<&CountsGrid<T>>,
) -> Result<SystematicErrors<T>> {
    propagate_systematics_with(mask, profile, p, levels, counts, CountNormalization::Fixed)
}

pub fn propagate_systematics_with<T: Scalar>(
    mask: &PhaseMask<T>,
    profile: &IntensityProfile<T>,
    p: DephasingParam<T>,
    levels: u32,
    counts: Option<&CountsGrid<T>>,
    normalization: CountNormalization,
) -> Result<SystematicErrors<T>> {
    if levels < 2 {
        return Err(Error::BadLevels(levels));
    }
    check_dims(mask, profile)?;
    let k = p.coherence();
    let step = T::TAU() / T::of(levels as f64);
    let width = mask.dims().width;
    let (phases, weights) = (mask.phases(), profile.weights());

    // ∂⟨σx⟩/∂φ_ij = −(1−2p) c_ij sin φ_ij, ∂⟨σy⟩/∂φ_ij = (1−2p) c_ij cos φ_ij.
    let [var_re, var_im] = summation::reduce_rows::<T, 2, _>(phases.len(), width, |r, acc| {
        let range = r * width..(r + 1) * width;
        for (&phi, &w) in phases[range.clone()].iter().zip(&weights[range]) {
            let (s, c) = phi.sin_cos();
            acc[0] += (w * s) * (w * s);
            acc[1] += (w * c) * (w * c);
        }
    });
    let mut errors = SystematicErrors {
        phase_re: k * step * var_re.sqrt(),
        phase_im: k * step * var_im.sqrt(),
        poisson_re: T::zero(),
        poisson_im: T::zero(),
    };

    let Some(grid) = counts else {
        log::info!("no count grid supplied; Poisson term of the systematic error set to 0");
        return Ok(errors);
    };
    grid.check_tiling(mask.dims())?;

    // Per-cell mean of cos φ and sin φ.
    let cells = grid.cells_x() * grid.cells_y();
    let mut cell_cos = vec![CompensatedSum::<T>::new(); cells];
    let mut cell_sin = vec![CompensatedSum::<T>::new(); cells];
    for (i, &phi) in phases.iter().enumerate() {
        let cell = grid.cell_of(i % width, i / width);
        let (s, c) = phi.sin_cos();
        cell_cos[cell] += c;
        cell_sin[cell] += s;
    }
    let area = T::of_usize(grid.cell_size() * grid.cell_size());
    let mean_cos: Vec<T> = cell_cos.iter().map(|a| a.value() / area).collect();
    let mean_sin: Vec<T> = cell_sin.iter().map(|a| a.value() / area).collect();

    let total = grid.total();
    let weighted = |means: &[T]| {
        grid.counts()
            .iter()
            .zip(means)
            .map(|(&c, &m)| c * m)
            .collect::<CompensatedSum<T>>()
            .value()
            / total
    };
    let (bar_cos, bar_sin) = match normalization {
        CountNormalization::Fixed => (T::zero(), T::zero()),
        CountNormalization::Renormalized => (weighted(&mean_cos), weighted(&mean_sin)),
    };

    // ⟨σx⟩ = (1−2p) Σ C K / N with δC_IJ² = C_IJ.
    let poisson = |means: &[T], bar: T| {
        let var = grid
            .counts()
            .iter()
            .zip(means)
            .map(|(&c, &m)| (m - bar) * (m - bar) * c)
            .collect::<CompensatedSum<T>>()
            .value();
        k * var.sqrt() / total
    };
    errors.poisson_re = poisson(&mean_cos, bar_cos);
    errors.poisson_im = poisson(&mean_sin, bar_sin);
    Ok(errors)
}
