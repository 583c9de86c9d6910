//! Transverse beam intensity on the panel, as normalized per-pixel weights `c_ij`.
//!
//! Measured profiles come in as coincidence-count rates `C_IJ` on square detection
//! cells. With a flat intensity assumed inside each cell, every pixel of cell `(I, J)`
//! gets `c_ij = C_IJ / (N · s²)` where `s` is the cell edge in pixels and `N = Σ C_IJ`.

use std::fs;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::phase_mask::PanelDims;
use crate::scalar::Scalar;
use crate::summation;
use crate::text;

/// Deviation of an input sum from 1 above which loaders warn.
pub const RENORMALIZE_WARN_THRESHOLD: f64 = 1e-6;

/// Nonnegative pixel weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile<T> {
    dims: PanelDims,
    weights: Vec<T>,
}

/// Coincidence-count rates on a grid of square detection cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsGrid<T> {
    cells_x: usize,
    cells_y: usize,
    cell_size: usize,
    counts: Vec<T>,
}

/// A profile read from disk, plus what the loader had to fix.
#[derive(Debug, Clone)]
pub struct ProfileLoad<T> {
    pub profile: IntensityProfile<T>,
    /// Sum of the weights as stored in the file.
    pub input_sum: T,
}

impl<T: Scalar> ProfileLoad<T> {
    /// Whether the stored weights had to be rescaled to reach unit sum.
    pub fn renormalized(&self) -> bool {
        (self.input_sum - T::one()).abs() > T::unit_tolerance()
    }

    /// Whether the stored sum was far enough from 1 to deserve a warning.
    pub fn warned(&self) -> bool {
        (self.input_sum - T::one()).abs().to_f64_lossy() > RENORMALIZE_WARN_THRESHOLD
    }
}

fn check_weights<T: Scalar>(weights: &[T]) -> Result<()> {
    for (index, &w) in weights.iter().enumerate() {
        if !(w >= T::zero()) || !w.is_finite() {
            return Err(Error::NegativeWeight {
                index,
                value: w.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

impl<T: Scalar> IntensityProfile<T> {
    pub fn flat(dims: PanelDims) -> Self {
        let w = T::one() / T::of_usize(dims.pixel_count());
        Self {
            dims,
            weights: vec![w; dims.pixel_count()],
        }
    }

    /// Gaussian spot `exp(-2 r² / waist²)` sampled at pixel centers, normalized.
    ///
    /// `center_x` and `center_y` are in pixel units measured from the top-left corner,
    /// so `(width / 2, height / 2)` is the panel center.
    pub fn gaussian(dims: PanelDims, center_x: T, center_y: T, waist: T) -> Result<Self> {
        if !(waist > T::zero()) || !waist.is_finite() {
            return Err(Error::BadWaist(waist.to_f64_lossy()));
        }
        let half = T::of(0.5);
        let k = T::of(-2.0) / (waist * waist);
        let mut weights = Vec::with_capacity(dims.pixel_count());
        for y in 0..dims.height {
            let dy = T::of_usize(y) + half - center_y;
            for x in 0..dims.width {
                let dx = T::of_usize(x) + half - center_x;
                weights.push((k * (dx * dx + dy * dy)).exp());
            }
        }
        let total = summation::sum(&weights);
        if !(total > T::zero()) {
            return Err(Error::BadWaist(waist.to_f64_lossy()));
        }
        for w in &mut weights {
            *w = *w / total;
        }
        Ok(Self { dims, weights })
    }

    /// Spreads each cell's share of the total counts uniformly over its pixels.
    pub fn from_counts(grid: &CountsGrid<T>, dims: PanelDims) -> Result<Self> {
        grid.check_tiling(dims)?;
        let total = summation::sum(&grid.counts);
        if !(total > T::zero()) {
            return Err(Error::AllZeroCounts);
        }
        let s = grid.cell_size;
        let denom = total * T::of_usize(s * s);
        let mut weights = Vec::with_capacity(dims.pixel_count());
        for y in 0..dims.height {
            let row = &grid.counts[(y / s) * grid.cells_x..][..grid.cells_x];
            for &c in row {
                let w = c / denom;
                weights.extend(std::iter::repeat_n(w, s));
            }
        }
        Ok(Self { dims, weights })
    }

    /// Takes arbitrary nonnegative weights and rescales them to unit sum when needed.
    pub fn from_weights(dims: PanelDims, weights: Vec<T>) -> Result<Self> {
        Ok(Self::normalize(dims, weights)?.profile)
    }

    fn normalize(dims: PanelDims, mut weights: Vec<T>) -> Result<ProfileLoad<T>> {
        PanelDims::new(dims.width, dims.height)?;
        if weights.len() != dims.pixel_count() {
            return Err(Error::malformed(
                0,
                format!("{} weights do not fill a {dims} panel", weights.len()),
            ));
        }
        check_weights(&weights)?;
        let input_sum = summation::sum(&weights);
        if !(input_sum > T::zero()) {
            return Err(Error::AllZeroCounts);
        }
        if (input_sum - T::one()).abs() > T::unit_tolerance() {
            for w in &mut weights {
                *w = *w / input_sum;
            }
        }
        Ok(ProfileLoad {
            profile: Self { dims, weights },
            input_sum,
        })
    }

    pub fn dims(&self) -> PanelDims {
        self.dims
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Compensated sum of all weights; 1 up to [`Scalar::unit_tolerance`].
    pub fn total(&self) -> T {
        summation::sum(&self.weights)
    }

    /// `Σ c_ij²`, the inverse effective number of illuminated pixels.
    pub fn sum_of_squares(&self) -> T {
        self.weights
            .iter()
            .map(|&w| w * w)
            .collect::<summation::CompensatedSum<T>>()
            .value()
    }

    /// Pointwise mixture `λ·self + (1 − λ)·other`.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                mask: self.dims,
                profile: other.dims,
            });
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(&a, &b)| lambda * a + (T::one() - lambda) * b)
            .collect();
        Self::from_weights(self.dims, weights)
    }

    pub fn to_text(&self) -> String {
        text::write_grid(
            &format!("IPROF1 {} {}", self.dims.width, self.dims.height),
            &self.weights,
            self.dims.width,
            |&w, out| text::push_f64(w.to_f64_lossy(), out),
        )
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<ProfileLoad<T>> {
        let grid = text::read_grid(reader, "IPROF1")?;
        let [w, h] = grid.header.as_slice() else {
            return Err(Error::malformed(1, "expected `IPROF1 <width> <height>`"));
        };
        let dims = PanelDims::new(
            text::parse_usize(w, 1, "width")?,
            text::parse_usize(h, 1, "height")?,
        )?;
        let weights = grid
            .values(dims.width, dims.height)?
            .into_iter()
            .map(|(line, tok)| Ok(T::of(text::parse_f64(tok, line)?)))
            .collect::<Result<Vec<T>>>()?;
        let loaded = Self::normalize(dims, weights)?;
        if loaded.warned() {
            log::warn!(
                "profile weights summed to {}; re-normalized to 1",
                loaded.input_sum
            );
        }
        Ok(loaded)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ProfileLoad<T>> {
        let file = fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}

impl<T: Scalar> CountsGrid<T> {
    /// `counts` is row-major: `cells_y` rows of `cells_x` rates.
    pub fn new(cells_x: usize, cells_y: usize, cell_size: usize, counts: Vec<T>) -> Result<Self> {
        if cells_x == 0 || cells_y == 0 {
            return Err(Error::BadDims {
                width: cells_x,
                height: cells_y,
            });
        }
        if cell_size == 0 {
            return Err(Error::BadCells {
                width: 0,
                height: 0,
            });
        }
        if counts.len() != cells_x * cells_y {
            return Err(Error::malformed(
                0,
                format!("{} counts do not fill {cells_x}x{cells_y} cells", counts.len()),
            ));
        }
        check_weights(&counts)?;
        if !counts.iter().any(|&c| c > T::zero()) {
            return Err(Error::AllZeroCounts);
        }
        Ok(Self {
            cells_x,
            cells_y,
            cell_size,
            counts,
        })
    }

    pub fn uniform(cells_x: usize, cells_y: usize, cell_size: usize, rate: T) -> Result<Self> {
        Self::new(cells_x, cells_y, cell_size, vec![rate; cells_x * cells_y])
    }

    pub fn cells_x(&self) -> usize {
        self.cells_x
    }

    pub fn cells_y(&self) -> usize {
        self.cells_y
    }

    pub fn cell_size(&self) -> usize {
        self.cell_size
    }

    pub fn counts(&self) -> &[T] {
        &self.counts
    }

    pub fn total(&self) -> T {
        summation::sum(&self.counts)
    }

    /// Grid with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.cells_x,
            self.cells_y,
            self.cell_size,
            self.counts.iter().map(|&c| c * factor).collect(),
        )
    }

    /// Whether the grid covers exactly a `dims` panel.
    pub fn check_tiling(&self, dims: PanelDims) -> Result<()> {
        if self.cells_x * self.cell_size != dims.width || self.cells_y * self.cell_size != dims.height {
            return Err(Error::TilingMismatch {
                cells_x: self.cells_x,
                cells_y: self.cells_y,
                cell_size: self.cell_size,
                panel: dims,
            });
        }
        Ok(())
    }

    /// Cell index containing pixel `(x, y)`.
    #[inline]
    pub fn cell_of(&self, x: usize, y: usize) -> usize {
        (y / self.cell_size) * self.cells_x + x / self.cell_size
    }

    pub fn to_text(&self) -> String {
        text::write_grid(
            &format!("CGRID1 {} {} {}", self.cells_x, self.cells_y, self.cell_size),
            &self.counts,
            self.cells_x,
            |&c, out| text::push_f64(c.to_f64_lossy(), out),
        )
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let grid = text::read_grid(reader, "CGRID1")?;
        let [cx, cy, s] = grid.header.as_slice() else {
            return Err(Error::malformed(1, "expected `CGRID1 <cells_x> <cells_y> <cell_size>`"));
        };
        let cells_x = text::parse_usize(cx, 1, "cells_x")?;
        let cells_y = text::parse_usize(cy, 1, "cells_y")?;
        let cell_size = text::parse_usize(s, 1, "cell_size")?;
        let counts = grid
            .values(cells_x, cells_y)?
            .into_iter()
            .map(|(line, tok)| Ok(T::of(text::parse_f64(tok, line)?)))
            .collect::<Result<Vec<T>>>()?;
        Self::new(cells_x, cells_y, cell_size, counts)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }
}
