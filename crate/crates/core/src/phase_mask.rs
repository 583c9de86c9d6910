//! Phase masks: the per-pixel modulation phases that encode a diagonal unitary.
//!
//! Grids are row-major with row 0 at the top of the panel; pixel `(x, y)` lives at
//! index `y * width + x`. Every stored phase is canonical, i.e. in `[0, 2π)`.

use std::fmt;
use std::fs;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;
use crate::text;

/// Panel geometry in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PanelDims {
    pub width: usize,
    pub height: usize,
}

impl PanelDims {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDims { width, height });
        }
        Ok(Self { width, height })
    }

    /// The 1920x1080 full-HD panel.
    pub fn full_hd() -> Self {
        Self {
            width: crate::DEFAULT_PANEL_WIDTH,
            height: crate::DEFAULT_PANEL_HEIGHT,
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }
}

impl fmt::Display for PanelDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for PanelDims {
    type Err = String;

    /// Parses `<width>x<height>`, e.g. `1920x1080`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected <width>x<height>, got `{s}`"))?;
        let width = w.trim().parse().map_err(|_| format!("bad width `{w}`"))?;
        let height = h.trim().parse().map_err(|_| format!("bad height `{h}`"))?;
        PanelDims::new(width, height).map_err(|e| e.to_string())
    }
}

/// Size of the rectangular cells a balanced oracle is tiled with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellSpec {
    pub width: usize,
    pub height: usize,
}

impl CellSpec {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadCells { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn square(size: usize) -> Result<Self> {
        Self::new(size, size)
    }

    /// Number of cells along each axis. A trailing partial cell counts as a cell.
    pub fn cells_along(&self, dims: PanelDims) -> (usize, usize) {
        (
            dims.width.div_ceil(self.width),
            dims.height.div_ceil(self.height),
        )
    }

    pub fn cell_count(&self, dims: PanelDims) -> usize {
        let (cx, cy) = self.cells_along(dims);
        cx * cy
    }
}

/// How the two angles of a linear ramp are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RampConvention {
    /// Phases run from `start` (top row) towards `end`: `start + (j / N_y)(end - start)`.
    #[default]
    Span,
    /// The second angle is the increment: `start + (j / N_y) end`.
    Literal,
}

/// Reduces a phase to `[0, 2π)`.
pub fn canonical_phase<T: Scalar>(phi: T) -> T {
    let tau = T::TAU();
    let mut r = phi - tau * (phi / tau).floor();
    if r >= tau {
        r = r - tau;
    }
    if r < T::zero() || r >= tau {
        r = T::zero();
    }
    r
}

/// Distance between two phases measured on the circle, in `[0, π]`.
pub fn circular_distance<T: Scalar>(a: T, b: T) -> T {
    let d = canonical_phase(a - b);
    d.min(T::TAU() - d)
}

/// Phase of quantization level `k` out of `levels`.
#[inline]
fn level_phase<T: Scalar>(k: u64, levels: u32) -> T {
    T::of(k as f64) * (T::TAU() / T::of(levels as f64))
}

/// Nearest level to `phi` (round half up), wrapping level `levels` to 0.
#[inline]
fn nearest_level<T: Scalar>(phi: T, levels: u32) -> u64 {
    let step = T::TAU() / T::of(levels as f64);
    let k = (canonical_phase(phi) / step + T::of(0.5)).floor().to_f64_lossy() as u64;
    k % levels as u64
}

/// A phase pattern on the virtual panel.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMask<T> {
    dims: PanelDims,
    phases: Vec<T>,
    /// Set when every phase sits on a multiple of `2π / levels`.
    levels: Option<u32>,
}

impl<T: Scalar> PhaseMask<T> {
    /// Wraps a row-major phase grid, canonicalizing every value.
    pub fn from_phases(dims: PanelDims, mut phases: Vec<T>) -> Result<Self> {
        PanelDims::new(dims.width, dims.height)?;
        if phases.len() != dims.pixel_count() {
            return Err(Error::malformed(
                0,
                format!(
                    "{} phases do not fill a {dims} panel",
                    phases.len()
                ),
            ));
        }
        for p in &mut phases {
            *p = canonical_phase(*p);
        }
        Ok(Self {
            dims,
            phases,
            levels: None,
        })
    }

    pub fn constant(dims: PanelDims, phase: T) -> Self {
        Self {
            dims,
            phases: vec![canonical_phase(phase); dims.pixel_count()],
            levels: None,
        }
    }

    /// Two-region mask: the upper half of the rows carries `upper`, the lower half `lower`.
    pub fn half_split(dims: PanelDims, upper: T, lower: T) -> Result<Self> {
        if !dims.height.is_multiple_of(2) {
            return Err(Error::OddHeight(dims.height));
        }
        let split = dims.pixel_count() / 2;
        let (upper, lower) = (canonical_phase(upper), canonical_phase(lower));
        let phases = (0..dims.pixel_count())
            .map(|i| if i < split { upper } else { lower })
            .collect();
        Ok(Self {
            dims,
            phases,
            levels: None,
        })
    }

    /// Balanced `{0, π}` oracle over a tiling of `cells`.
    ///
    /// A list with the first half of the cells marked `0` and the second half marked `π`
    /// is permuted by a Fisher-Yates shuffle driven by `ChaCha8Rng::seed_from_u64(seed)`.
    /// When the cells do not divide the panel, trailing partial cells still count as
    /// cells, so pixel populations are then only approximately equal.
    pub fn random_balanced(dims: PanelDims, cells: CellSpec, seed: u64) -> Result<Self> {
        let (cx, cy) = cells.cells_along(dims);
        let count = cx * cy;
        if count % 2 != 0 {
            return Err(Error::OddCellCount(count));
        }
        let mut flipped: Vec<bool> = (0..count).map(|i| i >= count / 2).collect();
        rng::shuffle(&mut flipped, &mut rng::rng_from_seed(seed));

        let pi = T::PI();
        let mut phases = Vec::with_capacity(dims.pixel_count());
        for y in 0..dims.height {
            let row = &flipped[(y / cells.height) * cx..][..cx];
            phases.extend((0..dims.width).map(|x| {
                if row[x / cells.width] {
                    pi
                } else {
                    T::zero()
                }
            }));
        }
        Ok(Self {
            dims,
            phases,
            levels: None,
        })
    }

    /// Ramp along `y`, constant along `x`, using the [`RampConvention::Span`] reading.
    pub fn linear_ramp(dims: PanelDims, start: T, end: T) -> Self {
        Self::linear_ramp_with(dims, start, end, RampConvention::Span)
    }

    pub fn linear_ramp_with(dims: PanelDims, start: T, end: T, convention: RampConvention) -> Self {
        let increment = match convention {
            RampConvention::Span => end - start,
            RampConvention::Literal => end,
        };
        let ny = T::of_usize(dims.height);
        let mut phases = Vec::with_capacity(dims.pixel_count());
        for j in 0..dims.height {
            let phi = canonical_phase(start + T::of_usize(j) / ny * increment);
            phases.extend(std::iter::repeat_n(phi, dims.width));
        }
        Self {
            dims,
            phases,
            levels: None,
        }
    }

    /// Snaps every phase to the nearest multiple of `2π / levels`.
    pub fn quantize(&self, levels: u32) -> Result<Self> {
        if levels < 2 {
            return Err(Error::BadLevels(levels));
        }
        let phases = self
            .phases
            .iter()
            .map(|&p| level_phase(nearest_level(p, levels), levels))
            .collect();
        Ok(Self {
            dims: self.dims,
            phases,
            levels: Some(levels),
        })
    }

    pub fn dims(&self) -> PanelDims {
        self.dims
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    /// Quantization level count, if the mask is known to be quantized.
    pub fn levels(&self) -> Option<u32> {
        self.levels
    }

    pub fn phase_at(&self, x: usize, y: usize) -> T {
        self.phases[y * self.dims.width + x]
    }

    /// Mask with every phase negated (mod 2π); encodes the complex-conjugate unitary.
    pub fn conjugate(&self) -> Self {
        self.map_phases(|p| -p)
    }

    /// Mask with `delta` added to every phase (mod 2π).
    pub fn shifted(&self, delta: T) -> Self {
        self.map_phases(|p| p + delta)
    }

    fn map_phases(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            dims: self.dims,
            phases: self.phases.iter().map(|&p| canonical_phase(f(p))).collect(),
            levels: None,
        }
    }

    /// Renders the mask in the `PMASK1` text format. Quantized masks are written as
    /// integer levels with an `L<levels>` header suffix.
    pub fn to_text(&self) -> String {
        let PanelDims { width, height } = self.dims;
        match self.levels {
            Some(levels) => text::write_grid(
                &format!("PMASK1 {width} {height} L{levels}"),
                &self.phases,
                width,
                |&p, out| out.push_str(&nearest_level(p, levels).to_string()),
            ),
            None => text::write_grid(
                &format!("PMASK1 {width} {height}"),
                &self.phases,
                width,
                |&p, out| text::push_f64(p.to_f64_lossy(), out),
            ),
        }
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let grid = text::read_grid(reader, "PMASK1")?;
        let (width, height, levels) = match grid.header.as_slice() {
            [w, h] => (w, h, None),
            [w, h, l] => {
                let levels = l
                    .strip_prefix('L')
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| Error::malformed(1, format!("bad level suffix `{l}`")))?;
                if levels < 2 {
                    return Err(Error::BadLevels(levels));
                }
                (w, h, Some(levels))
            }
            _ => return Err(Error::malformed(1, "expected `PMASK1 <width> <height> [L<levels>]`")),
        };
        let dims = PanelDims::new(
            text::parse_usize(width, 1, "width")?,
            text::parse_usize(height, 1, "height")?,
        )?;
        let values = grid.values(dims.width, dims.height)?;
        let phases = match levels {
            Some(levels) => values
                .into_iter()
                .map(|(line, tok)| {
                    let k: i64 = tok
                        .parse()
                        .map_err(|_| Error::malformed(line, format!("bad level `{tok}`")))?;
                    Ok(level_phase(k.rem_euclid(levels as i64) as u64, levels))
                })
                .collect::<Result<Vec<T>>>()?,
            None => values
                .into_iter()
                .map(|(line, tok)| Ok(canonical_phase(T::of(text::parse_f64(tok, line)?))))
                .collect::<Result<Vec<T>>>()?,
        };
        Ok(Self {
            dims,
            phases,
            levels,
        })
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
