use thiserror::Error;

use crate::phase_mask::PanelDims;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("panel dimensions must be at least 1x1, got {width}x{height}")]
    BadDims { width: usize, height: usize },

    #[error("cell dimensions must be at least 1x1, got {width}x{height}")]
    BadCells { width: usize, height: usize },

    #[error("half-split mask needs an even panel height, got {0}")]
    OddHeight(usize),

    #[error("a balanced mask needs an even number of cells, got {0}")]
    OddCellCount(usize),

    #[error("phase quantization needs at least 2 levels, got {0}")]
    BadLevels(u32),

    #[error("gaussian waist must be positive and finite, got {0}")]
    BadWaist(f64),

    #[error("count grid {cells_x}x{cells_y} cells of {cell_size} px does not tile a {panel} panel")]
    TilingMismatch {
        cells_x: usize,
        cells_y: usize,
        cell_size: usize,
        panel: PanelDims,
    },

    #[error("count grid has no positive counts")]
    AllZeroCounts,

    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("mask is {mask} but profile is {profile}")]
    DimsMismatch { mask: PanelDims, profile: PanelDims },

    #[error("dephasing parameter must lie in [0, 1/2], got {0}")]
    BadDephasing(f64),

    #[error("pixel {index} has phase {phase} rad, which is neither 0 nor pi")]
    NonBooleanMask { index: usize, phase: f64 },

    #[error("decision threshold must lie in (0, 1), got {0}")]
    BadThreshold(f64),

    #[error("photon budget must be at least 1")]
    BadPhotonBudget,

    #[error("malformed file at line {line}: {reason}")]
    MalformedFile { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn malformed(line: usize, reason: impl Into<String>) -> Self {
        Error::MalformedFile {
            line,
            reason: reason.into(),
        }
    }
}
