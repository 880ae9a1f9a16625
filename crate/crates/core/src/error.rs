use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("image has no occupied voxels")]
    EmptyImage,

    #[error("voxel {coords:?} is outside grid of shape {shape:?}")]
    OutOfBounds {
        coords: Vec<usize>,
        shape: Vec<usize>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("axis {axis} has a zero-width range [{value}, {value}]")]
    DegenerateAxis { axis: usize, value: f64 },

    #[error("grid of {cells} cells exceeds the cell budget of {budget}")]
    DimensionTooLarge { cells: u128, budget: u64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("empty input")]
    EmptyInput,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A malformed cell in tabular input. `row` is 1-based over data rows.
    #[error("row {row}, column '{column}': {message}")]
    Data {
        row: usize,
        column: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
