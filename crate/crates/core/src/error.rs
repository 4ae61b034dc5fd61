use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cell {axis} index {index} out of range for theta {theta} (limit {limit})")]
    CellIndexOutOfRange {
        axis: char,
        index: u64,
        theta: u32,
        limit: u64,
    },

    #[error("cell id {id} out of range for theta {theta}")]
    CellIdOutOfRange { id: u64, theta: u32 },

    #[error("invalid grid configuration: {0}")]
    InvalidGrid(String),

    #[error("dataset {0:?} has no points")]
    EmptyDataset(String),

    #[error("point {index} ({x}, {y}) of dataset {dataset:?} lies outside the bounding space")]
    PointOutOfBounds {
        dataset: String,
        index: usize,
        x: f64,
        y: f64,
    },

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("duplicate dataset id {0:?}")]
    DuplicateDataset(String),

    #[error("catalog is empty")]
    EmptyCatalog,

    #[error("invalid price: {0}")]
    InvalidPrice(String),

    #[error("configuration mismatch: {0}")]
    Mismatch(String),

    #[error("catalog has {size} datasets, above the exact-oracle cap of {cap}")]
    OracleCapExceeded { size: usize, cap: usize },

    #[error("universe of {0} elements does not fit any grid with theta <= 31")]
    UniverseTooLarge(u64),

    #[error("malformed catalog: {0}")]
    Format(String),
}
