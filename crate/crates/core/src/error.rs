use thiserror::Error;

/// Errors surfaced by geometric constructions and verifications.
#[derive(Debug, Error)]
pub enum Error {
    #[error("the point at infinity has no horospherical or Siegel coordinates")]
    InfinityPoint,
    #[error("operation requires an interior point, got a boundary point (self-pairing {pairing})")]
    BoundaryPoint { pairing: f64 },
    #[error("operation requires a boundary point, got self-pairing {pairing}")]
    NotOnBoundary { pairing: f64 },
    #[error("matrix does not preserve the Hermitian form: residual {residual}")]
    NotUnitary { residual: f64 },
    #[error("matrix is not unimodular: |det - 1| = {defect}")]
    NonUnimodular { defect: f64 },
    #[error("numerically degenerate pairing; cannot phase-align lifts")]
    DegeneratePairing,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("fundamental domain did not close at word depth {depth}; increase the search depth")]
    FordDepth { depth: usize },
    #[error("no separation offset below {t_max} reached the requested margin {margin}")]
    Separation { t_max: f64, margin: f64 },
    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),
    #[error("word parse error: {0}")]
    WordParse(String),
    #[error("mesh is degenerate: {0}")]
    Mesh(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("section has not been built for this representation")]
    SectionMissing,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
