use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by the command-line front end to pick an exit
/// status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numerical => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("design matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("too few points: need at least {needed}, have {have}")]
    TooFewPoints { needed: usize, have: usize },
    #[error("degenerate design: {0}")]
    DegenerateDesign(String),
    #[error("residual variance is zero; the posterior is improper")]
    DegenerateResiduals,
    #[error("posterior precision matrix is singular")]
    SingularPrecision,
    #[error("covariance undefined for nu = {nu} (needs nu > 2)")]
    UndefinedCovariance { nu: f64 },
    #[error("{moment} is undefined: requires {requirement}")]
    UndefinedMoment {
        moment: &'static str,
        requirement: String,
    },
    #[error("operation supports degree 1 only, got degree {0}")]
    UnsupportedDegree(usize),
    #[error("unphysical region (us <= up or us <= 0) at grid indices {indices:?}")]
    UnphysicalRegion { indices: Vec<usize> },
    #[error("{rejected} of {total} sampled curves were unphysical (limit 1%)")]
    ExcessiveRejection { rejected: usize, total: usize },
    #[error("sampled curves share no common volume range")]
    EmptyIntersection,
    #[error("{redraws} rank-deficient resamples for B = {resamples} (limit 1%)")]
    ExcessiveRedraws { redraws: usize, resamples: usize },
    #[error("maximum particle velocity {up} is attained by {count} points")]
    TieBreak { up: f64, count: usize },
    #[error("grid too coarse: boundary cells carry {boundary_mass:e} of the mass")]
    GridTooCoarse { boundary_mass: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) => ErrorClass::Config,
            Error::Parse { .. } | Error::Validation(_) | Error::Io { .. } | Error::TieBreak { .. } => {
                ErrorClass::Data
            }
            _ => ErrorClass::Numerical,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::EmptyInput(_) => "EmptyInput",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::Parse { .. } => "ParseError",
            Error::Validation(_) => "ValidationError",
            Error::RankDeficient(_) => "RankDeficient",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::DegenerateDesign(_) => "DegenerateDesign",
            Error::DegenerateResiduals => "DegenerateResiduals",
            Error::SingularPrecision => "SingularPrecision",
            Error::UndefinedCovariance { .. } => "UndefinedCovariance",
            Error::UndefinedMoment { .. } => "UndefinedMoment",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::UnphysicalRegion { .. } => "UnphysicalRegion",
            Error::ExcessiveRejection { .. } => "ExcessiveRejection",
            Error::EmptyIntersection => "EmptyIntersection",
            Error::ExcessiveRedraws { .. } => "ExcessiveRedraws",
            Error::TieBreak { .. } => "TieBreak",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::Config(_) => "ConfigError",
            Error::Io { .. } => "IoError",
        }
    }
}
