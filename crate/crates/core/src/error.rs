use std::fmt;

use crate::fusion::Defect;

/// Everything that can go wrong in the library, tagged by the module that raised it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid fusion data: {}", DefectList(.0))]
    InvalidFusion(Vec<Defect>),

    #[error("series constant term must be 1, found {0}")]
    NonUnitConstant(String),
    #[error("requested {requested} terms but the series is truncated at order {order}")]
    TruncationExceeded { requested: usize, order: usize },
    #[error("skeleton length must be at least 1, got {0}")]
    ZeroLength(usize),
    #[error("spectral profile has {profile} sectors but fusion data has {data}")]
    ProfileMismatch { profile: usize, data: usize },

    #[error("power iteration did not converge within {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("path enumeration exceeds the resource cap: {0}")]
    ResourceCap(String),
    #[error("element is not gauge-homogeneous (degrees {0} and {1} both present)")]
    NotHomogeneous(i64, i64),
    #[error("elements belong to different fusion graphs")]
    MismatchedModel,
    #[error("path does not fit the fusion graph: {0}")]
    BadPath(String),

    #[error("character table is invalid: {0}")]
    InvalidCharacterTable(String),
    #[error("multiplicity {value} is not within {tolerance:e} of a non-negative integer")]
    NonIntegral { value: f64, tolerance: f64 },

    #[error("input error: {0}")]
    Input(String),
    #[error("unknown catalog entry `{name}`; available: {available}")]
    UnknownCatalog { name: String, available: String },
}

impl Error {
    /// The module an error originates from, used as provenance in reports.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidFusion(_) => "fusion-core",
            Error::NonUnitConstant(_)
            | Error::TruncationExceeded { .. }
            | Error::ZeroLength(_)
            | Error::ProfileMismatch { .. } => "series",
            Error::NonConvergence { .. } => "spectral",
            Error::ResourceCap(_)
            | Error::NotHomogeneous(..)
            | Error::MismatchedModel
            | Error::BadPath(_) => "pathalg",
            Error::InvalidCharacterTable(_) | Error::NonIntegral { .. } => "groups",
            Error::Input(_) | Error::UnknownCatalog { .. } => "cli",
        }
    }
}

struct DefectList<'a>(&'a [Defect]);

impl fmt::Display for DefectList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
