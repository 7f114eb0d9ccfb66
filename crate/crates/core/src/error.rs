use thiserror::Error;

use crate::psl2::GroupSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level must be at least 2, got {0}")]
    InvalidLevel(u32),

    #[error("degree must be even and at least 2, got {0}")]
    InvalidDegree(u32),

    #[error("weight must be even and at least 2, got {0}")]
    InvalidWeight(u32),

    #[error("matrix is singular (determinant 0)")]
    SingularMatrix,

    #[error("{system} system is not available for {group}: {reason}")]
    UnsupportedGroup {
        system: &'static str,
        group: GroupSpec,
        reason: &'static str,
    },

    #[error("genus formula is not integral for {group} (12g = {twelve_g})")]
    NonIntegralGenus { group: GroupSpec, twelve_g: i64 },

    #[error("dimension formula produced a negative value {value} for {group} at weight {k}")]
    NegativeDimension { group: GroupSpec, k: u32, value: i64 },

    #[error("malformed reference data: {0}")]
    ReferenceData(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
