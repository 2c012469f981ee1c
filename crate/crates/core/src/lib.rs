//! Combinatorial, spectral and state-theoretic invariants of generalized
//! Cuntz algebras built from fusion data.
//!
//! Input is a set of sectors, a distinguished sector ι and the non-negative
//! integer matrix of right multiplication by ρ. From it the crate computes the
//! dimension series of intertwiner and skeleton spaces, the Perron–Frobenius
//! data, the exceptional/generic split, and the KMS state on a path-model
//! realization of the algebra.

pub mod catalog;
pub mod error;
pub mod fusion;
pub mod groups;
pub mod input;
pub mod intmat;
pub mod pathalg;
pub mod report;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use fusion::{FusionData, QuantumDimensions, ReducedFusion, SectorLabel};
pub use series::{RationalSeries, SkeletonDim};
pub use spectral::{Classification, SpectralProfile};
