//! Numerics for weight sequences, weight functions and weight matrices, and
//! stability checks for ultraholomorphic classes on sectors.

pub mod analytic;
pub mod config;
pub mod error;
pub mod indices;
pub mod matrices;
pub mod report;
pub mod sequences;
pub mod stability;
pub mod weights;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use matrices::{MatrixCondition, MatrixConditionReport, MatrixSpec, WeightMatrix};
pub use report::{Condition, ConditionReport, TracePoint, Verdict};
pub use sequences::{make_sequence, SequenceSpec, WeightSequence};
pub use weights::{OmegaSpec, WeightFunction};
pub use analytic::{Estimate, Jet, SectorPoint};
pub use indices::IndexEstimate;
pub use stability::{StabilityClass, StabilityVerdict};
