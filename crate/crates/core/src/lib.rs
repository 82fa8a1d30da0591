pub mod bailey;
pub mod cutoff;
pub mod dsl;
pub mod error;
pub mod partitions;
pub mod qdiff;
pub mod report;
pub mod series;
pub mod term;

pub use error::{Error, Result};
pub use report::{Checker, Divergence, Status, VerificationReport};
pub use series::{
    AValue, Difference, HalfExponent, Length, LinearFactor, Orders, PochhammerSpec, Poly,
    TruncatedSeries,
};
