//! Exact symbolic computations with holomorphic bundles on the total space
//! of O(-k) over the projective line.

pub mod birkhoff;
pub mod bundle;
pub mod cli;
pub mod error;
pub mod format;
pub mod jet;
pub mod laurent;
pub mod matrix;
pub mod normal_form;
pub mod random;
pub mod scalar;
pub mod sections;

pub use bundle::{GaugeTransform, SplittingType, TransitionMatrix};
pub use error::{Error, Result};
pub use jet::UJet;
pub use laurent::LaurentPoly;
pub use matrix::Mat;
pub use scalar::Scalar;
