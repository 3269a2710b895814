//! Fisher-Rao geometry of Gaussian manifolds, the conformal standard tractor
//! bundle, and numerical conformal holonomy.

pub mod curvature;
pub mod error;
pub mod holonomy;
pub mod jet;
pub mod linalg;
pub mod manifolds;
pub mod numdiff;
pub mod point;
pub mod report;
pub mod tensor;
pub mod tractor;

pub use error::{Error, Result};
pub use point::{Chart, ManifoldId, Point};
pub use tensor::{TensorValue, Valence};
