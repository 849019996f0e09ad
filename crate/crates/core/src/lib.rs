pub mod degen;
pub mod catalog;
pub mod deform;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod scalar;

pub use catalog::Fixture;
pub use deform::{BilinearForm, DeformationCurve};
pub use degen::{DegenerationCertificate, WitnessFamily};
pub use error::{Error, ErrorKind, Result};
pub use scalar::{parse_scalar, Poly, Rational, Scalar, Symbols};
pub use lie::{Grading, LieAlgebra, SeriesKind, StructureTable, Subspace};
pub use linalg::{LinearMap, UniPoly, Vector};
