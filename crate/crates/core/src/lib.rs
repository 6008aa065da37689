pub mod ainf;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod graded;
pub mod hochschild;
pub mod linalg;
pub mod linf;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type Gaussian = num_complex::Complex<Rational>;
