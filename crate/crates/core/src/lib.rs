//! Block Toeplitz and Hankel operators whose symbols are matrix
//! trigonometric polynomials, with compactness criteria for their products
//! and constructive certificates for vanishing Hankel-product sums.

pub mod criteria;
pub mod decompose;
pub mod error;
pub mod generate;
pub mod hardy;
pub mod io;
pub mod linalg;
pub mod symbol;

pub use error::{Error, Result};
pub use symbol::{DiskPoint, MatrixSymbol, SplitSymbol};
