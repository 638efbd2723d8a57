//! Truncated tensor algebras, signatures of paths and rough paths.

pub mod arens_eells;
pub mod error;
pub mod grouplike;
pub mod norms;
pub mod rough_path;
pub mod tensor;
pub mod transport;
pub mod uat;
pub mod words;

pub use error::{Error, Result};
pub use tensor::{GroupElement, Permutation, TensorShape, TruncatedTensor};
pub use words::{LinearFunctional, Word};
