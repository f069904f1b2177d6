pub mod commutant;
pub mod ensembles;
mod error;
pub mod hc;
pub mod perm;
pub mod repcore;
pub mod seed;
pub mod spectra;
pub mod tensor;

pub use commutant::{ConstraintSet, InvariantFamily, PrecisionForm};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use repcore::{CharacterTable, CycleType, Partition};
pub use tensor::{HermitianBasis, SchmidtDecomposition, TensorOperator};

pub use num_complex::Complex64 as C64;

pub type CMat = nalgebra::DMatrix<C64>;
pub type CVec = nalgebra::DVector<C64>;
pub type RMat = nalgebra::DMatrix<f64>;
pub type RVec = nalgebra::DVector<f64>;
