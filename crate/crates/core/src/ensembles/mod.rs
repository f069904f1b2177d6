//! Random-matrix ensembles and the lattice models used as examples of
//! k-fold invariant Hamiltonians.

mod gaussian;
mod invariance;
mod quantum_double;
mod spec;
mod spin;
mod unitary_double;

pub use gaussian::{
    haar_unitary, power_fold, sample_goe, sample_gue, sample_kfold, sample_power_fold, sample_tensor_product,
};
pub use invariance::{
    covariance_invariance_streaming, covariance_invariance_test, CovarianceInvariance, INVARIANCE_FACTOR,
    MAX_INVARIANCE_RANK,
};
pub use quantum_double::{quantum_double, FiniteGroup, GaugeRelabel, QuantumDouble, Torus};
pub use spec::{EnsembleSpec, PrecisionSpec, SampleBatch, Sampler};
pub use spin::{
    haar_orthogonal3, heisenberg_with_fields, o3_with_couplings, sample_heisenberg, sample_o3, spin_one_cartesian,
    total_spin_half, Graph, O3Coupling, MAX_HEISENBERG_SITES, MAX_O3_SITES,
};
pub use unitary_double::{
    transposed_swap, unitary_double_first_moment, UnitaryDoubleFit, MAX_UNITARY_DOUBLE_DIM, MIN_UNITARY_DOUBLE_SAMPLES,
};
