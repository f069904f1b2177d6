//! The space of precision matrices allowed by k-fold unitary invariance,
//! diagonal permutation symmetry and the half swap.
//!
//! Invariance of the quadratic form vec(H)†Δvec(H) under H → U^{⊗k}H(U^{⊗k})†
//! means Δ commutes with Ū^{⊗k} ⊗ U^{⊗k} on the column-stacked vectorization.
//! That commutant is spanned by the permutation operators Ŝ_π (π ∈ S_{2k})
//! partially transposed on one block of k legs. The remaining constraints are
//! imposed by exact averaging over the finite group they generate: the
//! diagonal permutations act as H → Ŝ_σHŜ_σ† (legs σ⊕σ), and the half swap
//! exchanges the two blocks of legs, which on matrices is H → Hᵀ.
//!
//! Real-symmetric forms on Hermitian coordinates are read off from the
//! complex span as M(X)_ab = Re(e_a†Xe_b) for X and iX.

mod audit;
mod blocks;
mod family;
mod precision;
mod schur_weyl;
pub mod sparse;

pub use audit::{audit_subsets, dimension_audit, AuditReport, AuditRow, ReferenceDims, SubsetDims, UnmixedDims};
pub use blocks::{block_decompose, BlockStructure, Sector, CLUSTER_TOL};
pub use family::{
    mixed_commutant_basis, mixed_commutant_sparse, symmetrized_family, unmixed_commutant_rank, ConstraintSet,
    InvariantFamily, PermutationSign, MAX_VEC_DIM,
};
pub use precision::{build_precision, commutation_defect, generic_precision, CommutationDefect, PrecisionForm};
pub use schur_weyl::{schur_weyl_residual, SchurWeylCheck};
pub use sparse::{SpanRank, SparseOp, RANK_CUTOFF};
