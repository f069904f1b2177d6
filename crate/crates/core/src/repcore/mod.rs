//! Exact combinatorics of the symmetric group and of polynomial U(d)
//! irreducibles.
//!
//! All arithmetic is integer and checked; no floating point is used here.
//! The multiplicity of an S_k irreducible λ in the permutation action on
//! (C^d)^{⊗k} is computed with the exponent d^{cycles(σ)} (the number of
//! cycles, not of fixed points) and the 1/k! normalization of the character
//! inner product; with those two ingredients it reproduces the U(d)
//! dimensions d(d+1)/2 and d(d-1)/2 at k = 2.

mod character;
mod coefficients;
mod exact;
mod partition;
pub mod reference;

pub use character::{character, character_on_cycles, conjugacy_classes, hook_dimension, CharacterTable, CycleType};
pub use coefficients::{
    branching, c_coefficients, kronecker, perm_rep_multiplicity, signed_c_coefficients, sk_dimension,
    unitary_irrep_dim, BranchingEntry, CEntry, CTable, SwapSign,
};
pub use exact::factorial;
pub use partition::{enumerate_partitions, Partition};
