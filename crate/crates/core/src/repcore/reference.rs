//! Reference values for S₄ and the k = 2 bipartite tables.
//!
//! These are stored verbatim, errors included, so reports can compare the
//! computed tables against them entry by entry. Nothing in the library
//! consumes them as ground truth.

/// Column labels (cycle types) of the reference character table.
pub const S4_CLASSES: [&[usize]; 5] = [&[1, 1, 1, 1], &[2, 1, 1], &[2, 2], &[3, 1], &[4]];

/// Rows of the reference S₄ character table.
pub const S4_CHARACTERS: [(&[usize], [i64; 5]); 5] = [
    (&[4], [1, 1, 1, 1, 1]),
    (&[1, 1, 1, 1], [1, -1, 1, -1, 1]),
    (&[2, 2], [2, 0, 2, -1, 0]),
    (&[2, 1, 1], [3, 1, -1, 0, -1]),
    (&[3, 1], [3, -1, -1, 0, 1]),
];

/// Reference nonzero branching multiplicities S₄ → S₂ × S₂ as
/// (μ, λ, λ', B). λ = [2] is the trivial and [1, 1] the sign irreducible.
pub const S4_BRANCHING: [(&[usize], &[usize], &[usize], u64); 10] = [
    (&[4], &[2], &[2], 1),
    (&[1, 1, 1, 1], &[1, 1], &[1, 1], 1),
    (&[2, 2], &[2], &[2], 1),
    (&[2, 2], &[1, 1], &[1, 1], 1),
    (&[3, 1], &[1, 1], &[1, 1], 1),
    (&[3, 1], &[2], &[1, 1], 1),
    (&[3, 1], &[1, 1], &[2], 1),
    (&[2, 1, 1], &[2], &[2], 1),
    (&[2, 1, 1], &[2], &[1, 1], 1),
    (&[2, 1, 1], &[1, 1], &[2], 1),
];

/// Reference nonzero S₂ Kronecker coefficients (λ, λ', μ, c).
pub const S2_KRONECKER: [(&[usize], &[usize], &[usize], u64); 3] =
    [(&[2], &[2], &[2], 1), (&[2], &[1, 1], &[1, 1], 1), (&[1, 1], &[1, 1], &[2], 1)];

/// Reference k = 2 bipartite coefficients (μ, μ', C).
pub const BIPARTITE_C: [(&[usize], &[usize], u64); 7] = [
    (&[4], &[2], 1),
    (&[1, 1, 1, 1], &[2], 1),
    (&[2, 2], &[2], 1),
    (&[2, 1, 1], &[2], 1),
    (&[2, 1, 1], &[1, 1], 2),
    (&[3, 1], &[2], 1),
    (&[3, 1], &[1, 1], 2),
];

/// Reference parameter counts for k = 2: complex commutant and real
/// Hermitian family dimensions.
pub const BIPARTITE_COMPLEX_DIM: usize = 16;
pub const BIPARTITE_HERMITIAN_DIM: usize = 13;
