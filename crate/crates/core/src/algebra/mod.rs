//! Linear algebra over GF(2) and over the integers.

mod gf2;
mod snf;

pub use gf2::{kernel_basis, rank_gf2, solve_gf2, xor_sorted, BitVec, SparseBitMatrix, TaggedEchelon};
pub use snf::{smith_normal_form, IntSparseMatrix};
