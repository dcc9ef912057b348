//! Dense exact linear algebra over the rationals.

mod matrix;
mod rank;
mod solve;

pub use matrix::{BlockMatrix, Matrix};
pub use rank::{
    bareiss_rank, float_rank, rank, rank_with, singular_value_rank, spans_equal, subspace_contains, Echelon,
    RankBackend, FLOAT_RELATIVE_THRESHOLD,
};
pub(crate) use rank::primitive_rational;
pub use solve::{solve_affine, AffineSpace};
