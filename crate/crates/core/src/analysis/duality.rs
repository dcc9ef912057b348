use crate::error::{Error, Result};
use crate::graph::{BlockWeight, MatrixWeightedGraph};
use crate::linalg::{rank, BlockMatrix, Matrix};

/// `(Lᵀ, M)`: observability of `(L, M)` is controllability of this pair.
pub fn dual_pair(l: &BlockMatrix, m: &BlockMatrix) -> (BlockMatrix, BlockMatrix) {
    (l.transpose(), m.clone())
}

pub fn is_self_dual(l: &BlockMatrix) -> bool {
    l.matrix() == &l.matrix().transpose()
}

/// `[Mᵀ; MᵀL; …; MᵀL^{N−1}]` with `N = nd`.
pub fn observability_matrix(l: &BlockMatrix, m: &BlockMatrix) -> Result<Matrix> {
    let (lm, mm) = (l.matrix(), m.matrix());
    if lm.rows() != lm.cols() || mm.rows() != lm.rows() {
        return Err(Error::DimensionMismatch {
            context: "observability matrix",
            expected: format!("square L and M with {} rows", lm.rows()),
            found: format!("L {}x{}, M {}x{}", lm.rows(), lm.cols(), mm.rows(), mm.cols()),
        });
    }
    let mut block = mm.transpose();
    let mut out = block.clone();
    for _ in 1..lm.rows() {
        block = block.checked_mul(lm)?;
        out = out.vcat(&block)?;
    }
    Ok(out)
}

pub fn observability_rank(l: &BlockMatrix, m: &BlockMatrix) -> Result<usize> {
    Ok(rank(&observability_matrix(l, m)?))
}

/// A node whose reversed-graph degree differs from the diagonal of `Lᵀ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalMismatch {
    pub node: usize,
    pub reversed: BlockWeight,
    pub transposed: BlockWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversalCheck {
    pub holds: bool,
    pub reversed: MatrixWeightedGraph,
    pub mismatches: Vec<DiagonalMismatch>,
}

/// Reverses every edge and asks whether the reversed Laplacian is exactly
/// `Lᵀ`. Off-diagonal blocks always agree; the diagonals agree iff block
/// out-degree equals block in-degree at every node.
pub fn reversal_check(g: &MatrixWeightedGraph) -> ReversalCheck {
    let reversed = g.reversed();
    let lt = g.laplacian().transpose();
    let lrev = reversed.laplacian();
    let mismatches: Vec<DiagonalMismatch> = (0..g.n())
        .filter_map(|v| {
            let a = lrev.block(v, v);
            let b = lt.block(v, v);
            (a != b).then(|| DiagonalMismatch {
                node: v,
                reversed: BlockWeight::new(a).expect("square"),
                transposed: BlockWeight::new(b).expect("square"),
            })
        })
        .collect();
    debug_assert!(
        mismatches.is_empty() == (lrev == lt),
        "off-diagonal blocks of a reversed Laplacian always match Lᵀ"
    );
    ReversalCheck {
        holds: mismatches.is_empty(),
        reversed,
        mismatches,
    }
}
