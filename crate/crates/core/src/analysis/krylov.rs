use crate::error::{Error, Result};
use crate::linalg::{singular_value_rank, BlockMatrix, Echelon, Matrix, RankBackend};
use crate::rational::Rational;

/// Basis of `⟨L | M⟩ = im M + L·im M + L²·im M + …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllableSubspace {
    basis: Matrix,
}

impl ControllableSubspace {
    /// Basis vectors as columns.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let column = Matrix::from_columns(v.len(), &[v.to_vec()]);
        crate::linalg::subspace_contains(&self.basis, &column)
    }
}

fn check_pair(l: &Matrix, m: &Matrix) -> Result<()> {
    if l.rows() != l.cols() {
        return Err(Error::DimensionMismatch {
            context: "state matrix",
            expected: "square".into(),
            found: format!("{}x{}", l.rows(), l.cols()),
        });
    }
    if m.rows() != l.rows() {
        return Err(Error::DimensionMismatch {
            context: "input matrix",
            expected: format!("{} rows", l.rows()),
            found: format!("{} rows", m.rows()),
        });
    }
    Ok(())
}

/// Krylov basis grown from the columns of `M`, applying `L` only to the
/// vectors that were new in the previous round; stops as soon as a round adds
/// nothing.
pub fn controllable_subspace(l: &BlockMatrix, m: &BlockMatrix) -> Result<ControllableSubspace> {
    krylov(l.matrix(), m.matrix())
}

pub(crate) fn krylov(l: &Matrix, m: &Matrix) -> Result<ControllableSubspace> {
    check_pair(l, m)?;
    let size = l.rows();
    let mut echelon = Echelon::new(size);
    let mut basis = Vec::new();
    let mut frontier = Vec::new();
    for col in m.columns() {
        if echelon.insert(&col) {
            let col = normalized(&col);
            basis.push(col.clone());
            frontier.push(col);
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            let w = l.mul_vec(v);
            if echelon.insert(&w) {
                let w = normalized(&w);
                basis.push(w.clone());
                next.push(w);
            }
        }
        frontier = next;
    }
    Ok(ControllableSubspace {
        basis: Matrix::from_columns(size, &basis),
    })
}

/// Same direction, primitive integer entries; keeps powers of `L` from
/// accumulating denominators.
fn normalized(v: &[Rational]) -> Vec<Rational> {
    crate::linalg::primitive_rational(v)
}

pub fn is_controllable(l: &BlockMatrix, m: &BlockMatrix) -> Result<bool> {
    Ok(controllable_subspace(l, m)?.dim() == l.matrix().rows())
}

/// Dimension of `⟨L | M⟩` under the chosen rank backend. The float path grows
/// whole blocks `Lᵏ M` and stops when the numerical rank stalls.
pub fn controllable_dimension(l: &BlockMatrix, m: &BlockMatrix, backend: RankBackend) -> Result<usize> {
    match backend {
        RankBackend::Exact => Ok(controllable_subspace(l, m)?.dim()),
        RankBackend::Float => {
            check_pair(l.matrix(), m.matrix())?;
            let lf = l.matrix().to_f64();
            let mut block = m.matrix().to_f64();
            let mut stacked = block.clone();
            let mut current = singular_value_rank(&stacked);
            loop {
                block = &lf * &block;
                let widened = concat_columns(&stacked, &block);
                let r = singular_value_rank(&widened);
                if r == current {
                    return Ok(current);
                }
                stacked = widened;
                current = r;
            }
        }
    }
}

fn concat_columns(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> nalgebra::DMatrix<f64> {
    let mut out = nalgebra::DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// `[M  LM  L²M  …  L^{N−1}M]` with `N = nd`, fully materialized.
pub fn controllability_matrix(l: &BlockMatrix, m: &BlockMatrix) -> Result<Matrix> {
    check_pair(l.matrix(), m.matrix())?;
    let mut block = m.matrix().clone();
    let mut out = block.clone();
    for _ in 1..l.matrix().rows() {
        block = l.matrix().checked_mul(&block)?;
        out = out.hcat(&block)?;
    }
    Ok(out)
}
