use std::collections::BTreeMap;

use super::{characteristic_matrix, verify_equitable, EpOptions, Partition};
use crate::error::{Error, Result};
use crate::graph::{BlockWeight, Direction, MatrixWeightedGraph};
use crate::linalg::{rank, BlockMatrix};

/// Graph on the cells of an equitable partition; edge `(i, j)`, `i ≠ j`,
/// carries `d(V_i, V_j)` and is present iff that block is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    k: usize,
    d: usize,
    weights: BTreeMap<(usize, usize), BlockWeight>,
}

impl QuotientGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&BlockWeight> {
        self.weights.get(&(i, j))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &BlockWeight)> {
        self.weights.iter().map(|(&(i, j), w)| (i, j, w))
    }
}

/// Builds `G/π`. Refuses partitions that are not equitable, since the cell
/// degree is then not well defined.
pub fn quotient(
    g: &MatrixWeightedGraph,
    partition: &Partition,
    options: &EpOptions,
) -> Result<QuotientGraph> {
    let report = verify_equitable(g, partition, options)?;
    if !report.verdict {
        return Err(Error::NotEquitable {
            violations: report.violations.len(),
        });
    }
    let source = match options.direction {
        Direction::Out => g.clone(),
        Direction::In => g.reversed(),
    };
    let mut weights = BTreeMap::new();
    for i in 0..partition.len() {
        let representative = partition.cell(i)[0];
        for j in 0..partition.len() {
            if i == j {
                continue;
            }
            let w = source.cell_degree(representative, partition.cell(j))?;
            if !w.is_zero() {
                weights.insert((i, j), w);
            }
        }
    }
    Ok(QuotientGraph {
        k: partition.len(),
        d: g.d(),
        weights,
    })
}

/// Laplacian of the quotient: off-diagonal `−d(V_i, V_j)`, diagonal the sum of
/// the quotient edge weights leaving cell `i`.
pub fn quotient_laplacian(q: &QuotientGraph) -> BlockMatrix {
    let mut l = BlockMatrix::zeros(q.k, q.k, q.d);
    for (&(i, j), w) in &q.weights {
        l.set_block(i, j, &-w.matrix());
        l.add_to_block(i, i, w.matrix());
    }
    l
}

/// Outcome of checking `L·P = P·L_π` and `L`-invariance of `im(P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftCheck {
    pub identity_holds: bool,
    pub image_invariant: bool,
    /// Block rows of `L·P − P·L_π` that are nonzero.
    pub mismatched_block_rows: Vec<usize>,
}

pub fn check_lift(l: &BlockMatrix, p: &BlockMatrix, l_pi: &BlockMatrix) -> Result<LiftCheck> {
    let (n, k) = (l.block_rows(), l_pi.block_rows());
    let conformable = l.block_cols() == n
        && l_pi.block_cols() == k
        && p.block_rows() == n
        && p.block_cols() == k
        && l.d() == p.d()
        && p.d() == l_pi.d();
    if !conformable {
        return Err(Error::DimensionMismatch {
            context: "lift identity",
            expected: format!("L {n}x{n}, P {n}x{k}, Lπ {k}x{k} blocks of equal d"),
            found: format!(
                "L {}x{}, P {}x{}, Lπ {}x{}",
                l.block_rows(),
                l.block_cols(),
                p.block_rows(),
                p.block_cols(),
                l_pi.block_rows(),
                l_pi.block_cols()
            ),
        });
    }
    let lp = l.matrix().checked_mul(p.matrix())?;
    let pl = p.matrix().checked_mul(l_pi.matrix())?;
    let diff = BlockMatrix::from_matrix(&lp - &pl, l.d())?;
    let mismatched_block_rows: Vec<usize> = (0..n)
        .filter(|&i| (0..k).any(|j| !diff.block(i, j).is_zero()))
        .collect();
    let image_invariant = rank(&p.matrix().hcat(&lp)?) == rank(p.matrix());
    Ok(LiftCheck {
        identity_holds: mismatched_block_rows.is_empty(),
        image_invariant,
        mismatched_block_rows,
    })
}

/// `true` iff `L·P = P·L_π` exactly and `im(P)` is `L`-invariant.
pub fn verify_lift(l: &BlockMatrix, p: &BlockMatrix, l_pi: &BlockMatrix) -> Result<bool> {
    let check = check_lift(l, p, l_pi)?;
    Ok(check.identity_holds && check.image_invariant)
}

/// Runs the whole chain for `g` and `π`: quotient, its Laplacian, the lift check.
pub fn lift_for(g: &MatrixWeightedGraph, partition: &Partition, options: &EpOptions) -> Result<LiftCheck> {
    let q = quotient(g, partition, options)?;
    let p = characteristic_matrix(partition, g.n(), g.d())?;
    check_lift(&g.laplacian(), &p, &quotient_laplacian(&q))
}
