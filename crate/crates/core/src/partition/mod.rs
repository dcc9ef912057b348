//! Node partitions, characteristic matrices, equitable partitions and quotients.

mod equitable;
mod quotient;

pub use equitable::{coarsest_ep, verify_equitable, EpOptions, EpReport, EpViolation};
pub use quotient::{check_lift, lift_for, quotient, quotient_laplacian, verify_lift, LiftCheck, QuotientGraph};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{BlockMatrix, Matrix};

/// Disjoint nonempty cells covering `0..n`, in canonical order: members
/// ascending, cells ordered by their least member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    pub fn new(cells: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut owner = vec![None; n];
        for (c, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::NotAPartition(format!("cell {} is empty", c + 1)));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::NotAPartition(format!(
                        "node {} is outside 1..={n}",
                        v + 1
                    )));
                }
                if let Some(prev) = owner[v].replace(c) {
                    return Err(Error::NotAPartition(format!(
                        "node {} appears in cells {} and {}",
                        v + 1,
                        prev + 1,
                        c + 1
                    )));
                }
            }
        }
        if let Some(v) = owner.iter().position(Option::is_none) {
            return Err(Error::NotAPartition(format!("node {} is not covered", v + 1)));
        }
        let labels: Vec<usize> = owner.into_iter().map(|o| o.unwrap()).collect();
        Ok(Self::from_labels(&labels))
    }

    /// Groups nodes with equal labels.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Self {
        let mut groups: BTreeMap<L, Vec<usize>> = BTreeMap::new();
        for (v, l) in labels.iter().enumerate() {
            groups.entry(l.clone()).or_default().push(v);
        }
        let mut cells: Vec<Vec<usize>> = groups.into_values().collect();
        cells.sort_by_key(|c| c[0]);
        let mut cell_of = vec![0; labels.len()];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        Partition { cells, cell_of }
    }

    /// 1-based cells as used in documents and on the command line.
    pub fn from_one_based(cells: &[Vec<usize>], n: usize) -> Result<Self> {
        let zero_based = cells
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|&v| {
                        v.checked_sub(1)
                            .ok_or_else(|| Error::NotAPartition("node indices are 1-based".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based, n)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|c| c.iter().map(|v| v + 1).collect())
            .collect()
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn single_cell(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.cell_of.len()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.n()
    }

    /// Every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n() == coarser.n()
            && self
                .cells
                .iter()
                .all(|c| c.iter().all(|&v| coarser.cell_of(v) == coarser.cell_of(c[0])))
    }

    /// Image under the node relabeling `v ↦ perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Partition {
        let mut labels = vec![0; self.n()];
        for v in 0..self.n() {
            labels[perm[v]] = self.cell_of[v];
        }
        Partition::from_labels(&labels)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cells: Vec<String> = self
            .to_one_based()
            .iter()
            .map(|c| {
                let members: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        write!(f, "{{{}}}", cells.join(","))
    }
}

/// Block 0/I incidence matrix `P` (`nd × kd`): identity at `(v, c)` iff `v ∈ V_c`.
pub fn characteristic_matrix(partition: &Partition, n: usize, d: usize) -> Result<BlockMatrix> {
    if partition.n() != n {
        return Err(Error::NotAPartition(format!(
            "partition covers {} nodes, expected {n}",
            partition.n()
        )));
    }
    let mut p = BlockMatrix::zeros(n, partition.len(), d);
    let eye = Matrix::identity(d);
    for v in 0..n {
        p.set_block(v, partition.cell_of(v), &eye);
    }
    Ok(p)
}
