//! Matrix-weighted graphs, their Laplacian, and the leader input matrix.
//!
//! Nodes are 0-based in the API. Documents and rendered reports use 1-based
//! indices; conversion happens in [`io`] and the report layer only.

mod io;
mod pattern;

pub use io::{parse_network, to_document, Network};
pub(crate) use io::block_json;
pub use pattern::{Constraint, SignRequirement, WeightPattern};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BlockMatrix, Matrix};

/// A `d × d` block weight.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BlockWeight(Matrix);

impl BlockWeight {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() || m.rows() == 0 {
            return Err(Error::DimensionMismatch {
                context: "block weight",
                expected: "non-empty square block".into(),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        Ok(BlockWeight(m))
    }

    pub fn zero(d: usize) -> Self {
        BlockWeight(Matrix::zeros(d, d))
    }

    pub fn scalar(v: crate::rational::Rational) -> Self {
        let mut m = Matrix::zeros(1, 1);
        m[(0, 0)] = v;
        BlockWeight(m)
    }

    pub fn from_i64(d: usize, values: &[i64]) -> Self {
        BlockWeight(Matrix::from_i64(d, d, values))
    }

    pub fn d(&self) -> usize {
        self.0.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn transpose(&self) -> BlockWeight {
        BlockWeight(self.0.transpose())
    }

    pub fn add(&self, other: &BlockWeight) -> BlockWeight {
        BlockWeight(&self.0 + &other.0)
    }
}

/// How the reverse direction of an undirected edge is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// `A_ji = A_ij`.
    #[default]
    Entrywise,
    /// `A_ji = A_ijᵀ`.
    Transpose,
    /// Directed graph; each listed edge stands alone.
    None,
}

impl Symmetry {
    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Entrywise => "entrywise",
            Symmetry::Transpose => "transpose",
            Symmetry::None => "none",
        }
    }

    pub(crate) fn reverse_of(self, w: &BlockWeight) -> BlockWeight {
        match self {
            Symmetry::Transpose => w.transpose(),
            _ => w.clone(),
        }
    }
}

/// Which weights a node "sees": its own row (out) or, for the dual system,
/// the transposed column (in).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Out,
    In,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixWeightedGraph {
    n: usize,
    d: usize,
    symmetry: Symmetry,
    adjacency: BTreeMap<(usize, usize), BlockWeight>,
    out_neighbors: Vec<Vec<usize>>,
    leaders: Vec<usize>,
}

impl MatrixWeightedGraph {
    /// Builds and validates a graph. For undirected symmetry conventions list
    /// each edge once; its reverse is derived.
    pub fn new(
        n: usize,
        d: usize,
        symmetry: Symmetry,
        edges: impl IntoIterator<Item = (usize, usize, BlockWeight)>,
        leaders: Vec<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        if d == 0 {
            return Err(Error::InvalidGraph("block dimension d must be at least 1".into()));
        }
        let mut adjacency = BTreeMap::new();
        for (i, j, w) in edges {
            check_node(i, n)?;
            check_node(j, n)?;
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", i + 1)));
            }
            if w.d() != d {
                return Err(Error::DimensionMismatch {
                    context: "edge weight",
                    expected: format!("{d}x{d}"),
                    found: format!("{0}x{0}", w.d()),
                });
            }
            if w.is_zero() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({},{}) has an all-zero weight",
                    i + 1,
                    j + 1
                )));
            }
            let mut put = |key: (usize, usize), w: BlockWeight| {
                if adjacency.insert(key, w).is_some() {
                    Err(Error::InvalidGraph(format!(
                        "edge ({},{}) declared twice",
                        key.0 + 1,
                        key.1 + 1
                    )))
                } else {
                    Ok(())
                }
            };
            if symmetry != Symmetry::None {
                put((j, i), symmetry.reverse_of(&w))?;
            }
            put((i, j), w)?;
        }
        check_leaders(&leaders, n)?;
        let mut out_neighbors = vec![Vec::new(); n];
        for &(i, j) in adjacency.keys() {
            out_neighbors[i].push(j);
        }
        Ok(MatrixWeightedGraph {
            n,
            d,
            symmetry,
            adjacency,
            out_neighbors,
            leaders,
        })
    }

    /// Scalar (`d = 1`) convenience constructor with integer weights.
    pub fn scalar(
        n: usize,
        directed: bool,
        edges: &[(usize, usize, i64)],
        leaders: Vec<usize>,
    ) -> Result<Self> {
        let symmetry = if directed {
            Symmetry::None
        } else {
            Symmetry::Entrywise
        };
        Self::new(
            n,
            1,
            symmetry,
            edges
                .iter()
                .map(|&(i, j, w)| (i, j, BlockWeight::from_i64(1, &[w]))),
            leaders,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_directed(&self) -> bool {
        self.symmetry == Symmetry::None
    }

    pub fn leaders(&self) -> &[usize] {
        &self.leaders
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&BlockWeight> {
        self.adjacency.get(&(i, j))
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_neighbors[i]
    }

    /// Every stored directed entry `(i, j) → A_ij`, both directions for undirected graphs.
    pub fn adjacency(&self) -> impl Iterator<Item = (usize, usize, &BlockWeight)> {
        self.adjacency.iter().map(|(&(i, j), w)| (i, j, w))
    }

    /// One entry per declared edge: `i < j` for undirected graphs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &BlockWeight)> {
        let undirected = !self.is_directed();
        self.adjacency()
            .filter(move |&(i, j, _)| !undirected || i < j)
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// `d_i = Σ_{j ∈ N_i} A_ij`.
    pub fn degree(&self, i: usize) -> Result<BlockWeight> {
        check_node(i, self.n)?;
        Ok(self.sum_row(i, |_| true))
    }

    /// `d(v_i, Q) = Σ_{j ∈ Q} A_ij`; the zero block when no neighbor of `i` lies in `Q`.
    pub fn cell_degree(&self, i: usize, cell: &[usize]) -> Result<BlockWeight> {
        check_node(i, self.n)?;
        for &q in cell {
            check_node(q, self.n)?;
        }
        Ok(self.sum_row(i, |j| cell.contains(&j)))
    }

    pub(crate) fn sum_row(&self, i: usize, keep: impl Fn(usize) -> bool) -> BlockWeight {
        let mut acc = Matrix::zeros(self.d, self.d);
        for &j in &self.out_neighbors[i] {
            if keep(j) {
                acc = &acc + self.adjacency[&(i, j)].matrix();
            }
        }
        BlockWeight(acc)
    }

    /// Block Laplacian `L = D − A`.
    pub fn laplacian(&self) -> BlockMatrix {
        let mut l = BlockMatrix::zeros(self.n, self.n, self.d);
        for (&(i, j), w) in &self.adjacency {
            l.set_block(i, j, &-w.matrix());
            l.add_to_block(i, i, w.matrix());
        }
        l
    }

    /// Leader input matrix `M` (`nd × md`).
    pub fn input_matrix(&self) -> BlockMatrix {
        build_input_matrix(&self.leaders, self.n, self.d).expect("leaders validated at construction")
    }

    /// Edge-reversed directed graph with `A_rev(j,i) = A(i,j)ᵀ`, whose
    /// off-diagonal Laplacian blocks are those of `Lᵀ`.
    pub fn reversed(&self) -> MatrixWeightedGraph {
        MatrixWeightedGraph::new(
            self.n,
            self.d,
            Symmetry::None,
            self.adjacency().map(|(i, j, w)| (j, i, w.transpose())),
            self.leaders.clone(),
        )
        .expect("reversal preserves validity")
    }

    /// Same weights, different leader set.
    pub fn with_leaders(&self, leaders: Vec<usize>) -> Result<Self> {
        check_leaders(&leaders, self.n)?;
        Ok(MatrixWeightedGraph {
            leaders,
            ..self.clone()
        })
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "relabeling",
                expected: self.n.to_string(),
                found: perm.len().to_string(),
            });
        }
        MatrixWeightedGraph::new(
            self.n,
            self.d,
            Symmetry::None,
            self.adjacency().map(|(i, j, w)| (perm[i], perm[j], w.clone())),
            self.leaders.iter().map(|&l| perm[l]).collect(),
        )
        .map(|g| MatrixWeightedGraph {
            symmetry: self.symmetry,
            ..g
        })
    }
}

/// `M` with the identity at block row `leaders[l]` of block column `l`.
pub fn build_input_matrix(leaders: &[usize], n: usize, d: usize) -> Result<BlockMatrix> {
    if leaders.is_empty() {
        return Err(Error::EmptyLeaders);
    }
    check_leaders(leaders, n)?;
    let mut m = BlockMatrix::zeros(n, leaders.len(), d);
    let eye = Matrix::identity(d);
    for (col, &leader) in leaders.iter().enumerate() {
        m.set_block(leader, col, &eye);
    }
    Ok(m)
}

pub(crate) fn check_node(i: usize, n: usize) -> Result<()> {
    if i >= n {
        Err(Error::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

fn check_leaders(leaders: &[usize], n: usize) -> Result<()> {
    if leaders.is_empty() {
        return Err(Error::EmptyLeaders);
    }
    let mut seen = vec![false; n];
    for &l in leaders {
        check_node(l, n)?;
        if std::mem::replace(&mut seen[l], true) {
            return Err(Error::InvalidGraph(format!("leader {} listed twice", l + 1)));
        }
    }
    Ok(())
}
