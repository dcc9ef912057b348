//! Independent reference implementations and random generators shared by the
//! integration tests. Nothing here calls the library's rank, Krylov,
//! refinement or enumeration code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssc_core::graph::{BlockWeight, MatrixWeightedGraph, Symmetry, WeightPattern};
use ssc_core::linalg::Matrix;
use ssc_core::partition::Partition;

pub type Q = BigRational;
pub type Dense = Vec<Vec<Q>>;

pub fn q(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense(m: &Matrix) -> Dense {
    m.to_rows()
}

pub fn zeros(rows: usize, cols: usize) -> Dense {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Dense) -> Dense {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn hcat(a: &Dense, b: &Dense) -> Dense {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.iter().chain(y).cloned().collect()).collect()
}

/// Plain Gauss-Jordan elimination over the rationals.
pub fn naive_rank(mut m: Dense) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &pivot;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of `[M, LM, …, L^{N−1}M]` built power by power.
pub fn materialized_rank(l: &Dense, m: &Dense) -> usize {
    let mut block = m.clone();
    let mut all = m.clone();
    for _ in 1..l.len() {
        block = mul(l, &block);
        all = hcat(&all, &block);
    }
    naive_rank(all)
}

/// Rank of `[Mᵀ; MᵀL; …; MᵀL^{N−1}]`.
pub fn observability_rank_oracle(l: &Dense, m: &Dense) -> usize {
    let mut block = transpose(m);
    let mut all = block.clone();
    for _ in 1..l.len() {
        block = mul(&block, l);
        all.extend(block.iter().cloned());
    }
    naive_rank(all)
}

/// Column spaces of `a` and `b` coincide.
pub fn same_span(a: &Dense, b: &Dense) -> bool {
    let ra = naive_rank(a.clone());
    let rb = naive_rank(b.clone());
    let joint = naive_rank(hcat(a, b));
    ra == joint && rb == joint
}

/// Every set partition of `0..n` as a list of cells, by inserting each element
/// into an existing cell or a new one.
pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(v: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if v == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..cur.len() {
            cur[c].push(v);
            go(v + 1, n, cur, out);
            cur[c].pop();
        }
        cur.push(vec![v]);
        go(v + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

pub fn canonical(mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    cells.iter_mut().for_each(|c| c.sort_unstable());
    cells.retain(|c| !c.is_empty());
    cells.sort();
    cells
}

/// Partitions of all `n` nodes in which each leader is a singleton.
pub fn leader_partitions(n: usize, leaders: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let followers: Vec<usize> = (0..n).filter(|v| !leaders.contains(v)).collect();
    all_partitions(followers.len())
        .into_iter()
        .map(|p| {
            let mut cells: Vec<Vec<usize>> =
                p.into_iter().map(|c| c.into_iter().map(|i| followers[i]).collect()).collect();
            cells.extend(leaders.iter().map(|&l| vec![l]));
            canonical(cells)
        })
        .collect()
}

/// Dense `d × d` adjacency blocks, `None` where there is no edge.
pub fn adjacency_blocks(g: &MatrixWeightedGraph) -> Vec<Vec<Option<Dense>>> {
    (0..g.n())
        .map(|i| (0..g.n()).map(|j| g.weight(i, j).map(|w| dense(w.matrix()))).collect())
        .collect()
}

pub fn oracle_laplacian(g: &MatrixWeightedGraph) -> Dense {
    let (n, d) = (g.n(), g.d());
    let blocks = adjacency_blocks(g);
    let mut l = zeros(n * d, n * d);
    for i in 0..n {
        for j in 0..n {
            if let Some(w) = &blocks[i][j] {
                for a in 0..d {
                    for b in 0..d {
                        l[i * d + a][j * d + b] -= &w[a][b];
                        l[i * d + a][i * d + b] += &w[a][b];
                    }
                }
            }
        }
    }
    l
}

pub fn oracle_input(n: usize, d: usize, leaders: &[usize]) -> Dense {
    let mut m = zeros(n * d, leaders.len() * d);
    for (c, &l) in leaders.iter().enumerate() {
        for a in 0..d {
            m[l * d + a][c * d + a] = Q::one();
        }
    }
    m
}

pub fn oracle_characteristic(cells: &[Vec<usize>], n: usize, d: usize) -> Dense {
    let mut p = zeros(n * d, cells.len() * d);
    for (c, cell) in cells.iter().enumerate() {
        for &v in cell {
            for a in 0..d {
                p[v * d + a][c * d + a] = Q::one();
            }
        }
    }
    p
}

/// Direct check: same-cell nodes have equal block sums into every cell.
pub fn oracle_equitable(g: &MatrixWeightedGraph, cells: &[Vec<usize>]) -> bool {
    let d = g.d();
    let blocks = adjacency_blocks(g);
    let sum_into = |r: usize, cell: &[usize]| {
        let mut s = zeros(d, d);
        for &t in cell {
            if let Some(w) = &blocks[r][t] {
                for a in 0..d {
                    for b in 0..d {
                        s[a][b] += &w[a][b];
                    }
                }
            }
        }
        s
    };
    cells.iter().all(|cell| {
        cells
            .iter()
            .all(|target| cell.iter().all(|&r| sum_into(r, target) == sum_into(cell[0], target)))
    })
}

/// Symbolic feasibility of the equitability equations of an unconstrained
/// pattern: an edge is lost when each of its coordinates lies in the row
/// space of the equations.
pub fn oracle_feasible(p: &WeightPattern, cells: &[Vec<usize>]) -> bool {
    assert!(p.constraints().is_empty(), "oracle handles unconstrained patterns only");
    let d = p.d();
    let vars = p.edges().len() * d * d;
    let var = |r: usize, t: usize, a: usize, b: usize| -> Option<usize> {
        for (e, &(i, j)) in p.edges().iter().enumerate() {
            let base = e * d * d;
            if (i, j) == (r, t) {
                return Some(base + a * d + b);
            }
            if (i, j) == (t, r) {
                match p.symmetry() {
                    Symmetry::Entrywise => return Some(base + a * d + b),
                    Symmetry::Transpose => return Some(base + b * d + a),
                    Symmetry::None => {}
                }
            }
        }
        None
    };
    let mut equations: Dense = Vec::new();
    for cell in cells {
        for &s in &cell[1..] {
            let r = cell[0];
            for target in cells {
                for a in 0..d {
                    for b in 0..d {
                        let mut row = vec![Q::zero(); vars];
                        for &t in target {
                            if let Some(k) = var(r, t, a, b) {
                                row[k] += Q::one();
                            }
                            if let Some(k) = var(s, t, a, b) {
                                row[k] -= Q::one();
                            }
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            equations.push(row);
                        }
                    }
                }
            }
        }
    }
    let base_rank = naive_rank(equations.clone());
    (0..p.edges().len()).all(|e| {
        (0..d * d).any(|k| {
            let mut probe = equations.clone();
            let mut unit = vec![Q::zero(); vars];
            unit[e * d * d + k] = Q::one();
            probe.push(unit);
            naive_rank(probe) > base_rank
        })
    })
}

pub fn random_block<R: Rng>(rng: &mut R, d: usize, range: i64) -> BlockWeight {
    loop {
        let values: Vec<i64> = (0..d * d).map(|_| rng.random_range(-range..=range)).collect();
        if values.iter().any(|&v| v != 0) {
            return BlockWeight::from_i64(d, &values);
        }
    }
}

pub fn random_positive_block<R: Rng>(rng: &mut R, d: usize, range: i64) -> BlockWeight {
    let values: Vec<i64> = (0..d * d).map(|_| rng.random_range(1..=range)).collect();
    BlockWeight::from_i64(d, &values)
}

pub fn random_leaders<R: Rng>(rng: &mut R, n: usize, most: usize) -> Vec<usize> {
    let count = rng.random_range(1..=most.min(n));
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    let mut leaders = nodes[..count].to_vec();
    leaders.sort_unstable();
    leaders
}

/// Random graph on `n` nodes; undirected graphs list each edge once.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    d: usize,
    symmetry: Symmetry,
    density: f64,
    range: i64,
    leaders: Vec<usize>,
) -> MatrixWeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let wanted = if symmetry == Symmetry::None { i != j } else { i < j };
            if wanted && rng.random_bool(density) {
                edges.push((i, j, random_block(rng, d, range)));
            }
        }
    }
    MatrixWeightedGraph::new(n, d, symmetry, edges, leaders).expect("generated graphs are valid")
}

pub fn random_pattern<R: Rng>(
    rng: &mut R,
    n: usize,
    d: usize,
    symmetry: Symmetry,
    density: f64,
    leaders: Vec<usize>,
) -> WeightPattern {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let wanted = if symmetry == Symmetry::None { i != j } else { i < j };
            if wanted && rng.random_bool(density) {
                edges.push((i, j));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    WeightPattern::new(n, d, symmetry, edges, None, vec![], leaders).expect("generated patterns are valid")
}

/// Random partition of `0..n` into exactly `k` nonempty cells.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    let mut cells: Vec<Vec<usize>> = nodes[..k].iter().map(|&v| vec![v]).collect();
    for &v in &nodes[k..] {
        let c = rng.random_range(0..k);
        cells[c].push(v);
    }
    canonical(cells)
}

/// A digraph built so that `cells` is equitable: every node of cell `I`
/// sends total weight `targets[I][J]` into cell `J`. Returns the graph and
/// the quotient Laplacian expected from those totals.
pub struct Lifted {
    pub graph: MatrixWeightedGraph,
    pub cells: Vec<Vec<usize>>,
    pub quotient_laplacian: Dense,
}

pub fn lifted_digraph<R: Rng>(rng: &mut R, n: usize, k: usize, d: usize) -> Lifted {
    let cells = random_partition(rng, n, k);
    let mut targets: Vec<Vec<Option<Dense>>> = vec![vec![None; k]; k];
    let mut edges = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        for (cj, target) in cells.iter().enumerate() {
            if rng.random_bool(0.4) {
                continue;
            }
            let total = random_block(rng, d, 4);
            let total_dense = dense(total.matrix());
            let mut usable = true;
            let mut planned = Vec::new();
            for &r in cell {
                let options: Vec<usize> = target.iter().copied().filter(|&t| t != r).collect();
                if options.is_empty() {
                    usable = false;
                    break;
                }
                planned.push((r, split_block(rng, &total_dense, &options, d)));
            }
            if !usable {
                continue;
            }
            for (r, parts) in planned {
                edges.extend(parts.into_iter().map(|(t, w)| (r, t, w)));
            }
            targets[ci][cj] = Some(total_dense);
        }
    }
    let mut lpi = zeros(k * d, k * d);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            if let Some(w) = &targets[i][j] {
                for a in 0..d {
                    for b in 0..d {
                        lpi[i * d + a][j * d + b] -= &w[a][b];
                        lpi[i * d + a][i * d + b] += &w[a][b];
                    }
                }
            }
        }
    }
    let graph = MatrixWeightedGraph::new(n, d, Symmetry::None, edges, vec![0]).expect("lifted graph is valid");
    Lifted {
        graph,
        cells,
        quotient_laplacian: lpi,
    }
}

/// Splits `total` into nonzero blocks on a random nonempty subset of `options`.
fn split_block<R: Rng>(rng: &mut R, total: &Dense, options: &[usize], d: usize) -> Vec<(usize, BlockWeight)> {
    loop {
        let mut chosen: Vec<usize> = options.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
        if chosen.is_empty() {
            chosen.push(options[rng.random_range(0..options.len())]);
        }
        let mut rest = total.clone();
        let mut parts = Vec::new();
        for &t in &chosen[..chosen.len() - 1] {
            let w = random_block(rng, d, 3);
            let wd = dense(w.matrix());
            for a in 0..d {
                for b in 0..d {
                    rest[a][b] -= &wd[a][b];
                }
            }
            parts.push((t, w));
        }
        if rest.iter().flatten().all(Zero::is_zero) {
            continue;
        }
        let last = BlockWeight::new(Matrix::from_rows(rest).unwrap()).unwrap();
        parts.push((*chosen.last().unwrap(), last));
        return parts;
    }
}

pub fn partition_of(cells: &[Vec<usize>], n: usize) -> Partition {
    Partition::new(cells.to_vec(), n).expect("oracle partitions are valid")
}

pub fn cell_sets(partitions: impl IntoIterator<Item = Vec<Vec<usize>>>) -> BTreeSet<Vec<Vec<usize>>> {
    partitions.into_iter().map(canonical).collect()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Q {
    loop {
        let num = rng.random_range(-9i64..=9);
        let den = rng.random_range(1i64..=5);
        if num != 0 {
            return Q::new(BigInt::from(num), BigInt::from(den));
        }
    }
}
