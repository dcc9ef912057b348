use std::borrow::Cow;
use std::collections::BTreeMap;

use super::Partition;
use crate::error::{Error, Result};
use crate::graph::{BlockWeight, Direction, MatrixWeightedGraph};
use crate::linalg::Matrix;

/// Reading of the equitability condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EpOptions {
    /// Compare block sums into a node's own cell as well (`j = i`).
    pub include_own_cell: bool,
    /// `Out` sums `A_rt`; `In` sums `A_trᵀ`, the condition for the dual system.
    pub direction: Direction,
}

impl Default for EpOptions {
    fn default() -> Self {
        EpOptions {
            include_own_cell: true,
            direction: Direction::Out,
        }
    }
}

/// Two nodes `r`, `s` of one cell whose block sums into `target` differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpViolation {
    pub cell: usize,
    pub r: usize,
    pub s: usize,
    pub target: usize,
    pub sum_r: BlockWeight,
    pub sum_s: BlockWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpReport {
    pub verdict: bool,
    pub violations: Vec<EpViolation>,
}

fn oriented(g: &MatrixWeightedGraph, direction: Direction) -> Cow<'_, MatrixWeightedGraph> {
    match direction {
        Direction::Out => Cow::Borrowed(g),
        Direction::In => Cow::Owned(g.reversed()),
    }
}

/// Nonzero block sums of `v` into each class of `labels`.
fn class_sums(
    g: &MatrixWeightedGraph,
    v: usize,
    labels: &[usize],
    skip: Option<usize>,
) -> BTreeMap<usize, Matrix> {
    let mut sums: BTreeMap<usize, Matrix> = BTreeMap::new();
    for &t in g.out_neighbors(v) {
        if Some(labels[t]) == skip {
            continue;
        }
        let w = g.weight(v, t).expect("neighbor has a weight").matrix();
        sums.entry(labels[t])
            .and_modify(|acc| *acc = &*acc + w)
            .or_insert_with(|| w.clone());
    }
    sums.retain(|_, m| !m.is_zero());
    sums
}

fn check_partition(g: &MatrixWeightedGraph, partition: &Partition) -> Result<()> {
    if partition.n() != g.n() {
        return Err(Error::NotAPartition(format!(
            "partition covers {} nodes, graph has {}",
            partition.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Checks the equitability condition exactly and lists every violating tuple.
pub fn verify_equitable(
    g: &MatrixWeightedGraph,
    partition: &Partition,
    options: &EpOptions,
) -> Result<EpReport> {
    check_partition(g, partition)?;
    let g = oriented(g, options.direction);
    let labels: Vec<usize> = (0..g.n()).map(|v| partition.cell_of(v)).collect();
    let sums: Vec<BTreeMap<usize, Matrix>> = (0..g.n())
        .map(|v| class_sums(&g, v, &labels, None))
        .collect();
    let zero = Matrix::zeros(g.d(), g.d());
    let mut violations = Vec::new();
    for (i, cell) in partition.cells().iter().enumerate() {
        for (a, &r) in cell.iter().enumerate() {
            for &s in &cell[a + 1..] {
                for target in 0..partition.len() {
                    if target == i && !options.include_own_cell {
                        continue;
                    }
                    let sr = sums[r].get(&target).unwrap_or(&zero);
                    let ss = sums[s].get(&target).unwrap_or(&zero);
                    if sr != ss {
                        violations.push(EpViolation {
                            cell: i,
                            r,
                            s,
                            target,
                            sum_r: BlockWeight::new(sr.clone()).expect("square"),
                            sum_s: BlockWeight::new(ss.clone()).expect("square"),
                        });
                    }
                }
            }
        }
    }
    Ok(EpReport {
        verdict: violations.is_empty(),
        violations,
    })
}

/// Coarsest equitable partition refining `{protected singletons} ∪ {rest}`,
/// by splitting cells on block-sum signatures until nothing changes.
pub fn coarsest_ep(
    g: &MatrixWeightedGraph,
    protected: &[usize],
    options: &EpOptions,
) -> Result<Partition> {
    for &p in protected {
        crate::graph::check_node(p, g.n())?;
    }
    let g = oriented(g, options.direction);
    let mut labels = vec![0usize; g.n()];
    for (k, &p) in protected.iter().enumerate() {
        labels[p] = k + 1;
    }
    let mut classes = count_classes(&labels);
    loop {
        let signatures: Vec<(usize, Vec<(usize, Matrix)>)> = (0..g.n())
            .map(|v| {
                let skip = (!options.include_own_cell).then_some(labels[v]);
                let sums = class_sums(&g, v, &labels, skip).into_iter().collect();
                (labels[v], sums)
            })
            .collect();
        let mut ids = BTreeMap::new();
        for sig in &signatures {
            let next = ids.len();
            ids.entry(sig).or_insert(next);
        }
        let refined: Vec<usize> = signatures.iter().map(|sig| ids[sig]).collect();
        let refined_classes = ids.len();
        labels = refined;
        if refined_classes == classes {
            break;
        }
        classes = refined_classes;
    }
    Ok(Partition::from_labels(&labels))
}

fn count_classes(labels: &[usize]) -> usize {
    let mut seen: Vec<usize> = labels.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

impl EpReport {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }
}
