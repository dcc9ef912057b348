use std::collections::BTreeSet;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::graph::WeightPattern;
use crate::linalg::{solve_affine, AffineSpace};
use crate::partition::{EpOptions, Partition};
use crate::rational::Rational;

/// Follower count above which partition enumeration is refused.
pub const DEFAULT_CAP: usize = 12;

const BATCH: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    /// Skip partitions whose same-cell nodes disagree on which cells they have
    /// neighbors in. Only sound when no block sum can cancel.
    Strict,
    /// Solve every candidate's constraint system.
    #[default]
    Cancellative,
}

impl EnumerationMode {
    pub fn name(self) -> &'static str {
        match self {
            EnumerationMode::Strict => "strict",
            EnumerationMode::Cancellative => "cancellative",
        }
    }
}

impl std::str::FromStr for EnumerationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(EnumerationMode::Strict),
            "cancellative" => Ok(EnumerationMode::Cancellative),
            other => Err(format!("unknown mode '{other}' (expected strict|cancellative)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: EnumerationMode,
    pub cap: usize,
    pub ep: EpOptions,
    pub executor: Executor,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: EnumerationMode::default(),
            cap: DEFAULT_CAP,
            ep: EpOptions::default(),
            executor: Executor::default(),
        }
    }
}

impl SearchConfig {
    /// Strict pruning is downgraded to cancellative unless the pattern's sign
    /// requirements rule out cancelling block sums.
    pub fn effective_mode(&self, p: &WeightPattern) -> EnumerationMode {
        match self.mode {
            EnumerationMode::Strict if p.forbids_cancellation(self.ep.direction) => EnumerationMode::Strict,
            _ => EnumerationMode::Cancellative,
        }
    }
}

/// Equitability equations for one partition over the pattern's variables,
/// together with the solution set of those equations plus the pattern's own
/// equality and fixed-value constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPConstraintSystem {
    pub partition: Partition,
    /// Homogeneous rows `coefficients · x = 0`.
    pub equations: Vec<Vec<Rational>>,
    /// `None` when the combined system has no solution at all.
    pub solution: Option<AffineSpace>,
    /// Edges whose whole block vanishes on the solution set.
    pub forced_zero_edges: Vec<usize>,
    pub feasible: bool,
}

impl EPConstraintSystem {
    pub fn cells(&self) -> usize {
        self.partition.len()
    }
}

/// Instantiates the equitability condition for `partition` symbolically and
/// decides feasibility: no edge block may vanish identically.
pub fn build_system(p: &WeightPattern, partition: &Partition, ep: &EpOptions) -> EPConstraintSystem {
    let vars = p.variable_count();
    let dd = p.d() * p.d();
    let mut equations = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, cell) in partition.cells().iter().enumerate() {
        let r = cell[0];
        for &s in &cell[1..] {
            for (j, target) in partition.cells().iter().enumerate() {
                if j == i && !ep.include_own_cell {
                    continue;
                }
                let mut rows = vec![vec![Rational::zero(); vars]; dd];
                for (node, sign) in [(r, Rational::one()), (s, -Rational::one())] {
                    for &t in target {
                        if let Some(coords) = p.coordinates(node, t, ep.direction) {
                            for (row, x) in rows.iter_mut().zip(coords) {
                                row[x] += &sign;
                            }
                        }
                    }
                }
                for row in rows {
                    if row.iter().any(|c| !c.is_zero()) && seen.insert(row.clone()) {
                        equations.push(row);
                    }
                }
            }
        }
    }
    let mut combined: Vec<(Vec<Rational>, Rational)> = equations
        .iter()
        .map(|row| (row.clone(), Rational::zero()))
        .collect();
    combined.extend(p.constraint_equations());
    let solution = solve_affine(vars, &combined);
    let forced_zero_edges: Vec<usize> = match &solution {
        Some(space) => (0..p.edges().len())
            .filter(|&e| p.edge_variables(e).all(|x| space.coordinate_vanishes(x)))
            .collect(),
        None => Vec::new(),
    };
    let feasible = solution.is_some() && forced_zero_edges.is_empty();
    EPConstraintSystem {
        partition: partition.clone(),
        equations,
        solution,
        forced_zero_edges,
        feasible,
    }
}

/// Same-cell nodes must see neighbors in the same set of cells.
fn strict_prunes(p: &WeightPattern, partition: &Partition, ep: &EpOptions) -> bool {
    let reach = |v: usize| -> BTreeSet<usize> {
        let own = partition.cell_of(v);
        p.neighbors(v, ep.direction)
            .into_iter()
            .map(|t| partition.cell_of(t))
            .filter(|&c| ep.include_own_cell || c != own)
            .collect()
    };
    partition.cells().iter().any(|cell| {
        let first = reach(cell[0]);
        cell[1..].iter().any(|&s| reach(s) != first)
    })
}

/// Restricted growth strings of length `len`: every set partition of
/// `0..len` exactly once, as block labels in first-occurrence order.
pub fn set_partitions(len: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = Some(vec![0; len]);
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        // prefix_max[i] = max(next[..i])
        let mut prefix_max = vec![0; len];
        for i in 1..len {
            prefix_max[i] = prefix_max[i - 1].max(next[i - 1]);
        }
        for i in (1..len).rev() {
            if next[i] <= prefix_max[i] {
                next[i] += 1;
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

fn check_search(p: &WeightPattern, cfg: &SearchConfig) -> Result<Vec<usize>> {
    if p.edges().is_empty() {
        return Err(Error::EmptyPattern);
    }
    let followers = p.followers();
    if followers.len() > cfg.cap {
        return Err(Error::CapExceeded {
            followers: followers.len(),
            cap: cfg.cap,
        });
    }
    Ok(followers)
}

fn leader_singleton_partition(p: &WeightPattern, followers: &[usize], rgs: &[usize]) -> Partition {
    let m = p.leaders().len();
    let mut labels = vec![0; p.n()];
    for (k, &l) in p.leaders().iter().enumerate() {
        labels[l] = k;
    }
    for (&f, &block) in followers.iter().zip(rgs) {
        labels[f] = m + block;
    }
    Partition::from_labels(&labels)
}

/// Evaluates candidate partitions in batches; keeps feasible systems.
fn evaluate(
    p: &WeightPattern,
    cfg: &SearchConfig,
    followers: &[usize],
    blocks: Option<usize>,
) -> Vec<EPConstraintSystem> {
    let strict = cfg.effective_mode(p) == EnumerationMode::Strict;
    let mut candidates = set_partitions(followers.len())
        .filter(|rgs| blocks.is_none_or(|b| rgs.iter().max().map_or(0, |m| m + 1) == b))
        .map(|rgs| leader_singleton_partition(p, followers, &rgs))
        .filter(|pi| !(strict && strict_prunes(p, pi, &cfg.ep)));
    let mut feasible = Vec::new();
    loop {
        let batch: Vec<Partition> = candidates.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        let systems = cfg.executor.map(&batch, |pi| {
            let sys = build_system(p, pi, &cfg.ep);
            sys.feasible.then_some(sys)
        });
        feasible.extend(systems.into_iter().flatten());
    }
    feasible.sort_by(|a, b| a.partition.cmp(&b.partition));
    feasible
}

/// Every leader-singleton partition whose equitability constraints leave all
/// edges nonzero, in canonical partition order.
pub fn enumerate_feasible_eps(p: &WeightPattern, cfg: &SearchConfig) -> Result<Vec<EPConstraintSystem>> {
    let followers = check_search(p, cfg)?;
    Ok(evaluate(p, cfg, &followers, None))
}

/// Feasible system with the fewest cells; ties go to the canonically smallest
/// partition.
pub fn min_cell_ep(p: &WeightPattern, cfg: &SearchConfig) -> Result<EPConstraintSystem> {
    let followers = check_search(p, cfg)?;
    let most = followers.len().max(1);
    for blocks in 1..=most {
        let blocks = if followers.is_empty() { 0 } else { blocks };
        if let Some(best) = evaluate(p, cfg, &followers, Some(blocks)).into_iter().next() {
            return Ok(best);
        }
    }
    Err(Error::Infeasible(
        "the pattern's own constraints force an edge to zero".into(),
    ))
}

/// `d · k_min`: no weight choice can push the controllable subspace beyond
/// the image of the min-cell characteristic matrix.
pub fn ssc_upper_bound(p: &WeightPattern, cfg: &SearchConfig) -> Result<usize> {
    Ok(p.d() * min_cell_ep(p, cfg)?.cells())
}
