use serde::{Serialize, Serializer};

use super::ep_search::{enumerate_feasible_eps, EnumerationMode, SearchConfig};
use super::krylov::controllable_dimension;
use super::sampling::{derive_seed, sample_system};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::graph::{MatrixWeightedGraph, WeightPattern};
use crate::linalg::RankBackend;
use crate::partition::{EpOptions, Partition};

/// Samples drawn per constraint system unless overridden.
pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimateConfig {
    pub mode: EnumerationMode,
    pub samples_per_system: usize,
    pub seed: u64,
    pub backend: RankBackend,
    pub cap: usize,
    pub ep: EpOptions,
    pub executor: Executor,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        let search = SearchConfig::default();
        EstimateConfig {
            mode: search.mode,
            samples_per_system: DEFAULT_SAMPLES,
            seed: 0,
            backend: RankBackend::Exact,
            cap: search.cap,
            ep: search.ep,
            executor: search.executor,
        }
    }
}

impl EstimateConfig {
    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            mode: self.mode,
            cap: self.cap,
            ep: self.ep,
            executor: self.executor,
        }
    }
}

/// Strong structural controllability as far as the equitable-partition bound
/// and the samples can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SscVerdict {
    /// Bound below `nd`, or a sampled weight choice was uncontrollable.
    NotSsc,
    /// Bound is `nd` and every sample was controllable.
    Unknown,
}

impl Serialize for SscVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SscVerdict::NotSsc => s.serialize_bool(false),
            SscVerdict::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSummary {
    pub partition: Partition,
    /// Dimension of the constraint solution set.
    pub freedom: usize,
    pub min_dim: Option<usize>,
    pub max_dim: Option<usize>,
    /// Rejection sampling never met the pattern's sign requirements here.
    pub sampling_failed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRecord {
    /// Index into [`SSCReport::systems`].
    pub system: usize,
    pub seed: u64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub partition: Partition,
    pub seed: u64,
    pub graph: MatrixWeightedGraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSCReport {
    pub n: usize,
    pub d: usize,
    pub leaders: Vec<usize>,
    pub requested_mode: EnumerationMode,
    pub mode: EnumerationMode,
    pub backend: RankBackend,
    pub seed: u64,
    pub samples_per_system: usize,
    pub k_min: usize,
    pub bound: usize,
    /// Index of the min-cell system in `systems`.
    pub min_cell_system: usize,
    pub witness: Witness,
    pub systems: Vec<SystemSummary>,
    pub sampled_dims: Vec<SampleRecord>,
    pub ssc_estimate: usize,
    pub verdict: SscVerdict,
    pub max_controllable_dimension: usize,
}

impl SSCReport {
    pub fn state_dim(&self) -> usize {
        self.n * self.d
    }

    /// Samples drawn from the min-cell system.
    pub fn min_cell_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.sampled_dims
            .iter()
            .filter(move |r| r.system == self.min_cell_system)
            .map(|r| r.dim)
    }

    /// The sampled minimum meets the certified bound.
    pub fn bound_attained(&self) -> bool {
        self.ssc_estimate == self.bound
    }
}

/// Samples every feasible equitable-partition system (the discrete partition
/// is the unconstrained pattern) and compares the controllable dimensions with
/// the min-cell bound `d · k_min`.
pub fn estimate_ssc_dimension(p: &WeightPattern, cfg: &EstimateConfig) -> Result<SSCReport> {
    if cfg.samples_per_system == 0 {
        return Err(Error::InvalidPattern("at least one sample per system is required".into()));
    }
    let search = cfg.search();
    let systems = enumerate_feasible_eps(p, &search)?;
    let min_cell_system = (0..systems.len())
        .min_by(|&a, &b| {
            (systems[a].cells(), &systems[a].partition).cmp(&(systems[b].cells(), &systems[b].partition))
        })
        .ok_or_else(|| Error::Infeasible("the pattern's own constraints force an edge to zero".into()))?;
    let k_min = systems[min_cell_system].cells();
    let bound = p.d() * k_min;

    let tasks: Vec<(usize, usize)> = (0..systems.len())
        .flat_map(|s| (0..cfg.samples_per_system).map(move |k| (s, k)))
        .collect();
    let outcomes = cfg.executor.map(&tasks, |&(s, k)| -> Result<SampleRecord> {
        let seed = derive_seed(cfg.seed, s, k);
        let g = sample_system(p, &systems[s], seed)?;
        let dim = controllable_dimension(&g.laplacian(), &g.input_matrix(), cfg.backend)?;
        Ok(SampleRecord { system: s, seed, dim })
    });

    let mut summaries: Vec<SystemSummary> = systems
        .iter()
        .map(|sys| SystemSummary {
            partition: sys.partition.clone(),
            freedom: sys.solution.as_ref().map_or(0, |s| s.dim()),
            min_dim: None,
            max_dim: None,
            sampling_failed: false,
        })
        .collect();
    let mut sampled_dims = Vec::with_capacity(tasks.len());
    for (&(s, _), outcome) in tasks.iter().zip(outcomes) {
        match outcome {
            Ok(record) => {
                let summary = &mut summaries[s];
                summary.min_dim = Some(summary.min_dim.map_or(record.dim, |m| m.min(record.dim)));
                summary.max_dim = Some(summary.max_dim.map_or(record.dim, |m| m.max(record.dim)));
                sampled_dims.push(record);
            }
            Err(Error::SamplingExhausted { .. }) if s != min_cell_system => {
                summaries[s].sampling_failed = true;
            }
            Err(e) => return Err(e),
        }
    }

    let witness_seed = derive_seed(cfg.seed, min_cell_system, 0);
    let witness = Witness {
        partition: systems[min_cell_system].partition.clone(),
        seed: witness_seed,
        graph: sample_system(p, &systems[min_cell_system], witness_seed)?,
    };
    let ssc_estimate = sampled_dims
        .iter()
        .map(|r| r.dim)
        .min()
        .expect("the min-cell system always contributes samples");
    let nd = p.n() * p.d();
    let verdict = if bound < nd || ssc_estimate < nd {
        SscVerdict::NotSsc
    } else {
        SscVerdict::Unknown
    };
    Ok(SSCReport {
        n: p.n(),
        d: p.d(),
        leaders: p.leaders().to_vec(),
        requested_mode: cfg.mode,
        mode: search.effective_mode(p),
        backend: cfg.backend,
        seed: cfg.seed,
        samples_per_system: cfg.samples_per_system,
        k_min,
        bound,
        min_cell_system,
        witness,
        systems: summaries,
        sampled_dims,
        ssc_estimate,
        verdict,
        max_controllable_dimension: bound,
    })
}
