//! JSON and text renderings of analysis results.
//!
//! JSON is the stable machine format: node and cell indices are 1-based,
//! rationals are strings (`"p/q"` or an integer), and object keys come out in
//! a fixed order so identical inputs give byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    controllable_dimension, dual_pair, is_self_dual, observability_rank, reversal_check, ReversalCheck, SSCReport,
    SscVerdict,
};
use crate::error::Result;
use crate::graph::{block_json, to_document, MatrixWeightedGraph, Network};
use crate::linalg::{BlockMatrix, Matrix, RankBackend};
use crate::partition::{EpReport, Partition, QuotientGraph};
use crate::rational::format_rational;

pub fn matrix_json(m: &Matrix) -> Value {
    block_json(m)
}

pub fn block_matrix_json(m: &BlockMatrix) -> Value {
    json!({
        "d": m.d(),
        "block_rows": m.block_rows(),
        "block_cols": m.block_cols(),
        "entries": block_json(m.matrix()),
    })
}

pub fn partition_json(p: &Partition) -> Value {
    json!(p.to_one_based())
}

pub fn ep_report_json(partition: &Partition, report: &EpReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "cell": v.cell + 1,
                "r": v.r + 1,
                "s": v.s + 1,
                "target": v.target + 1,
                "sum_r": block_json(v.sum_r.matrix()),
                "sum_s": block_json(v.sum_s.matrix()),
            })
        })
        .collect();
    json!({
        "partition": partition_json(partition),
        "verdict": report.verdict,
        "violations": violations,
    })
}

pub fn quotient_json(q: &QuotientGraph, laplacian: &BlockMatrix) -> Value {
    let edges: Vec<Value> = q
        .edges()
        .map(|(i, j, w)| json!({"i": i + 1, "j": j + 1, "weight": block_json(w.matrix())}))
        .collect();
    json!({
        "k": q.k(),
        "d": q.d(),
        "edges": edges,
        "laplacian": block_matrix_json(laplacian),
    })
}

pub fn graph_json(g: &MatrixWeightedGraph) -> Value {
    serde_json::from_str(&to_document(&Network::Graph(g.clone()))).expect("documents are valid JSON")
}

/// Plain-language reading of an [`SSCReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantNodeReport {
    pub not_ssc: bool,
    /// The certified bound when it is below `nd`.
    pub max_controllable_dimension: Option<usize>,
    pub bound_vacuous: bool,
    /// The sampled minimum meets the bound, so a subspace of that dimension
    /// was controllable under every sampled weight choice.
    pub invariant: bool,
    pub message: String,
}

pub fn invariant_node_report(r: &SSCReport) -> InvariantNodeReport {
    let nd = r.state_dim();
    let bound_vacuous = r.bound >= nd;
    let mut message = if bound_vacuous {
        "bound vacuous; SSC status unknown from EP method".to_string()
    } else {
        format!("not SSC; at most {} controllable dimensions", r.bound)
    };
    if bound_vacuous && r.verdict == SscVerdict::NotSsc {
        write!(message, "; a sampled weight choice reached only {} of {nd}", r.ssc_estimate).unwrap();
    }
    let invariant = r.bound_attained();
    if invariant {
        write!(
            message,
            "; invariant: a {}-dimensional controllable subspace persists across all sampled weights",
            r.bound
        )
        .unwrap();
    }
    InvariantNodeReport {
        not_ssc: r.verdict == SscVerdict::NotSsc,
        max_controllable_dimension: (!bound_vacuous).then_some(r.bound),
        bound_vacuous,
        invariant,
        message,
    }
}

pub fn ssc_report_json(r: &SSCReport) -> Value {
    let systems: Vec<Value> = r
        .systems
        .iter()
        .map(|s| {
            json!({
                "partition": partition_json(&s.partition),
                "cells": s.partition.len(),
                "freedom": s.freedom,
                "min_dim": s.min_dim,
                "max_dim": s.max_dim,
                "sampling_failed": s.sampling_failed,
            })
        })
        .collect();
    let sampled: Vec<Value> = r
        .sampled_dims
        .iter()
        .map(|s| json!({"system": s.system + 1, "seed": s.seed, "dim": s.dim}))
        .collect();
    json!({
        "n": r.n,
        "d": r.d,
        "leaders": r.leaders.iter().map(|l| l + 1).collect::<Vec<_>>(),
        "mode": r.mode.name(),
        "requested_mode": r.requested_mode.name(),
        "backend": r.backend.name(),
        "certified": r.backend.is_certifying(),
        "seed": r.seed,
        "samples_per_system": r.samples_per_system,
        "k_min": r.k_min,
        "bound": r.bound,
        "min_cell_system": r.min_cell_system + 1,
        "witness": {
            "partition": partition_json(&r.witness.partition),
            "seed": r.witness.seed,
            "graph": graph_json(&r.witness.graph),
        },
        "systems": systems,
        "sampled_dims": sampled,
        "ssc_estimate": r.ssc_estimate,
        "verdicts": {
            "strongly_structurally_controllable": r.verdict,
            "max_controllable_dimension": r.max_controllable_dimension,
        },
        "summary": invariant_node_report(r),
    })
}

/// Dual pair summary and the edge-reversal comparison for one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualReport {
    pub self_dual: bool,
    pub controllable_dim: usize,
    pub dual_controllable_dim: usize,
    pub observability_rank: usize,
    pub reversal: ReversalCheck,
}

pub fn dual_report(g: &MatrixWeightedGraph, backend: RankBackend) -> Result<DualReport> {
    let (l, m) = (g.laplacian(), g.input_matrix());
    let (lt, m_dual) = dual_pair(&l, &m);
    Ok(DualReport {
        self_dual: is_self_dual(&l),
        controllable_dim: controllable_dimension(&l, &m, backend)?,
        dual_controllable_dim: controllable_dimension(&lt, &m_dual, backend)?,
        observability_rank: observability_rank(&l, &m)?,
        reversal: reversal_check(g),
    })
}

pub fn dual_report_json(r: &DualReport) -> Value {
    let mismatches: Vec<Value> = r
        .reversal
        .mismatches
        .iter()
        .map(|m| {
            json!({
                "node": m.node + 1,
                "reversed": block_json(m.reversed.matrix()),
                "transposed": block_json(m.transposed.matrix()),
            })
        })
        .collect();
    json!({
        "self_dual": r.self_dual,
        "controllable_dim": r.controllable_dim,
        "dual_controllable_dim": r.dual_controllable_dim,
        "observability_rank": r.observability_rank,
        "reversal": {
            "holds": r.reversal.holds,
            "mismatches": mismatches,
            "reversed": graph_json(&r.reversal.reversed),
        },
    })
}

/// Renders a matrix with `|` between column groups and a rule between row
/// groups. Group sizes must sum to the matrix dimensions.
pub fn render_grouped(m: &Matrix, row_groups: &[usize], col_groups: &[usize]) -> String {
    debug_assert_eq!(row_groups.iter().sum::<usize>(), m.rows());
    debug_assert_eq!(col_groups.iter().sum::<usize>(), m.cols());
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let col_breaks = breaks(col_groups);
    let row_breaks = breaks(row_groups);

    let mut line_width = 0;
    let mut rows = Vec::with_capacity(m.rows());
    for row in &cells {
        let mut line = String::new();
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                line.push_str(if col_breaks.contains(&j) { " | " } else { " " });
            }
            write!(line, "{x:>width$}").unwrap();
        }
        line_width = line_width.max(line.len());
        rows.push(line);
    }
    let mut out = String::new();
    for (i, line) in rows.iter().enumerate() {
        if i > 0 && row_breaks.contains(&i) {
            out.push_str(&rule(&rows[0], &col_breaks, width, line_width));
            out.push('\n');
        }
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn breaks(groups: &[usize]) -> Vec<usize> {
    groups
        .iter()
        .scan(0, |acc, g| {
            *acc += g;
            Some(*acc)
        })
        .collect()
}

fn rule(first: &str, col_breaks: &[usize], width: usize, line_width: usize) -> String {
    if first.is_empty() {
        return String::new();
    }
    let mut out: Vec<char> = "-".repeat(line_width).chars().collect();
    // Column j starts after j entries, j-1 plain gaps, and 3-wide separators.
    let mut pos = 0;
    for j in 1.. {
        pos += width;
        if pos >= line_width {
            break;
        }
        if col_breaks.contains(&j) {
            out[pos + 1] = '+';
            pos += 3;
        } else {
            pos += 1;
        }
    }
    out.into_iter().collect()
}

/// Block matrix with separators between blocks; scalar matrices print plain.
pub fn render_block_matrix(m: &BlockMatrix) -> String {
    let d = m.d();
    if d == 1 {
        return render_grouped(m.matrix(), &[m.block_rows()], &[m.block_cols()]);
    }
    render_grouped(m.matrix(), &vec![d; m.block_rows()], &vec![d; m.block_cols()])
}

/// Block matrix with separators between the node groups of `partition`,
/// which indexes the block rows. Columns are grouped per block when `d > 1`.
pub fn render_by_cells(m: &BlockMatrix, partition: &Partition) -> String {
    let d = m.d();
    let mut rows = Vec::new();
    let mut start = 0;
    for v in 1..=partition.n() {
        if v == partition.n() || partition.cell_of(v) != partition.cell_of(v - 1) {
            rows.push((v - start) * d);
            start = v;
        }
    }
    let cols = if d == 1 { vec![m.block_cols()] } else { vec![d; m.block_cols()] };
    render_grouped(m.matrix(), &rows, &cols)
}

pub fn render_ep_report(partition: &Partition, report: &EpReport) -> String {
    let mut out = format!("partition: {partition}\nequitable: {}\n", report.verdict);
    for v in &report.violations {
        writeln!(
            out,
            "  cell {}: nodes {} and {} differ into cell {}: {} vs {}",
            v.cell + 1,
            v.r + 1,
            v.s + 1,
            v.target + 1,
            inline(v.sum_r.matrix()),
            inline(v.sum_s.matrix()),
        )
        .unwrap();
    }
    out
}

/// One-line form: a bare scalar for `1 × 1`, otherwise `[[a, b], [c, d]]`.
pub fn inline(m: &Matrix) -> String {
    if m.shape() == (1, 1) {
        return format_rational(&m[(0, 0)]);
    }
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn render_ssc_report(r: &SSCReport) -> String {
    let summary = invariant_node_report(r);
    let mut out = String::new();
    writeln!(out, "n = {}, d = {}, state dimension {}", r.n, r.d, r.state_dim()).unwrap();
    let leaders: Vec<String> = r.leaders.iter().map(|l| (l + 1).to_string()).collect();
    writeln!(out, "leaders: {}", leaders.join(", ")).unwrap();
    writeln!(
        out,
        "mode: {} (requested {}), backend: {}, seed: {}, samples per system: {}",
        r.mode.name(),
        r.requested_mode.name(),
        r.backend.name(),
        r.seed,
        r.samples_per_system
    )
    .unwrap();
    writeln!(out, "k_min = {}, bound = {}", r.k_min, r.bound).unwrap();
    writeln!(out, "witness partition: {}", r.witness.partition).unwrap();
    writeln!(out, "systems:").unwrap();
    for (i, s) in r.systems.iter().enumerate() {
        let dims = match (s.min_dim, s.max_dim) {
            (Some(lo), Some(hi)) if lo == hi => format!("dim {lo}"),
            (Some(lo), Some(hi)) => format!("dims {lo}..={hi}"),
            _ => "no samples".to_string(),
        };
        let marker = if i == r.min_cell_system { " (min-cell)" } else { "" };
        let failed = if s.sampling_failed { ", sampling failed" } else { "" };
        writeln!(out, "  {}{marker}: freedom {}, {dims}{failed}", s.partition, s.freedom).unwrap();
    }
    writeln!(out, "ssc_estimate = {}", r.ssc_estimate).unwrap();
    let verdict = match r.verdict {
        SscVerdict::NotSsc => "false",
        SscVerdict::Unknown => "unknown",
    };
    writeln!(out, "strongly structurally controllable: {verdict}").unwrap();
    writeln!(out, "{}", summary.message).unwrap();
    out
}

pub fn render_dual_report(r: &DualReport) -> String {
    let mut out = String::new();
    writeln!(out, "{}", if r.self_dual { "self-dual" } else { "not self-dual" }).unwrap();
    writeln!(out, "controllable dimension of (L, M): {}", r.controllable_dim).unwrap();
    writeln!(out, "controllable dimension of (Lᵀ, M): {}", r.dual_controllable_dim).unwrap();
    writeln!(out, "observability rank of (L, M): {}", r.observability_rank).unwrap();
    writeln!(out, "reversal gives Lᵀ: {}", r.reversal.holds).unwrap();
    for m in &r.reversal.mismatches {
        writeln!(
            out,
            "  node {}: reversed degree {} vs Lᵀ diagonal {}",
            m.node + 1,
            inline(m.reversed.matrix()),
            inline(m.transposed.matrix())
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{estimate_ssc_dimension, EstimateConfig};
    use crate::graph::{Symmetry, WeightPattern};

    fn report(n: usize, edges: &[(usize, usize)]) -> SSCReport {
        let p = WeightPattern::new(n, 1, Symmetry::Entrywise, edges.to_vec(), None, vec![], vec![0]).unwrap();
        estimate_ssc_dimension(&p, &EstimateConfig::default()).unwrap()
    }

    #[test]
    fn diamond_summary() {
        let s = invariant_node_report(&report(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]));
        assert!(s.not_ssc);
        assert_eq!(s.max_controllable_dimension, Some(3));
        assert!(s.message.starts_with("not SSC; at most 3 controllable dimensions"));
    }

    #[test]
    fn star_summary_is_invariant() {
        let s = invariant_node_report(&report(4, &[(0, 1), (0, 2), (0, 3)]));
        assert!(s.invariant);
        assert_eq!(s.max_controllable_dimension, Some(2));
    }

    #[test]
    fn vacuous_bound_summary() {
        let r = report(3, &[(0, 1), (1, 2)]);
        assert_eq!(r.bound, 3);
        let s = invariant_node_report(&r);
        assert!(s.bound_vacuous);
        assert!(s.message.starts_with("bound vacuous; SSC status unknown from EP method"));
    }

    #[test]
    fn ssc_json_records_reproducibility_fields() {
        let v = ssc_report_json(&report(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]));
        assert_eq!(v["bound"], 3);
        assert_eq!(v["seed"], 0);
        assert_eq!(v["backend"], "exact");
        assert_eq!(v["verdicts"]["strongly_structurally_controllable"], false);
        assert_eq!(v["witness"]["partition"], json!([[1], [2, 3], [4]]));
    }

    #[test]
    fn grouped_rendering() {
        let m = Matrix::from_i64(2, 3, &[1, -2, 3, 4, 5, 6]);
        assert_eq!(render_grouped(&m, &[1, 1], &[2, 1]), " 1 -2 |  3\n------+---\n 4  5 |  6\n");
        let q = Matrix::from_rows(vec![vec![crate::rational::ratio(1, 2)]]).unwrap();
        assert_eq!(render_grouped(&q, &[1], &[1]), "1/2\n");
    }

    #[test]
    fn cell_rows_follow_the_partition() {
        let p = Partition::from_one_based(&[vec![1, 2], vec![3]], 3).unwrap();
        let m = crate::partition::characteristic_matrix(&p, 3, 1).unwrap();
        assert_eq!(render_by_cells(&m, &p), "1 0\n1 0\n---\n0 1\n");
    }

    #[test]
    fn dual_report_of_a_directed_path() {
        let g = MatrixWeightedGraph::scalar(3, true, &[(0, 1, 1), (1, 2, 1)], vec![0]).unwrap();
        let r = dual_report(&g, RankBackend::Exact).unwrap();
        assert!(!r.self_dual);
        assert_eq!(r.dual_controllable_dim, r.observability_rank);
        assert!(!r.reversal.holds);
        assert!(render_dual_report(&r).contains("node 1: reversed degree 0 vs Lᵀ diagonal 1"));
    }
}
