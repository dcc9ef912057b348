use std::fs;

use serde_json::{json, Value};

use ssc_core::analysis::{estimate_ssc_dimension, EstimateConfig};
use ssc_core::corpus::run_corpus;
use ssc_core::graph::{parse_network, MatrixWeightedGraph, Network, WeightPattern};
use ssc_core::partition::{
    characteristic_matrix, check_lift, coarsest_ep, quotient, quotient_laplacian, verify_equitable, EpOptions,
    Partition,
};
use ssc_core::report::{
    block_matrix_json, dual_report, dual_report_json, ep_report_json, partition_json, quotient_json,
    render_block_matrix, render_by_cells, render_dual_report, render_ep_report, render_ssc_report, ssc_report_json,
};
use ssc_core::Error;

use crate::{Command, Format, Options, EXIT_BAD_ARGUMENT, EXIT_INTERNAL, EXIT_PARSE, EXIT_RESOURCE_CAP};

/// A failed command: exit code, message for stderr, and anything already
/// rendered for stdout.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub output: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            output: String::new(),
        }
    }

    fn bad_argument(message: impl Into<String>) -> Self {
        Failure::new(EXIT_BAD_ARGUMENT, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::CapExceeded { .. } | Error::SamplingExhausted { .. } => EXIT_RESOURCE_CAP,
            Error::NotAPartition(_)
            | Error::NotEquitable { .. }
            | Error::IndexOutOfRange { .. }
            | Error::Infeasible(_)
            | Error::EmptyPattern
            | Error::InvalidPattern(_) => EXIT_BAD_ARGUMENT,
            _ => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<String, Failure>;

pub fn run(command: Command, opts: &Options) -> Outcome {
    match command {
        Command::Laplacian => laplacian(opts),
        Command::Ep => ep(opts),
        Command::Quotient => quotient_cmd(opts),
        Command::Bound => bound(opts),
        Command::Dual => dual(opts),
        Command::Corpus => corpus(opts),
    }
}

fn load(opts: &Options) -> Result<Network, Failure> {
    let path = opts
        .input
        .as_ref()
        .ok_or_else(|| Failure::bad_argument("--input is required for this command"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::bad_argument(format!("cannot read {}: {e}", path.display())))?;
    parse_network(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_graph(opts: &Options) -> Result<MatrixWeightedGraph, Failure> {
    match load(opts)? {
        Network::Graph(g) => Ok(g),
        Network::Pattern(_) => Err(Failure::bad_argument(
            "this command needs concrete weights, but the input is a weight pattern",
        )),
    }
}

/// Accepts JSON lists or the brace notation `{{1,2},{3}}`.
fn parse_partition(text: &str, n: usize) -> Result<Partition, Failure> {
    let normalized = text.replace('{', "[").replace('}', "]");
    let cells: Vec<Vec<usize>> = serde_json::from_str(&normalized)
        .map_err(|e| Failure::bad_argument(format!("--partition: expected a list of 1-based cells: {e}")))?;
    Ok(Partition::from_one_based(&cells, n)?)
}

fn partition_arg(opts: &Options, n: usize) -> Result<Option<Partition>, Failure> {
    opts.partition.as_deref().map(|t| parse_partition(t, n)).transpose()
}

fn estimate_config(opts: &Options) -> EstimateConfig {
    EstimateConfig {
        mode: opts.mode.into(),
        samples_per_system: opts.samples as usize,
        seed: opts.seed,
        backend: opts.backend.into(),
        cap: opts.cap as usize,
        ..EstimateConfig::default()
    }
}

fn emit_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn laplacian(opts: &Options) -> Outcome {
    let g = load_graph(opts)?;
    let (l, m) = (g.laplacian(), g.input_matrix());
    Ok(match opts.format {
        Format::Json => emit_json(&json!({"laplacian": block_matrix_json(&l), "input": block_matrix_json(&m)})),
        Format::Text => format!("L =\n{}\nM =\n{}", render_block_matrix(&l), render_block_matrix(&m)),
    })
}

fn ep(opts: &Options) -> Outcome {
    let g = load_graph(opts)?;
    let options = EpOptions::default();
    match partition_arg(opts, g.n())? {
        Some(p) => {
            let report = verify_equitable(&g, &p, &options)?;
            Ok(match opts.format {
                Format::Json => emit_json(&ep_report_json(&p, &report)),
                Format::Text => render_ep_report(&p, &report),
            })
        }
        None => {
            let p = coarsest_ep(&g, g.leaders(), &options)?;
            Ok(match opts.format {
                Format::Json => emit_json(&json!({"coarsest": partition_json(&p), "cells": p.len()})),
                Format::Text => format!("coarsest leader-protected equitable partition: {p}\ncells: {}\n", p.len()),
            })
        }
    }
}

fn quotient_cmd(opts: &Options) -> Outcome {
    let g = load_graph(opts)?;
    let options = EpOptions::default();
    let p = match partition_arg(opts, g.n())? {
        Some(p) => p,
        None => coarsest_ep(&g, g.leaders(), &options)?,
    };
    let q = quotient(&g, &p, &options)?;
    let l_pi = quotient_laplacian(&q);
    let chi = characteristic_matrix(&p, g.n(), g.d())?;
    let lift = check_lift(&g.laplacian(), &chi, &l_pi)?;
    Ok(match opts.format {
        Format::Json => emit_json(&json!({
            "partition": partition_json(&p),
            "characteristic": block_matrix_json(&chi),
            "quotient": quotient_json(&q, &l_pi),
            "lift": {
                "identity_holds": lift.identity_holds,
                "image_invariant": lift.image_invariant,
                "mismatched_block_rows": lift.mismatched_block_rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
            },
        })),
        Format::Text => format!(
            "partition: {p}\nP =\n{}\nLπ =\n{}\nL·P = P·Lπ: {}\nim(P) invariant under L: {}\n",
            render_by_cells(&chi, &p),
            render_block_matrix(&l_pi),
            lift.identity_holds,
            lift.image_invariant
        ),
    })
}

fn bound(opts: &Options) -> Outcome {
    let pattern = match load(opts)? {
        Network::Pattern(p) => p,
        Network::Graph(g) => WeightPattern::from_topology(&g),
    };
    let report = estimate_ssc_dimension(&pattern, &estimate_config(opts))?;
    Ok(match opts.format {
        Format::Json => emit_json(&ssc_report_json(&report)),
        Format::Text => render_ssc_report(&report),
    })
}

fn dual(opts: &Options) -> Outcome {
    let g = load_graph(opts)?;
    let report = dual_report(&g, opts.backend.into())?;
    Ok(match opts.format {
        Format::Json => emit_json(&dual_report_json(&report)),
        Format::Text => render_dual_report(&report),
    })
}

fn corpus(opts: &Options) -> Outcome {
    let outcomes = run_corpus(&estimate_config(opts))?;
    let output = match opts.format {
        Format::Json => emit_json(&serde_json::to_value(&outcomes).expect("outcomes serialize")),
        Format::Text => {
            let mut out = String::new();
            for o in &outcomes {
                for c in &o.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    out.push_str(&format!("{status} {}/{}: {}\n", o.fixture, c.name, c.detail));
                }
            }
            out
        }
    };
    let failed = outcomes.iter().flat_map(|o| &o.checks).filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: format!("{failed} corpus check(s) failed"),
            output,
        });
    }
    Ok(output)
}
