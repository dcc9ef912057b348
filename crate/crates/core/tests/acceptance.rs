//! Acceptance criteria, one pass/fail line each with its tolerance and
//! runtime budget. Runs as a plain binary under `cargo test`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use common::*;
use ssc_core::analysis::{
    controllable_dimension, controllable_subspace, dual_pair, enumerate_feasible_eps, estimate_ssc_dimension,
    observability_rank, reversal_check, sample_pattern, sample_system, EnumerationMode, EstimateConfig,
    SearchConfig, SscVerdict,
};
use ssc_core::corpus::{fixture, fixtures};
use ssc_core::graph::{Network, Symmetry, WeightPattern};
use ssc_core::linalg::{BlockMatrix, Matrix, RankBackend};
use ssc_core::partition::{characteristic_matrix, check_lift, quotient, quotient_laplacian, EpOptions, Partition};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pattern(name: &str) -> WeightPattern {
    match fixture(name).expect("bundled fixture").network() {
        Network::Pattern(p) => p,
        Network::Graph(g) => WeightPattern::from_topology(&g),
    }
}

fn two_cell_characteristic() -> Verdict {
    let p = Partition::from_one_based(&[vec![1, 2], vec![3, 4, 5]], 5).map_err(|e| e.to_string())?;
    for d in 1..=3 {
        let chi = characteristic_matrix(&p, 5, d).map_err(|e| e.to_string())?;
        ensure((chi.block_rows(), chi.block_cols()) == (5, 2), || format!("d={d}: wrong block shape"))?;
        for v in 0..5 {
            let home = if v < 2 { 0 } else { 1 };
            for c in 0..2 {
                let expected = if c == home { Matrix::identity(d) } else { Matrix::zeros(d, d) };
                ensure(chi.block(v, c) == expected, || format!("d={d}: block ({}, {}) differs", v + 1, c + 1))?;
            }
        }
    }
    Ok("identity blocks at rows 1-2/col 1 and rows 3-5/col 2 for d = 1, 2, 3".into())
}

fn diamond() -> Verdict {
    let p = pattern("diamond-pattern");
    let report = estimate_ssc_dimension(&p, &EstimateConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.k_min == 3 && report.bound == 3, || {
        format!("k_min {}, bound {}", report.k_min, report.bound)
    })?;
    ensure(report.verdict == SscVerdict::NotSsc, || "verdict is not 'not SSC'".into())?;
    let expected = Partition::from_one_based(&[vec![1], vec![2, 3], vec![4]], 4).unwrap();
    ensure(report.witness.partition == expected, || {
        format!("min-cell partition {}", report.witness.partition)
    })?;
    let constrained: Vec<usize> = report.min_cell_dims().collect();
    ensure(!constrained.is_empty() && constrained.iter().all(|&d| d == 3), || {
        format!("constrained dims {constrained:?}")
    })?;
    let systems = enumerate_feasible_eps(&p, &SearchConfig::default()).map_err(|e| e.to_string())?;
    for record in report.sampled_dims.iter().filter(|r| r.system == report.min_cell_system) {
        let g = sample_system(&p, &systems[record.system], record.seed).map_err(|e| e.to_string())?;
        let (w12, w13) = (g.weight(0, 1).unwrap(), g.weight(0, 2).unwrap());
        let (w24, w34) = (g.weight(1, 3).unwrap(), g.weight(2, 3).unwrap());
        ensure(w12 == w13 && w24 == w34, || "a constrained sample broke A12=A13, A24=A34".into())?;
    }
    let full = (0..100u64)
        .filter(|&seed| {
            let g = sample_pattern(&p, 1000 + seed).unwrap();
            controllable_dimension(&g.laplacian(), &g.input_matrix(), RankBackend::Exact).unwrap() == 4
        })
        .count();
    ensure(full >= 95, || format!("only {full}/100 unconstrained samples reached dim 4"))?;
    Ok(format!(
        "k_min 3, bound 3 < 4, not SSC; {} constrained samples all dim 3; {full}/100 unconstrained at dim 4",
        constrained.len()
    ))
}

fn lift_identity() -> Verdict {
    let mut rng = rng(0xA3);
    let mut within_cell = 0;
    for case in 0..200 {
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=n);
        let d = 1 + case % 2;
        let lifted = lifted_digraph(&mut rng, n, k, d);
        let g = &lifted.graph;
        let partition = partition_of(&lifted.cells, n);
        let q = quotient(g, &partition, &EpOptions::default()).map_err(|e| format!("case {case}: {e}"))?;
        let l_pi = quotient_laplacian(&q);
        ensure(dense(l_pi.matrix()) == lifted.quotient_laplacian, || {
            format!("case {case}: quotient Laplacian differs from the construction")
        })?;
        let p = dense(characteristic_matrix(&partition, n, d).unwrap().matrix());
        let l = dense(g.laplacian().matrix());
        let lp = mul(&l, &p);
        ensure(lp == mul(&p, &lifted.quotient_laplacian), || format!("case {case}: L·P ≠ P·Lπ"))?;
        ensure(naive_rank(hcat(&p, &lp)) == naive_rank(p.clone()), || {
            format!("case {case}: rank([P | LP]) ≠ rank(P)")
        })?;
        let chi = characteristic_matrix(&partition, n, d).unwrap();
        let check = check_lift(&g.laplacian(), &chi, &l_pi).unwrap();
        ensure(check.identity_holds && check.image_invariant, || format!("case {case}: library lift check failed"))?;
        if lifted.cells.iter().any(|c| c.iter().any(|&r| c.iter().any(|&t| g.weight(r, t).is_some()))) {
            within_cell += 1;
        }
    }
    Ok(format!("200/200 lifted digraphs ({within_cell} with within-cell edges)"))
}

fn krylov_inside_partition() -> Verdict {
    let names = ["diamond-pattern", "star-s4", "k3"];
    let mut jobs = Vec::new();
    for name in names {
        let p = pattern(name);
        for system in enumerate_feasible_eps(&p, &SearchConfig::default()).unwrap() {
            jobs.push((p.clone(), system));
        }
    }
    for i in 0..100 {
        let (p, system) = &jobs[i % jobs.len()];
        let g = sample_system(p, system, 0x4000 + i as u64).map_err(|e| e.to_string())?;
        let basis = dense(controllable_subspace(&g.laplacian(), &g.input_matrix()).unwrap().basis());
        let chi = dense(characteristic_matrix(&system.partition, p.n(), p.d()).unwrap().matrix());
        ensure(naive_rank(hcat(&chi, &basis)) == naive_rank(chi.clone()), || {
            format!("sample {i}: Krylov basis leaves im(P) for {}", system.partition)
        })?;
    }
    Ok(format!("100 samples over {} diamond/star/K3 systems", jobs.len()))
}

fn corpus_bound() -> Verdict {
    let mut checked = 0;
    for f in fixtures() {
        let p = pattern(f.name);
        let r = estimate_ssc_dimension(&p, &EstimateConfig::default()).map_err(|e| format!("{}: {e}", f.name))?;
        let over: Vec<usize> = r.min_cell_dims().filter(|&d| d > r.bound).collect();
        ensure(over.is_empty(), || format!("{}: min-cell samples {over:?} exceed bound {}", f.name, r.bound))?;
        ensure(r.ssc_estimate <= r.bound, || {
            format!("{}: estimate {} > bound {}", f.name, r.ssc_estimate, r.bound)
        })?;
        checked += r.min_cell_dims().count();
    }
    let star = estimate_ssc_dimension(&pattern("star-s4"), &EstimateConfig::default()).unwrap();
    ensure(star.bound == 2 && star.ssc_estimate == 2, || {
        format!("star bound {}, estimate {}", star.bound, star.ssc_estimate)
    })?;
    Ok(format!(
        "{} fixtures, {checked} min-cell samples within bound; star bound = estimate = 2",
        fixtures().len()
    ))
}

fn oracle_equivalence() -> Verdict {
    let mut rng = rng(0xA6);
    let symmetries = [Symmetry::Entrywise, Symmetry::Transpose, Symmetry::None];
    for case in 0..200 {
        let d = [1, 1, 2, 3][case % 4];
        let n = rng.random_range(1..=6 / d);
        let leaders = random_leaders(&mut rng, n, 2);
        let g = random_graph(&mut rng, n, d, symmetries[case % 3], 0.5, 4, leaders);
        let (l, m) = (g.laplacian(), g.input_matrix());
        let expected = materialized_rank(&dense(l.matrix()), &dense(m.matrix()));
        let got = controllable_subspace(&l, &m).unwrap().dim();
        ensure(got == expected, || format!("case {case}: Krylov {got}, materialized {expected}"))?;
    }
    let mut patterns = 0;
    for followers in 1..=6 {
        for round in 0..4 {
            let leaders_count = 1 + round % 2;
            let n = followers + leaders_count;
            let (d, symmetry) = match round {
                0 | 1 => (1, Symmetry::Entrywise),
                2 => (1, Symmetry::None),
                _ if followers <= 3 => (2, Symmetry::Transpose),
                _ => (1, Symmetry::Entrywise),
            };
            let leaders: Vec<usize> = (0..leaders_count).collect();
            let p = random_pattern(&mut rng, n, d, symmetry, 0.5, leaders.clone());
            let cfg = SearchConfig {
                mode: EnumerationMode::Cancellative,
                ..SearchConfig::default()
            };
            let ours = cell_sets(
                enumerate_feasible_eps(&p, &cfg)
                    .unwrap()
                    .into_iter()
                    .map(|s| s.partition.cells().to_vec()),
            );
            let reference = cell_sets(
                leader_partitions(n, &leaders)
                    .into_iter()
                    .filter(|cells| oracle_feasible(&p, cells)),
            );
            ensure(ours == reference, || {
                format!("{followers} followers, round {round}: enumeration differs from the oracle")
            })?;
            patterns += 1;
        }
    }
    Ok(format!("200/200 Krylov dims match; {patterns} patterns with 1-6 followers match the oracle"))
}

fn duality() -> Verdict {
    let mut rng = rng(0xA7);
    for case in 0..100 {
        let n = rng.random_range(1..=6);
        let leaders = random_leaders(&mut rng, n, 2);
        let g = random_graph(&mut rng, n, 1, Symmetry::None, 0.4, 5, leaders);
        let (l, m) = (g.laplacian(), g.input_matrix());
        let (lt, md) = dual_pair(&l, &m);
        let dual_dim = controllable_dimension(&lt, &md, RankBackend::Exact).unwrap();
        let obs = observability_rank(&l, &m).unwrap();
        let reference = observability_rank_oracle(&dense(l.matrix()), &dense(m.matrix()));
        ensure(dual_dim == obs && obs == reference, || {
            format!("case {case}: dual dim {dual_dim}, observability {obs}, oracle {reference}")
        })?;
    }
    let mut undirected = 0;
    for f in fixtures() {
        let graphs = match f.network() {
            Network::Graph(g) => vec![g],
            Network::Pattern(p) => (0..5).map(|s| sample_pattern(&p, s).unwrap()).collect(),
        };
        for g in graphs.iter().filter(|g| !g.is_directed() && g.d() == 1) {
            let (l, m) = (g.laplacian(), g.input_matrix());
            ensure(dual_pair(&l, &m) == (l.clone(), m.clone()), || format!("{}: dual pair differs", f.name))?;
            undirected += 1;
        }
    }
    let path = match fixture("directed-path").unwrap().network() {
        Network::Graph(g) => g,
        _ => unreachable!(),
    };
    let balanced = match fixture("balanced-digraph").unwrap().network() {
        Network::Graph(g) => g,
        _ => unreachable!(),
    };
    ensure(!reversal_check(&path).holds, || "reversal holds on the directed path".into())?;
    ensure(reversal_check(&balanced).holds, || "reversal fails on the balanced digraph".into())?;
    Ok(format!(
        "100/100 random digraphs; {undirected} undirected fixture graphs self-dual; reversal false on path, true on balanced"
    ))
}

fn shift_and_sign() -> Verdict {
    let mut rng = rng(0xA8);
    for case in 0..50 {
        let d = 1 + case % 2;
        let n = rng.random_range(1..=6 / d);
        let size = n * d;
        let l: Dense = (0..size)
            .map(|_| (0..size).map(|_| q(rng.random_range(-3..=3))).collect())
            .collect();
        let leaders = random_leaders(&mut rng, n, 2);
        let m = oracle_input(n, d, &leaders);
        let alpha = random_rational(&mut rng);
        let shifted: Dense = l
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, x)| if i == j { x + &alpha } else { x.clone() }).collect())
            .collect();
        let negated: Dense = l.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        let block = |x: &Dense| BlockMatrix::from_matrix(Matrix::from_rows(x.clone()).unwrap(), d).unwrap();
        let mm = block(&m);
        let bases: Vec<Dense> = [&l, &shifted, &negated]
            .iter()
            .map(|x| dense(controllable_subspace(&block(x), &mm).unwrap().basis()))
            .collect();
        ensure(same_span(&bases[0], &bases[1]) && same_span(&bases[0], &bases[2]), || {
            format!("case {case}: spans differ for α = {alpha}")
        })?;
    }
    Ok("50/50 random (L, M): ⟨L|M⟩ = ⟨L+αI|M⟩ = ⟨−L|M⟩".into())
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    tolerance: &'static str,
    budget: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: "AC1", title: "characteristic matrix of {{1,2},{3,4,5}}", tolerance: "exact", budget: secs(1), run: two_cell_characteristic },
        Criterion { id: "AC2", title: "diamond bound and samples", tolerance: "exact ranks; >=95/100 at dim 4", budget: secs(5), run: diamond },
        Criterion { id: "AC3", title: "lift identity on 200 lifted graphs", tolerance: "exact", budget: secs(30), run: lift_identity },
        Criterion { id: "AC4", title: "Krylov span inside im(P)", tolerance: "exact", budget: None, run: krylov_inside_partition },
        Criterion { id: "AC5", title: "corpus samples within the bound", tolerance: "exact", budget: None, run: corpus_bound },
        Criterion { id: "AC6", title: "oracle equivalence", tolerance: "exact", budget: None, run: oracle_equivalence },
        Criterion { id: "AC7", title: "duality", tolerance: "exact", budget: None, run: duality },
        Criterion { id: "AC8", title: "shift and sign invariance", tolerance: "exact", budget: None, run: shift_and_sign },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg)
        });
        let elapsed = start.elapsed();
        let over_budget = c.budget.is_some_and(|b| elapsed > b);
        let passed = outcome.is_ok() && !over_budget;
        let budget = c.budget.map_or("no limit".to_string(), |b| format!("limit {}s", b.as_secs()));
        let detail = match &outcome {
            Ok(s) if over_budget => format!("{s}; over the runtime budget"),
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!(
            "{} {} {} | tolerance: {} | {:.3}s ({budget}) | {detail}",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.tolerance,
            elapsed.as_secs_f64(),
        );
        failures += usize::from(!passed);
    }
    println!("{}/{} acceptance criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
