//! Bundled example networks and a runner that checks the core identities on
//! each of them.

use serde::Serialize;

use crate::analysis::{
    controllable_dimension, controllable_subspace, dual_pair, estimate_ssc_dimension, observability_rank,
    reversal_check, EstimateConfig, SscVerdict,
};
use crate::error::Result;
use crate::graph::{parse_network, MatrixWeightedGraph, Network, WeightPattern};
use crate::linalg::subspace_contains;
use crate::partition::{characteristic_matrix, coarsest_ep, lift_for, verify_equitable, EpOptions, Partition};

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub document: &'static str,
    /// A partition the fixture is known to be equitable for, 1-based.
    pub partition: Option<&'static [&'static [usize]]>,
    pub expected_bound: Option<usize>,
}

impl Fixture {
    pub fn network(&self) -> Network {
        parse_network(self.document).expect("bundled fixtures parse")
    }

    pub fn partition(&self) -> Option<Partition> {
        let n = match self.network() {
            Network::Graph(g) => g.n(),
            Network::Pattern(p) => p.n(),
        };
        self.partition.map(|cells| {
            let cells: Vec<Vec<usize>> = cells.iter().map(|c| c.to_vec()).collect();
            Partition::from_one_based(&cells, n).expect("bundled partitions are valid")
        })
    }
}

static FIXTURES: &[Fixture] = &[
    Fixture {
        name: "diamond",
        summary: "four-node diamond, unit weights, leader 1",
        document: include_str!("../fixtures/diamond.json"),
        partition: Some(&[&[1], &[2, 3], &[4]]),
        expected_bound: None,
    },
    Fixture {
        name: "diamond-pattern",
        summary: "diamond topology with free scalar weights",
        document: include_str!("../fixtures/diamond-pattern.json"),
        partition: None,
        expected_bound: Some(3),
    },
    Fixture {
        name: "path3",
        summary: "path 1-2-3 with free weights, leader at an end",
        document: include_str!("../fixtures/path3.json"),
        partition: None,
        expected_bound: Some(3),
    },
    Fixture {
        name: "star-s4",
        summary: "star with three leaves, leader at the center",
        document: include_str!("../fixtures/star-s4.json"),
        partition: None,
        expected_bound: Some(2),
    },
    Fixture {
        name: "k3",
        summary: "triangle with free weights, leader 1",
        document: include_str!("../fixtures/k3.json"),
        partition: None,
        expected_bound: Some(2),
    },
    Fixture {
        name: "bipartite-k23",
        summary: "complete bipartite K2,3 with 2x2 weights",
        document: include_str!("../fixtures/bipartite-k23.json"),
        partition: Some(&[&[1, 2], &[3, 4, 5]]),
        expected_bound: None,
    },
    Fixture {
        name: "directed-path",
        summary: "directed path 1->2->3, unit weights",
        document: include_str!("../fixtures/directed-path.json"),
        partition: None,
        expected_bound: None,
    },
    Fixture {
        name: "balanced-digraph",
        summary: "directed 4-cycle with a two-way chord; in- and out-degrees agree",
        document: include_str!("../fixtures/balanced-digraph.json"),
        partition: None,
        expected_bound: None,
    },
];

pub fn fixtures() -> &'static [Fixture] {
    FIXTURES
}

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub fixture: &'static str,
    pub checks: Vec<Check>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_corpus(cfg: &EstimateConfig) -> Result<Vec<FixtureOutcome>> {
    FIXTURES.iter().map(|f| run_fixture(f, cfg)).collect()
}

pub fn run_fixture(f: &Fixture, cfg: &EstimateConfig) -> Result<FixtureOutcome> {
    let checks = match f.network() {
        Network::Graph(g) => graph_checks(&g, f.partition(), cfg)?,
        Network::Pattern(p) => pattern_checks(&p, f.expected_bound, cfg)?,
    };
    Ok(FixtureOutcome { fixture: f.name, checks })
}

fn partition_checks(
    g: &MatrixWeightedGraph,
    label: (&'static str, &'static str, &'static str),
    partition: &Partition,
    options: &EpOptions,
) -> Result<Vec<Check>> {
    let ep = verify_equitable(g, partition, options)?;
    let mut checks = vec![Check::new(
        label.0,
        ep.verdict,
        format!("{partition}: {} violations", ep.violation_count()),
    )];
    if !ep.verdict {
        return Ok(checks);
    }
    let lift = lift_for(g, partition, options)?;
    checks.push(Check::new(
        label.1,
        lift.identity_holds && lift.image_invariant,
        format!("L·P = P·Lπ: {}, im(P) invariant: {}", lift.identity_holds, lift.image_invariant),
    ));
    let leaders_alone = g.leaders().iter().all(|&l| partition.cell(partition.cell_of(l)).len() == 1);
    if leaders_alone {
        let p = characteristic_matrix(partition, g.n(), g.d())?;
        let sub = controllable_subspace(&g.laplacian(), &g.input_matrix())?;
        checks.push(Check::new(
            label.2,
            subspace_contains(p.matrix(), sub.basis()) && sub.dim() <= g.d() * partition.len(),
            format!("dim {} within im(P) of dim {}", sub.dim(), g.d() * partition.len()),
        ));
    }
    Ok(checks)
}

fn graph_checks(g: &MatrixWeightedGraph, declared: Option<Partition>, cfg: &EstimateConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let coarsest = coarsest_ep(g, g.leaders(), &cfg.ep)?;
    checks.extend(partition_checks(
        g,
        ("coarsest-ep-equitable", "coarsest-ep-lift", "coarsest-ep-contains-controllable"),
        &coarsest,
        &cfg.ep,
    )?);
    if let Some(p) = declared {
        checks.extend(partition_checks(
            g,
            ("declared-ep-equitable", "declared-ep-lift", "declared-ep-contains-controllable"),
            &p,
            &cfg.ep,
        )?);
    }

    let (l, m) = (g.laplacian(), g.input_matrix());
    let (lt, md) = dual_pair(&l, &m);
    let dual_dim = controllable_dimension(&lt, &md, cfg.backend)?;
    let obs = observability_rank(&l, &m)?;
    checks.push(Check::new(
        "duality",
        dual_dim == obs,
        format!("dual controllable dim {dual_dim}, observability rank {obs}"),
    ));
    let reversal = reversal_check(g);
    if g.is_directed() {
        let balanced = (0..g.n()).all(|v| {
            let out = g.degree(v).expect("node in range");
            let into = g.reversed().degree(v).expect("node in range");
            out.transpose() == into
        });
        checks.push(Check::new(
            "reversal",
            reversal.holds == balanced,
            format!("reversal gives Lᵀ: {}, degree-balanced: {balanced}", reversal.holds),
        ));
    } else {
        checks.push(Check::new(
            "self-dual",
            lt == l && md == m && reversal.holds,
            format!("Lᵀ = L: {}", lt == l),
        ));
    }
    Ok(checks)
}

fn pattern_checks(p: &WeightPattern, expected_bound: Option<usize>, cfg: &EstimateConfig) -> Result<Vec<Check>> {
    let r = estimate_ssc_dimension(p, cfg)?;
    let worst_min_cell = r.min_cell_dims().max().unwrap_or(0);
    let mut checks = vec![
        Check::new(
            "min-cell-samples-within-bound",
            r.min_cell_dims().all(|dim| dim <= r.bound),
            format!("largest min-cell sample {worst_min_cell}, bound {}", r.bound),
        ),
        Check::new(
            "estimate-within-bound",
            r.ssc_estimate <= r.bound,
            format!("estimate {}, bound {}", r.ssc_estimate, r.bound),
        ),
        Check::new(
            "verdict-consistent",
            r.bound >= r.state_dim() || r.verdict == SscVerdict::NotSsc,
            format!("bound {} of {}", r.bound, r.state_dim()),
        ),
    ];
    if let Some(expected) = expected_bound {
        checks.push(Check::new(
            "expected-bound",
            r.bound == expected,
            format!("bound {}, expected {expected}", r.bound),
        ));
    }
    Ok(checks)
}
