use std::collections::{BTreeMap, HashMap};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{check_node, BlockWeight, Direction, MatrixWeightedGraph, Symmetry};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// Entrywise sign requirement on an edge block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignRequirement {
    Positive,
    Negative,
    Nonnegative,
    Nonpositive,
}

impl SignRequirement {
    pub fn name(self) -> &'static str {
        match self {
            SignRequirement::Positive => "positive",
            SignRequirement::Negative => "negative",
            SignRequirement::Nonnegative => "nonnegative",
            SignRequirement::Nonpositive => "nonpositive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positive" => Some(SignRequirement::Positive),
            "negative" => Some(SignRequirement::Negative),
            "nonnegative" => Some(SignRequirement::Nonnegative),
            "nonpositive" => Some(SignRequirement::Nonpositive),
            _ => None,
        }
    }

    pub fn admits(self, v: &Rational) -> bool {
        match self {
            SignRequirement::Positive => v.is_positive(),
            SignRequirement::Negative => v.is_negative(),
            SignRequirement::Nonnegative => !v.is_negative(),
            SignRequirement::Nonpositive => !v.is_positive(),
        }
    }

    /// `true` for the non-negative side, `false` for the non-positive side.
    fn orientation(self) -> bool {
        matches!(self, SignRequirement::Positive | SignRequirement::Nonnegative)
    }
}

/// A constraint on the edge variables, edges referenced by declaration index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Equal(usize, usize),
    Fixed(usize, BlockWeight),
    Sign(usize, SignRequirement),
}

/// Fixed topology with one symbolic `d × d` block per declared edge.
///
/// Variable `e·d² + a·d + b` is entry `(a, b)` of the block of edge `e` in its
/// declared orientation. For undirected patterns the reverse block is derived
/// through the symmetry convention, so it is a relabeling of the same variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPattern {
    n: usize,
    d: usize,
    symmetry: Symmetry,
    leaders: Vec<usize>,
    edges: Vec<(usize, usize)>,
    names: Vec<String>,
    constraints: Vec<Constraint>,
    lookup: HashMap<(usize, usize), usize>,
}

impl WeightPattern {
    pub fn new(
        n: usize,
        d: usize,
        symmetry: Symmetry,
        edges: Vec<(usize, usize)>,
        names: Option<Vec<String>>,
        constraints: Vec<Constraint>,
        leaders: Vec<usize>,
    ) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidPattern("n and d must be at least 1".into()));
        }
        let mut lookup = HashMap::new();
        for (e, &(i, j)) in edges.iter().enumerate() {
            check_node(i, n)?;
            check_node(j, n)?;
            if i == j {
                return Err(Error::InvalidPattern(format!("self-loop at node {}", i + 1)));
            }
            let mut keys = vec![(i, j)];
            if symmetry != Symmetry::None {
                keys.push((j, i));
            }
            for key in keys {
                if lookup.insert(key, e).is_some() {
                    return Err(Error::InvalidPattern(format!(
                        "edge ({},{}) declared twice",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let names = names.unwrap_or_else(|| {
            edges
                .iter()
                .map(|&(i, j)| default_variable_name(i, j))
                .collect()
        });
        if names.len() != edges.len() {
            return Err(Error::InvalidPattern(format!(
                "{} variable names for {} edges",
                names.len(),
                edges.len()
            )));
        }
        let mut seen = BTreeMap::new();
        for name in &names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(Error::InvalidPattern(format!("variable '{name}' declared twice")));
            }
        }
        for c in &constraints {
            match c {
                Constraint::Equal(a, b) => {
                    check_edge(*a, edges.len())?;
                    check_edge(*b, edges.len())?;
                }
                Constraint::Fixed(e, w) => {
                    check_edge(*e, edges.len())?;
                    if w.d() != d {
                        return Err(Error::DimensionMismatch {
                            context: "fixed constraint",
                            expected: format!("{d}x{d}"),
                            found: format!("{0}x{0}", w.d()),
                        });
                    }
                }
                Constraint::Sign(e, _) => check_edge(*e, edges.len())?,
            }
        }
        // Reuse graph validation for the leader set.
        MatrixWeightedGraph::new(n, 1, Symmetry::None, std::iter::empty(), leaders.clone())?;
        Ok(WeightPattern {
            n,
            d,
            symmetry,
            leaders,
            edges,
            names,
            constraints,
            lookup,
        })
    }

    /// Free pattern over the topology of `g`; its weights are discarded.
    pub fn from_topology(g: &MatrixWeightedGraph) -> Self {
        let edges = g.edges().map(|(i, j, _)| (i, j)).collect();
        WeightPattern::new(
            g.n(),
            g.d(),
            g.symmetry(),
            edges,
            None,
            Vec::new(),
            g.leaders().to_vec(),
        )
        .expect("topology of a valid graph is a valid pattern")
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

    pub fn followers(&self) -> Vec<usize> {
        (0..self.n).filter(|v| !self.leaders.contains(v)).collect()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.lookup.get(&(i, j)).copied()
    }

    pub fn variable_count(&self) -> usize {
        self.edges.len() * self.d * self.d
    }

    /// Variable indices of the `d²` entries of edge `e` in row-major order.
    pub fn edge_variables(&self, e: usize) -> std::ops::Range<usize> {
        let dd = self.d * self.d;
        e * dd..(e + 1) * dd
    }

    /// Variable index of entry `(a, b)` of the weight `r` sees toward `t`, or
    /// `None` when there is no such edge. Out: `A_rt`. In: `A_trᵀ`.
    pub fn coordinates(&self, r: usize, t: usize, direction: Direction) -> Option<Vec<usize>> {
        let d = self.d;
        let (from, to, transposed) = match direction {
            Direction::Out => (r, t, false),
            Direction::In => (t, r, true),
        };
        let e = self.edge_index(from, to)?;
        let declared = self.edges[e] == (from, to);
        let flip = transposed ^ (!declared && self.symmetry == Symmetry::Transpose);
        let base = e * d * d;
        Some(
            (0..d)
                .flat_map(|a| (0..d).map(move |b| (a, b)))
                .map(|(a, b)| if flip { base + b * d + a } else { base + a * d + b })
                .collect(),
        )
    }

    /// Nodes `t` such that `r` sees an edge toward `t`.
    pub fn neighbors(&self, r: usize, direction: Direction) -> Vec<usize> {
        (0..self.n)
            .filter(|&t| t != r && self.coordinates(r, t, direction).is_some())
            .collect()
    }

    /// Linear equations (`coefficients · x = rhs`) from equality and fixed constraints.
    pub fn constraint_equations(&self) -> Vec<(Vec<Rational>, Rational)> {
        let vars = self.variable_count();
        let mut out = Vec::new();
        for c in &self.constraints {
            match c {
                Constraint::Equal(e, f) => {
                    for (x, y) in self.edge_variables(*e).zip(self.edge_variables(*f)) {
                        let mut row = vec![Rational::zero(); vars];
                        row[x] += Rational::one();
                        row[y] -= Rational::one();
                        out.push((row, Rational::zero()));
                    }
                }
                Constraint::Fixed(e, w) => {
                    let values = w.matrix().to_rows().into_iter().flatten();
                    for (x, v) in self.edge_variables(*e).zip(values) {
                        let mut row = vec![Rational::zero(); vars];
                        row[x] = Rational::one();
                        out.push((row, v));
                    }
                }
                Constraint::Sign(..) => {}
            }
        }
        out
    }

    pub fn sign_requirements(&self, e: usize) -> impl Iterator<Item = SignRequirement> + '_ {
        self.constraints.iter().filter_map(move |c| match c {
            Constraint::Sign(edge, s) if *edge == e => Some(*s),
            _ => None,
        })
    }

    /// First edge whose block is all-zero or breaks a sign requirement.
    pub fn first_violation(&self, values: &[Rational]) -> Option<usize> {
        (0..self.edges.len()).find(|&e| {
            let block = &values[self.edge_variables(e)];
            block.iter().all(Zero::is_zero)
                || self
                    .sign_requirements(e)
                    .any(|s| !block.iter().all(|v| s.admits(v)))
        })
    }

    /// True when every node's incident edges (as seen in `direction`) carry
    /// sign requirements of one common orientation, so no block sum of
    /// nonzero weights can cancel to zero.
    pub fn forbids_cancellation(&self, direction: Direction) -> bool {
        let orientation = |e: usize| -> Option<bool> {
            let mut it = self.sign_requirements(e).map(SignRequirement::orientation);
            let first = it.next()?;
            it.all(|o| o == first).then_some(first)
        };
        (0..self.n).all(|r| {
            let mut seen: Option<bool> = None;
            self.neighbors(r, direction).into_iter().all(|t| {
                let from_to = match direction {
                    Direction::Out => (r, t),
                    Direction::In => (t, r),
                };
                let e = self.edge_index(from_to.0, from_to.1).expect("neighbor has an edge");
                match (orientation(e), seen) {
                    (None, _) => false,
                    (Some(o), None) => {
                        seen = Some(o);
                        true
                    }
                    (Some(o), Some(s)) => o == s,
                }
            })
        })
    }

    /// Concrete graph from a full variable assignment.
    pub fn assemble(&self, values: &[Rational]) -> Result<MatrixWeightedGraph> {
        if values.len() != self.variable_count() {
            return Err(Error::DimensionMismatch {
                context: "weight assignment",
                expected: self.variable_count().to_string(),
                found: values.len().to_string(),
            });
        }
        let d = self.d;
        let edges = self.edges.iter().enumerate().map(|(e, &(i, j))| {
            let block = values[self.edge_variables(e)].to_vec();
            let rows = block.chunks(d).map(<[Rational]>::to_vec).collect();
            (i, j, BlockWeight(Matrix::from_rows(rows).expect("square block")))
        });
        MatrixWeightedGraph::new(self.n, d, self.symmetry, edges, self.leaders.clone())
    }
}

pub(crate) fn default_variable_name(i: usize, j: usize) -> String {
    format!("a{}_{}", i + 1, j + 1)
}

fn check_edge(e: usize, count: usize) -> Result<()> {
    if e >= count {
        Err(Error::InvalidPattern(format!("constraint references unknown edge #{e}")))
    } else {
        Ok(())
    }
}
