//! The network document: JSON with 1-based node indices and rationals as
//! `"p/q"` strings (integers and finite decimals are also accepted).

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::pattern::default_variable_name;
use super::{BlockWeight, Constraint, MatrixWeightedGraph, SignRequirement, Symmetry, WeightPattern};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{format_rational, parse_rational, Rational};

/// A parsed document: concrete weights or a symbolic pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Network {
    Graph(MatrixWeightedGraph),
    Pattern(WeightPattern),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    kind: Option<String>,
    n: usize,
    #[serde(default = "one")]
    d: usize,
    #[serde(default)]
    directed: bool,
    #[serde(default)]
    symmetry: Option<String>,
    leaders: Vec<usize>,
    #[serde(default)]
    edges: Vec<RawEdge>,
    #[serde(default)]
    variables: Option<Vec<RawVariable>>,
    #[serde(default)]
    constraints: Option<Vec<RawConstraint>>,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    i: usize,
    j: usize,
    #[serde(default)]
    weight: Option<Value>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    edge: [usize; 2],
    name: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    kind: String,
    args: Vec<Value>,
}

/// Parses and validates a network document.
pub fn parse_network(text: &str) -> Result<Network> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;

    let symmetry = match (raw.directed, raw.symmetry.as_deref()) {
        (true, None | Some("none")) => Symmetry::None,
        (true, Some(other)) => {
            return Err(Error::parse(
                "symmetry",
                format!("directed graphs take no symmetry convention, got '{other}'"),
            ))
        }
        (false, None | Some("entrywise")) => Symmetry::Entrywise,
        (false, Some("transpose")) => Symmetry::Transpose,
        (false, Some(other)) => {
            return Err(Error::parse(
                "symmetry",
                format!("expected entrywise|transpose for an undirected graph, got '{other}'"),
            ))
        }
    };
    if raw.n == 0 {
        return Err(Error::parse("n", "must be at least 1"));
    }
    if raw.d == 0 {
        return Err(Error::parse("d", "must be at least 1"));
    }
    let node = |v: usize, at: &str| -> Result<usize> {
        if v == 0 || v > raw.n {
            Err(Error::parse(at, format!("node {v} out of range 1..={}", raw.n)))
        } else {
            Ok(v - 1)
        }
    };
    let leaders = raw
        .leaders
        .iter()
        .enumerate()
        .map(|(k, &l)| node(l, &format!("leaders[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    if leaders.is_empty() {
        return Err(Error::parse("leaders", "leader set is empty"));
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut seen = std::collections::HashSet::new();
    for (k, e) in raw.edges.iter().enumerate() {
        let i = node(e.i, &format!("edges[{k}].i"))?;
        let j = node(e.j, &format!("edges[{k}].j"))?;
        if i == j {
            return Err(Error::parse(format!("edges[{k}]"), format!("self-loop at node {}", e.i)));
        }
        let key = if symmetry == Symmetry::None { (i, j) } else { (i.min(j), i.max(j)) };
        if !seen.insert(key) {
            return Err(Error::parse(format!("edges[{k}]"), "edge declared twice"));
        }
        edges.push((i, j));
    }

    let is_pattern = match raw.kind.as_deref() {
        Some("graph") => false,
        Some("pattern") => true,
        Some(other) => {
            return Err(Error::parse("kind", format!("expected graph|pattern, got '{other}'")))
        }
        None => {
            raw.variables.is_some()
                || raw.constraints.is_some()
                || raw.edges.iter().any(|e| e.weight.is_none())
        }
    };

    if !is_pattern {
        if raw.variables.is_some() || raw.constraints.is_some() {
            return Err(Error::parse("kind", "graph documents take no variables or constraints"));
        }
        let mut weighted = Vec::with_capacity(edges.len());
        for (k, (e, &(i, j))) in raw.edges.iter().zip(&edges).enumerate() {
            let at = format!("edges[{k}].weight");
            let value = e.weight.as_ref().ok_or_else(|| Error::parse(&at, "missing weight"))?;
            let w = parse_block(value, raw.d, &at)?;
            if w.is_zero() {
                return Err(Error::parse(at, "weight of a declared edge is all zero"));
            }
            weighted.push((i, j, w));
        }
        let g = MatrixWeightedGraph::new(raw.n, raw.d, symmetry, weighted, leaders)
            .map_err(|e| relocate(e, "leaders"))?;
        return Ok(Network::Graph(g));
    }

    if let Some(k) = raw.edges.iter().position(|e| e.weight.is_some()) {
        return Err(Error::parse(
            format!("edges[{k}].weight"),
            "pattern edges are symbolic; pin values with a 'fixed' constraint",
        ));
    }
    let mut names: Vec<Option<String>> = vec![None; edges.len()];
    for (k, v) in raw.variables.iter().flatten().enumerate() {
        let at = format!("variables[{k}]");
        let i = node(v.edge[0], &at)?;
        let j = node(v.edge[1], &at)?;
        let e = find_edge(&edges, symmetry, i, j)
            .ok_or_else(|| Error::parse(&at, format!("no edge ({},{})", v.edge[0], v.edge[1])))?;
        if names[e].replace(v.name.clone()).is_some() {
            return Err(Error::parse(at, "edge already has a variable"));
        }
    }
    let names: Vec<String> = names
        .into_iter()
        .zip(&edges)
        .map(|(name, &(i, j))| name.unwrap_or_else(|| default_variable_name(i, j)))
        .collect();
    let by_name = |name: &Value, at: &str| -> Result<usize> {
        let s = name
            .as_str()
            .ok_or_else(|| Error::parse(at, "expected a variable name"))?;
        names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::parse(at, format!("unknown variable '{s}'")))
    };
    let mut constraints = Vec::new();
    for (k, c) in raw.constraints.iter().flatten().enumerate() {
        let at = format!("constraints[{k}]");
        let arity = |want: usize| -> Result<()> {
            if c.args.len() == want {
                Ok(())
            } else {
                Err(Error::parse(&at, format!("'{}' takes {want} args", c.kind)))
            }
        };
        let constraint = match c.kind.as_str() {
            "equal" => {
                arity(2)?;
                Constraint::Equal(
                    by_name(&c.args[0], &format!("{at}.args[0]"))?,
                    by_name(&c.args[1], &format!("{at}.args[1]"))?,
                )
            }
            "fixed" => {
                arity(2)?;
                let e = by_name(&c.args[0], &format!("{at}.args[0]"))?;
                let w = parse_block(&c.args[1], raw.d, &format!("{at}.args[1]"))?;
                if w.is_zero() {
                    return Err(Error::parse(format!("{at}.args[1]"), "fixed weight is all zero"));
                }
                Constraint::Fixed(e, w)
            }
            "sign" => {
                arity(2)?;
                let e = by_name(&c.args[0], &format!("{at}.args[0]"))?;
                let s = c.args[1]
                    .as_str()
                    .and_then(SignRequirement::parse)
                    .ok_or_else(|| {
                        Error::parse(
                            format!("{at}.args[1]"),
                            "expected positive|negative|nonnegative|nonpositive",
                        )
                    })?;
                Constraint::Sign(e, s)
            }
            other => {
                return Err(Error::parse(
                    format!("{at}.kind"),
                    format!("expected equal|fixed|sign, got '{other}'"),
                ))
            }
        };
        constraints.push(constraint);
    }
    let p = WeightPattern::new(raw.n, raw.d, symmetry, edges, Some(names), constraints, leaders)
        .map_err(|e| relocate(e, "pattern"))?;
    Ok(Network::Pattern(p))
}

fn find_edge(edges: &[(usize, usize)], symmetry: Symmetry, i: usize, j: usize) -> Option<usize> {
    edges
        .iter()
        .position(|&e| e == (i, j) || (symmetry != Symmetry::None && e == (j, i)))
}

fn relocate(e: Error, location: &str) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(location, other.to_string()),
    }
}

fn parse_scalar(v: &Value, at: &str) -> Result<Rational> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(num) => parse_rational(&num.to_string()),
        _ => None,
    };
    parsed.ok_or_else(|| Error::parse(at, format!("expected a rational, got {v}")))
}

/// A `d × d` nested array; a bare scalar is accepted when `d = 1`.
fn parse_block(v: &Value, d: usize, at: &str) -> Result<BlockWeight> {
    if d == 1 && !v.is_array() {
        return Ok(BlockWeight::scalar(parse_scalar(v, at)?));
    }
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse(at, format!("expected a {d}x{d} array")))?;
    if rows.len() != d {
        return Err(Error::parse(at, format!("expected {d} rows, got {}", rows.len())));
    }
    let mut out = Vec::with_capacity(d);
    for (r, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::parse(format!("{at}[{r}]"), "expected an array row"))?;
        if cells.len() != d {
            return Err(Error::parse(
                format!("{at}[{r}]"),
                format!("expected {d} entries, got {}", cells.len()),
            ));
        }
        out.push(
            cells
                .iter()
                .enumerate()
                .map(|(c, x)| parse_scalar(x, &format!("{at}[{r}][{c}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    BlockWeight::new(Matrix::from_rows(out)?)
}

pub(crate) fn block_json(w: &Matrix) -> Value {
    Value::Array(
        w.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(format_rational(x))).collect()))
            .collect(),
    )
}

fn header(kind: &str, n: usize, d: usize, symmetry: Symmetry, leaders: &[usize]) -> serde_json::Map<String, Value> {
    let mut doc = serde_json::Map::new();
    doc.insert("kind".into(), json!(kind));
    doc.insert("n".into(), json!(n));
    doc.insert("d".into(), json!(d));
    doc.insert("directed".into(), json!(symmetry == Symmetry::None));
    if symmetry != Symmetry::None {
        doc.insert("symmetry".into(), json!(symmetry.name()));
    }
    doc.insert(
        "leaders".into(),
        json!(leaders.iter().map(|l| l + 1).collect::<Vec<_>>()),
    );
    doc
}

/// Canonical JSON form of a network.
pub fn to_document(network: &Network) -> String {
    let doc = match network {
        Network::Graph(g) => {
            let mut doc = header("graph", g.n(), g.d(), g.symmetry(), g.leaders());
            let edges: Vec<Value> = g
                .edges()
                .map(|(i, j, w)| json!({"i": i + 1, "j": j + 1, "weight": block_json(w.matrix())}))
                .collect();
            doc.insert("edges".into(), Value::Array(edges));
            doc
        }
        Network::Pattern(p) => {
            let mut doc = header("pattern", p.n(), p.d(), p.symmetry(), p.leaders());
            let edges: Vec<Value> = p.edges().iter().map(|&(i, j)| json!({"i": i + 1, "j": j + 1})).collect();
            let variables: Vec<Value> = p
                .edges()
                .iter()
                .zip(p.names())
                .map(|(&(i, j), name)| json!({"edge": [i + 1, j + 1], "name": name}))
                .collect();
            let name = |e: &usize| json!(p.names()[*e]);
            let constraints: Vec<Value> = p
                .constraints()
                .iter()
                .map(|c| match c {
                    Constraint::Equal(a, b) => json!({"kind": "equal", "args": [name(a), name(b)]}),
                    Constraint::Fixed(e, w) => {
                        json!({"kind": "fixed", "args": [name(e), block_json(w.matrix())]})
                    }
                    Constraint::Sign(e, s) => json!({"kind": "sign", "args": [name(e), s.name()]}),
                })
                .collect();
            doc.insert("edges".into(), Value::Array(edges));
            doc.insert("variables".into(), Value::Array(variables));
            doc.insert("constraints".into(), Value::Array(constraints));
            doc
        }
    };
    serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize")
}
