use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::rational::Rational;

/// Singular values below this fraction of the largest one count as zero.
pub const FLOAT_RELATIVE_THRESHOLD: f64 = 1e-9;

/// How matrix ranks are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankBackend {
    /// Fraction-free integer elimination. Certifying.
    #[default]
    Exact,
    /// SVD in `f64` with a relative threshold. Exploratory only; never certifying.
    Float,
}

impl RankBackend {
    pub fn is_certifying(self) -> bool {
        matches!(self, RankBackend::Exact)
    }

    pub fn name(self) -> &'static str {
        match self {
            RankBackend::Exact => "exact",
            RankBackend::Float => "float",
        }
    }
}

impl std::str::FromStr for RankBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(RankBackend::Exact),
            "float" => Ok(RankBackend::Float),
            other => Err(format!("unknown rank backend '{other}' (expected exact|float)")),
        }
    }
}

/// Scales a rational vector to a primitive integer vector with the same span.
pub(crate) fn primitive(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    make_primitive(ints)
}

pub(crate) fn primitive_rational(values: &[Rational]) -> Vec<Rational> {
    primitive(values)
        .into_iter()
        .map(Rational::from_integer)
        .collect()
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Rank by Bareiss fraction-free elimination on the row-integerized matrix.
pub fn bareiss_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| primitive(m.row(i))).collect();
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    let rows = a.len();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Numerical rank from singular values (threshold relative to the largest).
pub fn float_rank(m: &Matrix) -> usize {
    singular_value_rank(&m.to_f64())
}

pub fn singular_value_rank(m: &nalgebra::DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter()
        .filter(|&&s| s > FLOAT_RELATIVE_THRESHOLD * largest)
        .count()
}

pub fn rank(m: &Matrix) -> usize {
    bareiss_rank(m)
}

pub fn rank_with(m: &Matrix, backend: RankBackend) -> usize {
    match backend {
        RankBackend::Exact => bareiss_rank(m),
        RankBackend::Float => float_rank(m),
    }
}

/// `im(inner) ⊆ im(outer)`, decided by `rank([outer | inner]) == rank(outer)`.
pub fn subspace_contains(outer: &Matrix, inner: &Matrix) -> bool {
    let joined = outer.hcat(inner).expect("column spaces in the same ambient space");
    rank(&joined) == rank(outer)
}

/// Mutual containment of column spaces.
pub fn spans_equal(a: &Matrix, b: &Matrix) -> bool {
    subspace_contains(a, b) && subspace_contains(b, a)
}

/// Incrementally maintained echelon basis over the integers.
///
/// Each stored row is primitive and vanishes at the pivots of every row stored
/// before it, so reducing a candidate against the rows in insertion order
/// leaves it zero at all pivots.
#[derive(Debug, Clone)]
pub struct Echelon {
    len: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of what is stored; returns whether it was.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut w = primitive(v);
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let a = row[*pivot].clone();
            let b = w[*pivot].clone();
            for (x, y) in w.iter_mut().zip(row) {
                *x = &a * &*x - &b * y;
            }
            w = make_primitive(w);
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                if w[pivot].is_negative() {
                    w.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows.push((pivot, w));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut probe = self.clone();
        !probe.insert(v)
    }
}
