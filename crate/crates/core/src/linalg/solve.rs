use num::{One, Zero};

use crate::rational::Rational;

/// Solution set `{ particular + Σ tᵢ·basisᵢ }` of a consistent linear system.
///
/// The basis is indexed by free variables: `basis[k]` has a 1 at
/// `free_vars[k]` and 0 at every other free variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSpace {
    pub particular: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
    pub free_vars: Vec<usize>,
}

impl AffineSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True iff coordinate `k` is the same constant zero at every point.
    pub fn coordinate_vanishes(&self, k: usize) -> bool {
        self.particular[k].is_zero() && self.basis.iter().all(|b| b[k].is_zero())
    }

    /// Point with the given free-variable values.
    pub fn point(&self, coefficients: &[Rational]) -> Vec<Rational> {
        assert_eq!(coefficients.len(), self.basis.len());
        let mut x = self.particular.clone();
        for (t, b) in coefficients.iter().zip(&self.basis) {
            if t.is_zero() {
                continue;
            }
            for (xi, bi) in x.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *xi += t * bi;
                }
            }
        }
        x
    }
}

/// Solves `A x = b` by reduced row echelon form. `None` when inconsistent.
pub fn solve_affine(
    vars: usize,
    equations: &[(Vec<Rational>, Rational)],
) -> Option<AffineSpace> {
    let mut rows: Vec<Vec<Rational>> = equations
        .iter()
        .map(|(coeffs, rhs)| {
            assert_eq!(coeffs.len(), vars);
            let mut row = coeffs.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..vars {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[vars].is_zero()) {
        return None;
    }
    let is_pivot = {
        let mut flags = vec![false; vars];
        for &c in &pivots {
            flags[c] = true;
        }
        flags
    };
    let mut particular = vec![Rational::zero(); vars];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][vars].clone();
    }
    let free_vars: Vec<usize> = (0..vars).filter(|&c| !is_pivot[c]).collect();
    let basis = free_vars
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); vars];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSpace {
        particular,
        basis,
        free_vars,
    })
}
