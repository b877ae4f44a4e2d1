//! Brute-force oracle: algebra elements as exact matrices on finite
//! hereditary subsets of the cone.
//!
//! A [`Truncation`] fixes an ordered hereditary set `S` and identifies
//! `span{ε_t : t ∈ S}` with column vectors. Isometries never preserve a
//! finite truncation, so columns whose image leaves `S` are recorded in an
//! escape set and excluded from product comparisons rather than padded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::monoid::{Elem, Monoid};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

/// An ordered finite hereditary subset of the cone with its index map.
#[derive(Debug, Clone)]
pub struct Truncation {
    monoid: Monoid,
    elements: Vec<Elem>,
    index: BTreeMap<Elem, usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TruncationError {
    #[error("set is not hereditary: {below} ≤ {element} is missing")]
    NotHereditary { element: String, below: String },
    #[error("truncation sets must be nonempty")]
    Empty,
}

impl Truncation {
    /// Validates hereditarity: every lower bound of a member (within the
    /// enumerable universe of the instance) must itself be a member.
    pub fn new(monoid: Monoid, elements: Vec<Elem>) -> Result<Truncation, TruncationError> {
        if elements.is_empty() {
            return Err(TruncationError::Empty);
        }
        let set: BTreeSet<&Elem> = elements.iter().collect();
        for t in &elements {
            monoid.check(t);
            for s in monoid.lower_set(t) {
                if !set.contains(&s) {
                    return Err(TruncationError::NotHereditary {
                        element: t.to_string(),
                        below: s.to_string(),
                    });
                }
            }
        }
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        Ok(Truncation {
            monoid,
            elements,
            index,
        })
    }

    /// The full ball of the given radius.
    pub fn ball(monoid: Monoid, radius: u32) -> Truncation {
        Truncation::new(monoid, monoid.enumerate_ball(radius)).expect("balls are hereditary")
    }

    /// The first `k` elements of the radius ball; prefixes of the canonical
    /// order are hereditary.
    pub fn ball_prefix(monoid: Monoid, radius: u32, k: usize) -> Truncation {
        let ball = monoid.enumerate_ball(radius);
        assert!(k >= 1 && k <= ball.len(), "prefix size out of range");
        Truncation::new(monoid, ball[..k].to_vec()).expect("ball prefixes are hereditary")
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Dense matrix over the Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    /// The matrix unit `ε_col ↦ ε_row`.
    pub fn unit(n: usize, row: usize, col: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zero(n, n);
        *m.at_mut(row, col) = Scalar::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.entries[r * self.cols + c]
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ExactMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let sum = &*out.at(i, j) + &(a * b);
                    *out.at_mut(i, j) = sum;
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).conj();
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Row-major dump with exact rational entries.
    pub fn dump(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).to_string()).collect())
            .collect()
    }

    /// Rank by Gaussian elimination; exact, destructive on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            let inv = m.at(rank, col).inv();
            for c in col..m.cols {
                let v = &*m.at(rank, c) * &inv;
                *m.at_mut(rank, c) = v;
            }
            for r in 0..m.rows {
                if r != rank && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = &*m.at(r, c) - &(&factor * m.at(rank, c));
                        *m.at_mut(r, c) = v;
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Least-structure solve of `self · x = rhs`: returns any exact
    /// solution, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.rows, "dimension mismatch");
        let mut m = ExactMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *m.at_mut(r, c) = self.at(r, c).clone();
            }
            *m.at_mut(r, self.cols) = rhs[r].clone();
        }
        let mut pivots: Vec<(usize, usize)> = vec![];
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m.at(rank, col).inv();
            for c in col..=self.cols {
                let v = &*m.at(rank, c) * &inv;
                *m.at_mut(rank, c) = v;
            }
            for r in 0..self.rows {
                if r != rank && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..=self.cols {
                        let v = &*m.at(r, c) - &(&factor * m.at(rank, c));
                        *m.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        // Inconsistent when a zero row has nonzero right-hand side.
        for r in rank..self.rows {
            if !m.at(r, self.cols).is_zero() {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, c) in pivots {
            x[c] = m.at(r, self.cols).clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An algebra element materialized on a truncation, with the columns whose
/// orbit left the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedOperator {
    pub matrix: ExactMatrix,
    /// Column indices `t` where some monomial sent `t` outside the set.
    pub escapes: BTreeSet<usize>,
}

/// Materialize `x` on `S`: the monomial action on each basis column, with
/// out-of-set images recorded as escapes.
pub fn truncate(x: &AlgebraElement, s: &Truncation) -> TruncatedOperator {
    assert_eq!(*x.monoid(), *s.monoid(), "instance mismatch");
    let n = s.len();
    let mut matrix = ExactMatrix::zero(n, n);
    let mut escapes = BTreeSet::new();
    for (col, t) in s.elements().iter().enumerate() {
        for (m, coeff) in x.terms() {
            match m.apply(t, s.monoid()) {
                Some(u) => match s.index_of(&u) {
                    Some(row) => {
                        let v = &*matrix.at(row, col) + coeff;
                        *matrix.at_mut(row, col) = v;
                    }
                    None => {
                        escapes.insert(col);
                    }
                },
                None => {}
            }
        }
    }
    TruncatedOperator { matrix, escapes }
}

/// Escape-aware product comparison: columns whose full two-step orbit
/// stays inside the set must agree between the symbolic product and the
/// matrix product, and the symbolic product must not escape there either.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDisagreement {
    pub column: String,
    pub symbolic: Vec<String>,
    pub matrix_product: Vec<String>,
}

pub fn verify_against_matrices(
    x: &AlgebraElement,
    y: &AlgebraElement,
    s: &Truncation,
) -> Result<u64, OracleDisagreement> {
    let tx = truncate(x, s);
    let ty = truncate(y, s);
    let txy = truncate(&(x * y), s);
    let product = tx.matrix.mul(&ty.matrix);
    let mut valid_columns = 0;
    for col in 0..s.len() {
        if ty.escapes.contains(&col) {
            continue;
        }
        // The first stage stayed inside; the second stage must too.
        let intermediate_escape = y
            .terms()
            .filter_map(|(m, _)| m.apply(&s.elements()[col], s.monoid()))
            .any(|u| {
                let Some(_) = s.index_of(&u) else { return true };
                x.terms()
                    .filter_map(|(m, _)| m.apply(&u, s.monoid()))
                    .any(|w| s.index_of(&w).is_none())
            });
        if intermediate_escape {
            continue;
        }
        valid_columns += 1;
        let sym = txy.matrix.column(col);
        let prod = product.column(col);
        if sym != prod || txy.escapes.contains(&col) {
            return Err(OracleDisagreement {
                column: s.elements()[col].to_string(),
                symbolic: sym.iter().map(|v| v.to_string()).collect(),
                matrix_product: prod.iter().map(|v| v.to_string()).collect(),
            });
        }
    }
    Ok(valid_columns)
}

/// Dimension of `{M : M commutes with every truncated V(p,p), p ∈ S}`,
/// solved as an exact linear system in the `n²` matrix entries. The
/// expected value is `|S|`: only the diagonal survives.
pub fn diagonal_commutant_dimension(s: &Truncation) -> usize {
    let n = s.len();
    let mut diagonals: Vec<Vec<bool>> = vec![];
    for p in s.elements() {
        let d = truncate(
            &AlgebraElement::from_monomial(*s.monoid(), Monomial::range_projection(p.clone())),
            s,
        );
        diagonals.push((0..n).map(|i| d.matrix.at(i, i).is_one()).collect());
    }
    // Each commutator entry [M, D_p]_{ij} = M_ij (d_j − d_i) yields one row
    // in the constraint system; zero rows are dropped before elimination.
    let mut rows: Vec<Vec<Scalar>> = vec![];
    for d in &diagonals {
        for i in 0..n {
            for j in 0..n {
                if d[i] != d[j] {
                    let mut row = vec![Scalar::zero(); n * n];
                    row[i * n + j] = if d[j] { Scalar::one() } else { -Scalar::one() };
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return n * n;
    }
    let mut constraint = ExactMatrix::zero(rows.len(), n * n);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.is_zero() {
                *constraint.at_mut(r, c) = v.clone();
            }
        }
    }
    n * n - constraint.rank()
}
