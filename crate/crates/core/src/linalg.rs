//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sorted `(column, value)` lists without zero entries. Spans are
//! built by fraction-free elimination on primitive integer rows and only
//! converted to rationals once the reduced row-echelon form is fixed.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::LinalgError;
use crate::Rational;

/// Sorted sparse rational vector.
pub type SparseVec = Vec<(usize, Rational)>;

/// Build a sparse vector from a dense slice.
pub fn sparse_from_dense(dense: &[Rational]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Collect arbitrary `(column, value)` pairs into canonical sparse form.
pub fn normalize_sparse(entries: impl IntoIterator<Item = (usize, Rational)>) -> SparseVec {
    let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, v) in entries {
        *map.entry(i).or_insert_with(Rational::zero) += v;
    }
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `a + c * b` for sparse vectors.
pub fn axpy(a: &SparseVec, c: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

type IntRow = Vec<(usize, BigInt)>;

fn lcm_of_denominators(v: &SparseVec) -> BigInt {
    v.iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()))
}

/// Scale to a primitive integer row with positive leading entry.
fn to_primitive(v: &SparseVec) -> IntRow {
    let l = lcm_of_denominators(v);
    let mut row: IntRow = v
        .iter()
        .map(|(i, x)| (*i, x.numer() * (&l / x.denom())))
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, x) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(x);
    }
    let flip = first.1.is_negative();
    if !g.is_one() || flip {
        if flip {
            g = -g;
        }
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a * v - b * p`, dropping zeros.
fn cross_eliminate(a: &BigInt, v: &IntRow, b: &BigInt, p: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        if j >= p.len() || (i < v.len() && v[i].0 < p[j].0) {
            out.push((v[i].0, a * &v[i].1));
            i += 1;
        } else if i >= v.len() || p[j].0 < v[i].0 {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let x = a * &v[i].1 - b * &p[j].1;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Eliminate the entry of `v` at `p`'s leading column.
fn eliminate_with(v: &IntRow, entry: &BigInt, p: &IntRow) -> IntRow {
    let lead = &p[0].1;
    let g = lead.gcd(entry);
    let mut out = cross_eliminate(&(lead / &g), v, &(entry / &g), p);
    make_primitive(&mut out);
    out
}

/// Incremental fraction-free echelon builder.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    ncols: usize,
    by_pivot: Vec<Option<IntRow>>,
    rank: usize,
}

impl EchelonBuilder {
    pub fn new(ncols: usize) -> Self {
        EchelonBuilder {
            ncols,
            by_pivot: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn check(&self, v: &SparseVec) -> Result<(), LinalgError> {
        match v.last() {
            Some((i, _)) if *i >= self.ncols => Err(LinalgError::DimensionMismatch {
                expected: self.ncols,
                found: i + 1,
            }),
            _ => Ok(()),
        }
    }

    /// Add `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Result<bool, LinalgError> {
        self.check(v)?;
        let mut row = to_primitive(v);
        while let Some((lead, val)) = row.first().cloned() {
            match &self.by_pivot[lead] {
                Some(p) => row = eliminate_with(&row, &val, p),
                None => {
                    self.by_pivot[lead] = Some(row);
                    self.rank += 1;
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Reduced row-echelon form with unit pivots.
    pub fn finish<T>(mut self, ambient: Arc<Vec<T>>) -> SpanBasis<T> {
        assert_eq!(
            ambient.len(),
            self.ncols,
            "ambient does not match column count"
        );
        let pivots: Vec<usize> = (0..self.ncols)
            .filter(|&c| self.by_pivot[c].is_some())
            .collect();
        // Back-substitute from the last pivot upwards; rows below are already
        // reduced, so each elimination introduces no new pivot entries.
        for &c in pivots.iter().rev() {
            let mut row = self.by_pivot[c].take().expect("pivot row");
            loop {
                let next = row
                    .iter()
                    .skip(1)
                    .find(|(col, _)| self.by_pivot[*col].is_some())
                    .map(|(col, x)| (*col, x.clone()));
                let Some((col, x)) = next else { break };
                let p = self.by_pivot[col].as_ref().unwrap();
                row = eliminate_with(&row, &x, p);
            }
            self.by_pivot[c] = Some(row);
        }
        let rows: Vec<SparseVec> = pivots
            .iter()
            .map(|&c| {
                let row = self.by_pivot[c].as_ref().unwrap();
                let lead = row[0].1.clone();
                row.iter()
                    .map(|(i, x)| (*i, Rational::new(x.clone(), lead.clone())))
                    .collect()
            })
            .collect();
        SpanBasis::from_rref(ambient, rows)
    }
}

/// Reduced row-echelon basis of a subspace of the span of `ambient`.
#[derive(Clone, Debug)]
pub struct SpanBasis<T> {
    ambient: Arc<Vec<T>>,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
    quotient_index: Vec<Option<usize>>,
}

impl<T> SpanBasis<T> {
    /// Trust `rows` to be in reduced row-echelon form with unit pivots.
    pub fn from_rref(ambient: Arc<Vec<T>>, rows: Vec<SparseVec>) -> Self {
        let ncols = ambient.len();
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        let mut row_of_col = vec![None; ncols];
        for (r, &c) in pivots.iter().enumerate() {
            row_of_col[c] = Some(r);
        }
        let mut quotient_index = vec![None; ncols];
        let mut k = 0;
        for (c, slot) in quotient_index.iter_mut().enumerate() {
            if row_of_col[c].is_none() {
                *slot = Some(k);
                k += 1;
            }
        }
        SpanBasis {
            ambient,
            rows,
            pivots,
            row_of_col,
            quotient_index,
        }
    }

    pub fn empty(ambient: Arc<Vec<T>>) -> Self {
        SpanBasis::from_rref(ambient, Vec::new())
    }

    pub fn ambient(&self) -> &Arc<Vec<T>> {
        &self.ambient
    }

    pub fn ncols(&self) -> usize {
        self.ambient.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Dimension of the ambient space modulo the span.
    pub fn quotient_dim(&self) -> usize {
        self.ncols() - self.rank()
    }

    /// Ambient columns that index the quotient coordinates.
    pub fn free_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ncols()).filter(|&c| self.row_of_col[c].is_none())
    }

    fn check(&self, v: &SparseVec) -> Result<(), LinalgError> {
        match v.last() {
            Some((i, _)) if *i >= self.ncols() => Err(LinalgError::DimensionMismatch {
                expected: self.ncols(),
                found: i + 1,
            }),
            _ => Ok(()),
        }
    }

    /// Canonical representative of `v` modulo the span, supported on free columns.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        self.check(v)?;
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, x) in v {
            match self.row_of_col[*c] {
                None => *acc.entry(*c).or_insert_with(Rational::zero) += x,
                Some(r) => {
                    for (c2, y) in self.rows[r].iter().skip(1) {
                        *acc.entry(*c2).or_insert_with(Rational::zero) -= x * y;
                    }
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }

    /// Coordinates of the class of `v`, indexed by position among free columns.
    pub fn quotient_coords(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        Ok(self
            .reduce(v)?
            .into_iter()
            .map(|(c, x)| (self.quotient_index[c].expect("free column"), x))
            .collect())
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.is_empty())
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_col[col].is_some()
    }
}

/// Reduced row-echelon basis of the span of `vectors`.
pub fn echelonize<T>(
    vectors: &[SparseVec],
    ambient: Arc<Vec<T>>,
) -> Result<SpanBasis<T>, LinalgError> {
    let mut b = EchelonBuilder::new(ambient.len());
    for v in vectors {
        b.insert(v)?;
    }
    Ok(b.finish(ambient))
}

/// Like [`echelonize`], also reporting which inputs were independent of
/// their predecessors.
pub fn echelonize_tracked<T>(
    vectors: &[SparseVec],
    ambient: Arc<Vec<T>>,
) -> Result<(SpanBasis<T>, Vec<usize>), LinalgError> {
    let mut b = EchelonBuilder::new(ambient.len());
    let mut kept = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if b.insert(v)? {
            kept.push(i);
        }
    }
    Ok((b.finish(ambient), kept))
}

/// Rank of a list of sparse vectors over `ncols` columns.
pub fn rank(vectors: &[SparseVec], ncols: usize) -> Result<usize, LinalgError> {
    let mut b = EchelonBuilder::new(ncols);
    for v in vectors {
        b.insert(v)?;
    }
    Ok(b.rank())
}

#[derive(Clone, Debug)]
struct TrackedRow {
    vec: SparseVec,
    combo: SparseVec,
}

/// Echelon form of a fixed list of columns that remembers how each basis row
/// was built, so targets in the span can be written back in terms of the
/// original columns.
///
/// Solutions are supported on the pivot columns only (the first maximal
/// independent subfamily in the given order); free columns get zero.
#[derive(Clone, Debug)]
pub struct PreimageSolver {
    ncols: usize,
    nrows: usize,
    by_lead: BTreeMap<usize, TrackedRow>,
    pivot_columns: Vec<usize>,
}

impl PreimageSolver {
    /// `columns[j]` are vectors of length `nrows`.
    pub fn new(columns: &[SparseVec], nrows: usize) -> Result<Self, LinalgError> {
        let mut s = PreimageSolver {
            ncols: columns.len(),
            nrows,
            by_lead: BTreeMap::new(),
            pivot_columns: Vec::new(),
        };
        for (j, col) in columns.iter().enumerate() {
            s.check(col)?;
            let (vec, combo) = s.reduce_tracked(col.clone(), vec![(j, Rational::one())]);
            if let Some((lead, val)) = vec.first().cloned() {
                let inv = val.recip();
                let scale = |v: SparseVec| -> SparseVec {
                    v.into_iter().map(|(i, x)| (i, x * &inv)).collect()
                };
                s.by_lead.insert(
                    lead,
                    TrackedRow {
                        vec: scale(vec),
                        combo: scale(combo),
                    },
                );
                s.pivot_columns.push(j);
            }
        }
        Ok(s)
    }

    fn check(&self, v: &SparseVec) -> Result<(), LinalgError> {
        match v.last() {
            Some((i, _)) if *i >= self.nrows => Err(LinalgError::DimensionMismatch {
                expected: self.nrows,
                found: i + 1,
            }),
            _ => Ok(()),
        }
    }

    fn reduce_tracked(&self, mut vec: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut cursor = 0;
        loop {
            let next = vec
                .iter()
                .find(|(c, _)| *c >= cursor && self.by_lead.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = next else { break };
            let row = &self.by_lead[&c];
            let neg = -x;
            vec = axpy(&vec, &neg, &row.vec);
            combo = axpy(&combo, &neg, &row.combo);
            cursor = c + 1;
        }
        (vec, combo)
    }

    pub fn rank(&self) -> usize {
        self.by_lead.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    /// Sparse coefficients `c` with `sum c_j * columns[j] = target`.
    pub fn solve_sparse(&self, target: &SparseVec) -> Result<SparseVec, LinalgError> {
        self.check(target)?;
        let (residual, combo) = self.reduce_tracked(target.clone(), Vec::new());
        if !residual.is_empty() {
            return Err(LinalgError::NotInImage);
        }
        Ok(combo.into_iter().map(|(j, x)| (j, -x)).collect())
    }

    pub fn solve(&self, target: &SparseVec) -> Result<Vec<Rational>, LinalgError> {
        Ok(dense_from_sparse(&self.solve_sparse(target)?, self.ncols))
    }
}

/// Canonical solution of `sum c_i * columns_i = target` with free variables
/// set to zero.
pub fn solve_preimage(
    columns: &[Vec<Rational>],
    target: &[Rational],
) -> Result<Vec<Rational>, LinalgError> {
    let nrows = target.len();
    for c in columns {
        if c.len() != nrows {
            return Err(LinalgError::DimensionMismatch {
                expected: nrows,
                found: c.len(),
            });
        }
    }
    let sparse: Vec<SparseVec> = columns.iter().map(|c| sparse_from_dense(c)).collect();
    PreimageSolver::new(&sparse, nrows)?.solve(&sparse_from_dense(target))
}
