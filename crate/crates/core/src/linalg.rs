//! Exact linear algebra over `Q`.
//!
//! Subspaces are kept in canonical form: the reduced row echelon rows, with
//! pivots chosen at the least column index. Two subspaces are equal iff their
//! canonical forms are equal. Elimination works on sparse rows.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use crate::error::{OperadError, Result};

pub type Q = BigRational;

/// Sparse vector: strictly increasing column indices, nonzero values.
pub type SRow = Vec<(usize, Q)>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qfrac(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

pub fn zeros(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vector(n: usize, k: usize) -> Vec<Q> {
    let mut v = zeros(n);
    v[k] = Q::one();
    v
}

pub fn to_sparse(v: &[Q]) -> SRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(n: usize, v: &[(usize, Q)]) -> Vec<Q> {
    let mut out = zeros(n);
    for (i, x) in v {
        out[*i] += x;
    }
    out
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `y + a·x` for sparse rows.
pub fn axpy(y: &[(usize, Q)], a: &Q, x: &[(usize, Q)]) -> SRow {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + a * &x[j].1;
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Accumulates `a·x` into a sparse map.
pub fn accumulate(acc: &mut BTreeMap<usize, Q>, a: &Q, x: &[(usize, Q)]) {
    for (c, v) in x {
        let e = acc.entry(*c).or_insert_with(Q::zero);
        *e += a * v;
        if e.is_zero() {
            acc.remove(c);
        }
    }
}

pub fn map_to_row(acc: BTreeMap<usize, Q>) -> SRow {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn scale_row(a: &Q, x: &[(usize, Q)]) -> SRow {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(c, v)| (*c, a * v)).collect()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || OperadError::Schema(format!("not a rational: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: num_bigint::BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: num_bigint::BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(a, b))
    } else {
        let a: num_bigint::BigInt = s.parse().map_err(|_| bad())?;
        Ok(Q::from_integer(a))
    }
}

/// Canonical text form: `"p/q"` in lowest terms, `"p"` for integers.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sparse row-major rational matrix. `apply` computes `M·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SRow>,
}

impl RMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        RMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Q::one())]).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(OperadError::DimensionMismatch {
                expected: cols,
                found: rows.iter().map(Vec::len).find(|&l| l != cols).unwrap_or(0),
            });
        }
        Ok(RMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| to_sparse(r)).collect(),
        })
    }

    /// Builds the matrix whose `c`-th column is `columns[c]`.
    pub fn from_columns(rows: usize, columns: &[SRow]) -> Self {
        let mut data: Vec<SRow> = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                data[*r].push((c, v.clone()));
            }
        }
        RMatrix {
            rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        self.data.iter().map(|r| to_dense(self.cols, r)).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r]
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn transpose(&self) -> RMatrix {
        RMatrix::from_columns(self.cols, &self.data)
    }

    /// Column `c` as a sparse vector.
    pub fn column(&self, c: usize) -> SRow {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.iter().find(|(k, _)| *k == c).map(|(_, v)| (r, v.clone())))
            .collect()
    }

    pub fn apply(&self, x: &[Q]) -> Result<Vec<Q>> {
        if x.len() != self.cols {
            return Err(OperadError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().fold(Q::zero(), |acc, (c, v)| acc + v * &x[*c]))
            .collect())
    }

    pub fn apply_sparse(&self, x: &[(usize, Q)]) -> SRow {
        let dense = to_dense(self.cols, x);
        self.data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let v = row.iter().fold(Q::zero(), |acc, (c, v)| acc + v * &dense[*c]);
                (!v.is_zero()).then_some((r, v))
            })
            .collect()
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(OperadError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BTreeMap::new();
                for (k, v) in row {
                    accumulate(&mut acc, v, &other.data[*k]);
                }
                map_to_row(acc)
            })
            .collect();
        Ok(RMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn sub(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(OperadError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let m1 = -Q::one();
        Ok(RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| axpy(a, &m1, b))
                .collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn rank(&self) -> usize {
        Subspace::span_sparse(self.cols, self.data.iter().cloned()).dim()
    }

    /// Stacks matrices with a common column count.
    pub fn vstack(cols: usize, blocks: &[RMatrix]) -> Result<RMatrix> {
        let mut data = Vec::new();
        for b in blocks {
            if b.cols != cols {
                return Err(OperadError::DimensionMismatch {
                    expected: cols,
                    found: b.cols,
                });
            }
            data.extend(b.data.iter().cloned());
        }
        Ok(RMatrix {
            rows: data.len(),
            cols,
            data,
        })
    }
}

/// Incremental row echelon form with least-index pivots.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<SRow>,
    by_pivot: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon {
            ambient,
            rows: Vec::new(),
            by_pivot: BTreeMap::new(),
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        let mut e = Echelon::new(s.ambient);
        for (k, row) in s.rows.iter().enumerate() {
            e.by_pivot.insert(s.pivots[k], k);
            e.rows.push(row.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Reduces `v` until its leading column is not a pivot.
    fn reduce_map(&self, v: &[(usize, Q)]) -> BTreeMap<usize, Q> {
        let mut work: BTreeMap<usize, Q> = v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        let mut floor = 0usize;
        loop {
            let next = work.range(floor..).find(|(c, _)| self.by_pivot.contains_key(c));
            let Some((&c, val)) = next else { break };
            let val = -val.clone();
            let row = &self.rows[self.by_pivot[&c]];
            accumulate(&mut work, &val, row);
            floor = c + 1;
        }
        work
    }

    /// Remainder of `v` after full reduction against the pivot rows.
    pub fn remainder(&self, v: &[(usize, Q)]) -> SRow {
        map_to_row(self.reduce_map(v))
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.reduce_map(v).is_empty()
    }

    /// Inserts `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[(usize, Q)]) -> bool {
        let rem = self.reduce_map(v);
        let Some((&p, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let row: SRow = rem.iter().map(|(c, x)| (*c, x * &inv)).collect();
        self.by_pivot.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn insert_dense(&mut self, v: &[Q]) -> bool {
        self.insert(&to_sparse(v))
    }

    pub fn into_subspace(self) -> Subspace {
        let mut order: Vec<(usize, SRow)> = self
            .by_pivot
            .iter()
            .map(|(p, &k)| (*p, self.rows[k].clone()))
            .collect();
        // back substitution, largest pivot first
        for i in (0..order.len()).rev() {
            let (lo, hi) = order.split_at_mut(i + 1);
            let (pi, row) = &mut lo[i];
            let mut cur = std::mem::take(row);
            for (pj, rj) in hi.iter() {
                if let Some((_, c)) = cur.iter().find(|(k, _)| k == pj) {
                    let c = -c.clone();
                    cur = axpy(&cur, &c, rj);
                }
            }
            debug_assert_eq!(cur.first().map(|e| e.0), Some(*pi));
            *row = cur;
        }
        Subspace {
            ambient: self.ambient,
            pivots: order.iter().map(|(p, _)| *p).collect(),
            rows: order.into_iter().map(|(_, r)| r).collect(),
        }
    }
}

/// A subspace of `Q^ambient` in canonical reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SRow>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(|i| vec![(i, Q::one())]).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(OperadError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        Ok(Self::span_sparse(ambient, vectors.iter().map(|v| to_sparse(v))))
    }

    pub fn span_sparse<I: IntoIterator<Item = SRow>>(ambient: usize, vectors: I) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(&v);
        }
        e.into_subspace()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn rows(&self) -> &[SRow] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.rows.iter().map(|r| to_dense(self.ambient, r)).collect()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.contains_sparse(&to_sparse(v))
    }

    /// Membership test. Rows are fully reduced, so a single pass over the
    /// pivot columns decides it.
    pub fn contains_sparse(&self, v: &[(usize, Q)]) -> bool {
        self.reduce_sparse(v).is_empty()
    }

    /// `v` minus its component along the pivot rows; supported off the pivots.
    pub fn reduce_sparse(&self, v: &[(usize, Q)]) -> SRow {
        let mut acc: BTreeMap<usize, Q> = v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(c) = v.iter().find(|(i, _)| *i == p).map(|(_, x)| x.clone()) {
                accumulate(&mut acc, &-c, &self.rows[k]);
            }
        }
        map_to_row(acc)
    }

    /// Coordinates of a member of the subspace in the canonical basis.
    pub fn coordinates(&self, v: &[(usize, Q)]) -> Option<Vec<Q>> {
        if !self.contains_sparse(v) {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .map(|p| {
                    v.iter()
                        .find(|(i, _)| i == p)
                        .map(|(_, x)| x.clone())
                        .unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.rows.iter().all(|r| self.contains_sparse(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut e = Echelon::from_subspace(self);
        for r in &other.rows {
            e.insert(r);
        }
        Ok(e.into_subspace())
    }

    /// Vectors `a` with `a·u = 0` for every `u` in the subspace.
    pub fn annihilator(&self) -> Subspace {
        kernel_of_rows(self.ambient, &self.rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.contains_subspace(other) {
            return Ok(other.clone());
        }
        if other.contains_subspace(self) {
            return Ok(self.clone());
        }
        let mut constraints = self.annihilator().rows;
        constraints.extend(other.annihilator().rows);
        Ok(kernel_of_rows(self.ambient, &constraints))
    }

    /// Image under `M` (columns indexed by this ambient).
    pub fn image(&self, m: &RMatrix) -> Result<Subspace> {
        if m.cols != self.ambient {
            return Err(OperadError::DimensionMismatch {
                expected: self.ambient,
                found: m.cols,
            });
        }
        Ok(Subspace::span_sparse(
            m.rows,
            self.rows.iter().map(|r| m.apply_sparse(r)),
        ))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(OperadError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    /// Builds a subspace from rows already in canonical form (e.g. read back
    /// from disk); the form is re-derived so invalid input cannot slip in.
    pub fn from_rows(ambient: usize, rows: Vec<SRow>) -> Subspace {
        Subspace::span_sparse(ambient, rows)
    }
}

/// Null space `{x : r·x = 0 for all rows r}`, returned in canonical form.
///
/// The constraint rows are eliminated with pivots at the *largest* column;
/// the kernel basis read off from that form is then already reduced with
/// least-index pivots, so no second elimination is needed.
pub fn kernel_of_rows(ambient: usize, rows: &[SRow]) -> Subspace {
    let flip = |r: &SRow| -> SRow {
        let mut out: SRow = r.iter().map(|(c, v)| (ambient - 1 - c, v.clone())).collect();
        out.reverse();
        out
    };
    let mut e = Echelon::new(ambient);
    for r in rows {
        e.insert(&flip(r));
    }
    let reduced = e.into_subspace();
    let pivot_set: std::collections::BTreeSet<usize> =
        reduced.pivots.iter().map(|p| ambient - 1 - p).collect();
    // original-column view of the reduced constraint rows
    let orig_rows: Vec<(usize, SRow)> = reduced
        .rows
        .iter()
        .zip(&reduced.pivots)
        .map(|(r, p)| (ambient - 1 - p, flip(r)))
        .collect();
    // column f -> list of (pivot, coefficient)
    let mut by_free: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
    for (p, r) in &orig_rows {
        for (c, v) in r {
            if c != p {
                by_free.entry(*c).or_default().push((*p, v.clone()));
            }
        }
    }
    let mut out_rows = Vec::new();
    let mut pivots = Vec::new();
    for f in (0..ambient).filter(|c| !pivot_set.contains(c)) {
        let mut row: SRow = vec![(f, Q::one())];
        if let Some(entries) = by_free.get(&f) {
            for (p, v) in entries {
                row.push((*p, -v.clone()));
            }
        }
        row.sort_by_key(|e| e.0);
        pivots.push(f);
        out_rows.push(row);
    }
    Subspace {
        ambient,
        rows: out_rows,
        pivots,
    }
}

/// Kernel of a matrix.
pub fn kernel(m: &RMatrix) -> Subspace {
    kernel_of_rows(m.cols, &m.data)
}

/// Smallest subspace containing `seed` and stable under every generator.
pub fn smodule_closure(seed: &Subspace, generators: &[RMatrix]) -> Result<Subspace> {
    for g in generators {
        if g.rows != seed.ambient || g.cols != seed.ambient {
            return Err(OperadError::DimensionMismatch {
                expected: seed.ambient,
                found: g.cols,
            });
        }
    }
    let mut e = Echelon::from_subspace(seed);
    let mut queue: Vec<SRow> = seed.rows.clone();
    while let Some(v) = queue.pop() {
        for g in generators {
            let w = g.apply_sparse(&v);
            if e.insert(&w) {
                queue.push(w);
            }
        }
    }
    Ok(e.into_subspace())
}

/// Solves `A x = b`, returning the solution whose free variables vanish
/// (pivots at least column index), or `None` if inconsistent.
pub fn solve(a: &RMatrix, b: &[Q]) -> Result<Option<Vec<Q>>> {
    if b.len() != a.rows {
        return Err(OperadError::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let n = a.cols;
    let aug = a
        .data
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            if !bi.is_zero() {
                r.push((n, bi.clone()));
            }
            r
        });
    let s = Subspace::span_sparse(n + 1, aug);
    if s.pivots.contains(&n) {
        return Ok(None);
    }
    let mut x = zeros(n);
    for (k, &p) in s.pivots.iter().enumerate() {
        if let Some((_, v)) = s.rows[k].iter().find(|(c, _)| *c == n) {
            x[p] = v.clone();
        }
    }
    Ok(Some(x))
}

/// Expresses vectors in a fixed (independent) basis.
#[derive(Clone, Debug)]
pub struct CoordinateSystem {
    ambient: usize,
    size: usize,
    rows: Vec<SRow>,
    combos: Vec<SRow>,
    by_pivot: BTreeMap<usize, usize>,
}

impl CoordinateSystem {
    pub fn new(ambient: usize, basis: &[SRow]) -> Result<Self> {
        let mut cs = CoordinateSystem {
            ambient,
            size: basis.len(),
            rows: Vec::new(),
            combos: Vec::new(),
            by_pivot: BTreeMap::new(),
        };
        for (k, b) in basis.iter().enumerate() {
            let (rem, combo) = cs.reduce(b);
            let mut combo_map: BTreeMap<usize, Q> = combo.into_iter().map(|(i, v)| (i, -v)).collect();
            combo_map.insert(k, Q::one());
            let Some((p, lead)) = rem.first().cloned() else {
                return Err(OperadError::InvalidInput(format!(
                    "basis vector {k} is linearly dependent on its predecessors"
                )));
            };
            let inv = lead.recip();
            cs.rows.push(scale_row(&inv, &rem));
            cs.combos.push(scale_row(&inv, &map_to_row(combo_map)));
            cs.by_pivot.insert(p, cs.rows.len() - 1);
        }
        Ok(cs)
    }

    /// Returns `(remainder, c)` with `v = remainder + Σ c_k row_k` expressed
    /// through the combination coefficients over the original basis.
    fn reduce(&self, v: &[(usize, Q)]) -> (SRow, SRow) {
        let mut work: BTreeMap<usize, Q> = v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        let mut coef: BTreeMap<usize, Q> = BTreeMap::new();
        let mut floor = 0;
        loop {
            let next = work.range(floor..).find(|(c, _)| self.by_pivot.contains_key(c));
            let Some((&c, val)) = next else { break };
            let val = val.clone();
            let k = self.by_pivot[&c];
            accumulate(&mut work, &-val.clone(), &self.rows[k]);
            accumulate(&mut coef, &val, &self.combos[k]);
            floor = c + 1;
        }
        (map_to_row(work), map_to_row(coef))
    }

    /// Coordinates of `v` over the basis, or `None` if outside the span.
    pub fn coordinates(&self, v: &[(usize, Q)]) -> Option<Vec<Q>> {
        let (rem, coef) = self.reduce(v);
        if !rem.is_empty() {
            return None;
        }
        Some(to_dense(self.size, &coef))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
}

pub fn abs_max_height(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::span(3, &[qv(&[1, 2, 3]), qv(&[2, 4, 7])]).unwrap();
        let b = Subspace::span(3, &[qv(&[0, 0, 1]), qv(&[1, 2, 0])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 2]);
        assert_eq!(a.basis(), vec![qv(&[1, 2, 0]), qv(&[0, 0, 1])]);
    }

    #[test]
    fn kernel_simple() {
        let m = RMatrix::from_dense(&[qv(&[1, 1, 0]), qv(&[0, 1, 1])]).unwrap();
        let k = kernel(&m);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis(), vec![qv(&[1, -1, 1])]);
        assert!(kernel(&RMatrix::zero(0, 3)).is_full());
    }

    #[test]
    fn solve_prefers_least_pivot() {
        let m = RMatrix::from_dense(&[qv(&[1, 1]), qv(&[1, 1])]).unwrap();
        assert_eq!(solve(&m, &qv(&[1, 1])).unwrap(), Some(qv(&[1, 0])));
        assert_eq!(solve(&m, &qv(&[1, 2])).unwrap(), None);
    }

    #[test]
    fn closure_under_swap() {
        let swap = RMatrix::from_dense(&[qv(&[0, 1]), qv(&[1, 0])]).unwrap();
        let seed = Subspace::span(2, &[qv(&[1, 0])]).unwrap();
        assert!(smodule_closure(&seed, &[swap.clone()]).unwrap().is_full());
        let seed = Subspace::span(2, &[qv(&[1, -1])]).unwrap();
        assert_eq!(smodule_closure(&seed, &[swap]).unwrap().dim(), 1);
    }

    #[test]
    fn coordinates_in_basis() {
        let basis = vec![to_sparse(&qv(&[1, 1, 0])), to_sparse(&qv(&[0, 1, 1]))];
        let cs = CoordinateSystem::new(3, &basis).unwrap();
        assert_eq!(cs.coordinates(&to_sparse(&qv(&[2, 5, 3]))), Some(qv(&[2, 3])));
        assert_eq!(cs.coordinates(&to_sparse(&qv(&[1, 0, 0]))), None);
        assert!(CoordinateSystem::new(3, &[basis[0].clone(), basis[0].clone()]).is_err());
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(format_q(&parse_q("4/6").unwrap()), "2/3");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    fn small_vecs(n: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
        prop::collection::vec(prop::collection::vec(-3i64..4, n), 0..6)
            .prop_map(|vs| vs.into_iter().map(|v| qv(&v)).collect())
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated(rows in small_vecs(5)) {
            // no rows carries no column count
            let m = if rows.is_empty() { RMatrix::zero(0, 5) } else { RMatrix::from_dense(&rows).unwrap() };
            let k = kernel(&m);
            prop_assert_eq!(k.dim() + m.rank(), 5);
            for v in k.basis() {
                prop_assert!(is_zero_vec(&m.apply(&v).unwrap()));
            }
            prop_assert_eq!(Subspace::span(5, &k.basis()).unwrap(), k);
        }

        #[test]
        fn intersection_dimension_formula(a in small_vecs(4), b in small_vecs(4)) {
            let u = Subspace::span(4, &a).unwrap();
            let v = Subspace::span(4, &b).unwrap();
            let s = u.sum(&v).unwrap();
            let i = u.intersect(&v).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            prop_assert!(u.contains_subspace(&i) && v.contains_subspace(&i));
        }

        #[test]
        fn span_is_order_independent(mut a in small_vecs(4)) {
            let u = Subspace::span(4, &a).unwrap();
            a.reverse();
            prop_assert_eq!(Subspace::span(4, &a).unwrap(), u);
        }
    }
}
