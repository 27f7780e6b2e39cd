//! Weighted, bigraded vector spaces with named bases, sparse maps between
//! them, exact rank, and homology of chain complexes split by `(weight, t)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::echelon;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Weight, internal degree and word length of a basis element.
///
/// The bar coordinates are derived: `s = ℓ − 1`, `t = d − s`, so the total
/// degree `s + t` is the internal degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub weight: u32,
    pub internal_degree: i64,
    pub word_length: u32,
}

impl Bidegree {
    pub fn new(weight: u32, internal_degree: i64, word_length: u32) -> Self {
        Self {
            weight,
            internal_degree,
            word_length,
        }
    }

    pub fn s(&self) -> i64 {
        self.word_length as i64 - 1
    }

    pub fn t(&self) -> i64 {
        self.internal_degree - self.s()
    }

    pub fn total(&self) -> i64 {
        self.s() + self.t()
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wt {} (s,t)=({},{})", self.weight, self.s(), self.t())
    }
}

/// A finite basis of opaque labels, each carrying a [`Bidegree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedSpace {
    labels: Vec<String>,
    degrees: Vec<Bidegree>,
    index: HashMap<String, usize>,
}

impl BasedSpace {
    pub fn new(elements: impl IntoIterator<Item = (String, Bidegree)>) -> Result<Self> {
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (label, deg) in elements {
            if index.insert(label.clone(), labels.len()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate basis label {label}")));
            }
            labels.push(label);
            degrees.push(deg);
        }
        Ok(Self {
            labels,
            degrees,
            index,
        })
    }

    pub fn empty() -> Self {
        Self {
            labels: Vec::new(),
            degrees: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> Bidegree {
        self.degrees[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Basis indices grouped by `(weight, t)`, in basis order.
    pub fn columns(&self) -> BTreeMap<(u32, i64), Vec<usize>> {
        let mut out: BTreeMap<(u32, i64), Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            out.entry((d.weight, d.t())).or_default().push(i);
        }
        out
    }
}

/// The change of [`Bidegree`] a map promises to apply to every basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradingShift {
    pub weight: i64,
    pub internal_degree: i64,
    pub word_length: i64,
}

impl GradingShift {
    /// The Chevalley–Eilenberg boundary: `(w, d, ℓ) ↦ (w, d − 1, ℓ − 1)`.
    pub const BOUNDARY: GradingShift = GradingShift {
        weight: 0,
        internal_degree: -1,
        word_length: -1,
    };

    pub const IDENTITY: GradingShift = GradingShift {
        weight: 0,
        internal_degree: 0,
        word_length: 0,
    };

    fn admits(&self, from: Bidegree, to: Bidegree) -> bool {
        to.weight as i64 - from.weight as i64 == self.weight
            && to.internal_degree - from.internal_degree == self.internal_degree
            && to.word_length as i64 - from.word_length as i64 == self.word_length
    }
}

/// A linear map with entries `(row in codomain, column in domain, value)`.
#[derive(Debug, Clone)]
pub struct SparseMap {
    domain: Arc<BasedSpace>,
    codomain: Arc<BasedSpace>,
    shift: GradingShift,
    /// Column-major: `columns[j]` is the image of domain basis element `j`,
    /// sorted by row with nonzero values.
    columns: Vec<Vec<(usize, Scalar)>>,
    field: Field,
}

impl SparseMap {
    /// Build from a triplet list. Zero entries are dropped; repeated
    /// `(row, col)` pairs and grading violations are rejected.
    pub fn from_entries(
        domain: Arc<BasedSpace>,
        codomain: Arc<BasedSpace>,
        shift: GradingShift,
        field: Field,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut columns: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); domain.dim()];
        for (row, col, value) in entries {
            if row >= codomain.dim() || col >= domain.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({row}, {col}) outside a {}×{} map",
                    codomain.dim(),
                    domain.dim()
                )));
            }
            field.check(&value)?;
            if field.is_zero(&value) {
                continue;
            }
            if !shift.admits(domain.degree(col), codomain.degree(row)) {
                return Err(Error::GradingViolation(format!(
                    "{} ({}) ↦ {} ({})",
                    domain.label(col),
                    domain.degree(col),
                    codomain.label(row),
                    codomain.degree(row)
                )));
            }
            columns[col].push((row, value));
        }
        for (col, c) in columns.iter_mut().enumerate() {
            c.sort_by_key(|e| e.0);
            if let Some(w) = c.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry { row: w[0].0, col });
            }
        }
        Ok(Self {
            domain,
            codomain,
            shift,
            columns,
            field,
        })
    }

    /// Build from labelled triplets.
    pub fn from_labelled(
        domain: Arc<BasedSpace>,
        codomain: Arc<BasedSpace>,
        shift: GradingShift,
        field: Field,
        entries: impl IntoIterator<Item = (String, String, Scalar)>,
    ) -> Result<Self> {
        let mut triples = Vec::new();
        for (r, c, v) in entries {
            let row = codomain
                .position(&r)
                .ok_or_else(|| Error::DimensionMismatch(format!("unknown row label {r}")))?;
            let col = domain
                .position(&c)
                .ok_or_else(|| Error::DimensionMismatch(format!("unknown column label {c}")))?;
            triples.push((row, col, v));
        }
        Self::from_entries(domain, codomain, shift, field, triples)
    }

    pub fn zero(domain: Arc<BasedSpace>, codomain: Arc<BasedSpace>, shift: GradingShift, field: Field) -> Self {
        let columns = vec![Vec::new(); domain.dim()];
        Self {
            domain,
            codomain,
            shift,
            columns,
            field,
        }
    }

    pub fn domain(&self) -> &Arc<BasedSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<BasedSpace> {
        &self.codomain
    }

    pub fn shift(&self) -> GradingShift {
        self.shift
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    /// Restrict to a subset of domain columns, re-indexing rows through
    /// `row_local` (global row → local row). Rows outside the map are an error.
    fn block_rows(&self, cols: &[usize], row_local: &HashMap<usize, usize>) -> Result<Vec<Vec<(usize, Scalar)>>> {
        cols.iter()
            .map(|&j| {
                self.columns[j]
                    .iter()
                    .map(|(i, v)| {
                        row_local
                            .get(i)
                            .map(|&li| (li, v.clone()))
                            .ok_or_else(|| Error::GradingViolation(format!("{} leaves its (weight, t) column", self.domain.label(j))))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(|mut r| {
                        r.sort_by_key(|e| e.0);
                        r
                    })
            })
            .collect()
    }
}

/// Exact rank of `map` over `field`.
pub fn rank(map: &SparseMap, field: Field) -> Result<usize> {
    if map.field != field {
        return Err(Error::FieldMismatch {
            expected: field.to_string(),
            found: map.field.to_string(),
        });
    }
    Ok(echelon::rank(map.columns.clone(), field))
}

/// A chain complex `⋯ → C_ℓ → C_{ℓ−1} → ⋯` indexed by word length.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    field: Field,
    spaces: BTreeMap<u32, Arc<BasedSpace>>,
    /// `boundaries[ℓ]: C_ℓ → C_{ℓ−1}`.
    boundaries: BTreeMap<u32, SparseMap>,
}

impl ChainComplex {
    pub fn new(field: Field, spaces: BTreeMap<u32, Arc<BasedSpace>>, boundaries: BTreeMap<u32, SparseMap>) -> Result<Self> {
        for (&l, map) in &boundaries {
            let src = spaces
                .get(&l)
                .ok_or_else(|| Error::DimensionMismatch(format!("boundary from missing C_{l}")))?;
            if !Arc::ptr_eq(src, &map.domain) && **src != *map.domain {
                return Err(Error::DimensionMismatch(format!("boundary {l} domain differs from C_{l}")));
            }
            if l == 0 {
                return Err(Error::DimensionMismatch("boundary out of C_0".into()));
            }
            match spaces.get(&(l - 1)) {
                Some(dst) if Arc::ptr_eq(dst, &map.codomain) || **dst == *map.codomain => {}
                None if map.nnz() == 0 => {}
                _ => return Err(Error::DimensionMismatch(format!("boundary {l} codomain differs from C_{}", l - 1))),
            }
            if map.field != field {
                return Err(Error::FieldMismatch {
                    expected: field.to_string(),
                    found: map.field.to_string(),
                });
            }
        }
        Ok(Self {
            field,
            spaces,
            boundaries,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self, length: u32) -> Option<&Arc<BasedSpace>> {
        self.spaces.get(&length)
    }

    pub fn spaces(&self) -> impl Iterator<Item = (u32, &Arc<BasedSpace>)> {
        self.spaces.iter().map(|(l, s)| (*l, s))
    }

    pub fn boundary(&self, length: u32) -> Option<&SparseMap> {
        self.boundaries.get(&length)
    }

    pub fn boundaries(&self) -> impl Iterator<Item = (u32, &SparseMap)> {
        self.boundaries.iter().map(|(l, m)| (*l, m))
    }

    /// Every `(weight, t)` column present in some chain group.
    pub fn column_keys(&self) -> Vec<(u32, i64)> {
        let mut keys: Vec<_> = self.spaces.values().flat_map(|s| s.columns().into_keys()).collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    /// Verify `∂_{ℓ−1} ∘ ∂_ℓ = 0`, reporting the first offending `(weight, t, ℓ)`.
    pub fn check_square_zero(&self) -> Result<()> {
        let f = self.field;
        for (&l, outer) in &self.boundaries {
            let Some(inner) = self.boundaries.get(&(l - 1)) else { continue };
            let mut failures: Vec<(u32, i64)> = Vec::new();
            for j in 0..outer.domain.dim() {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (i, a) in outer.column(j) {
                    for (k, b) in inner.column(*i) {
                        let e = acc.entry(*k).or_insert_with(|| f.zero());
                        *e = f.add(e, &f.mul(a, b));
                    }
                }
                if acc.values().any(|v| !f.is_zero(v)) {
                    let d = outer.domain.degree(j);
                    failures.push((d.weight, d.t()));
                }
            }
            if let Some(&(weight, t)) = failures.iter().min() {
                return Err(Error::NonZeroComposite {
                    weight,
                    t,
                    length: l as usize,
                });
            }
        }
        Ok(())
    }

    /// `dim C_ℓ` per `(weight, s, t)`.
    pub fn chain_dims(&self) -> DimensionTable {
        let mut table = DimensionTable::new();
        for (l, space) in &self.spaces {
            for ((w, t), cols) in space.columns() {
                table.add_bidegree(w, *l as i64 - 1, t, cols.len());
            }
        }
        table
    }
}

/// Ranks of every boundary restricted to every `(weight, t)` column, keyed by
/// `(weight, t, ℓ)`.
fn block_ranks(complex: &ChainComplex) -> Result<BTreeMap<(u32, i64, u32), usize>> {
    let mut jobs = Vec::new();
    for (&l, map) in &complex.boundaries {
        let target_cols = complex.spaces.get(&(l - 1)).map(|s| s.columns()).unwrap_or_default();
        for (key, cols) in map.domain.columns() {
            let rows = target_cols.get(&key).cloned().unwrap_or_default();
            jobs.push((key, l, cols, rows));
        }
    }
    let field = complex.field;
    let results: Result<Vec<_>> = jobs
        .par_iter()
        .map(|((w, t), l, cols, rows)| {
            let map = &complex.boundaries[l];
            let row_local: HashMap<usize, usize> = rows.iter().enumerate().map(|(li, &g)| (g, li)).collect();
            let block = map.block_rows(cols, &row_local)?;
            Ok(((*w, *t, *l), echelon::rank(block, field)))
        })
        .collect();
    Ok(results?.into_iter().collect())
}

/// Homology dimensions of a complex, per `(weight, s, t)` with `s = ℓ − 1`,
/// and totals per `(weight, s + t)`.
///
/// Checks `∂∘∂ = 0` first.
pub fn homology_dims(complex: &ChainComplex, field: Field) -> Result<DimensionTable> {
    if complex.field != field {
        return Err(Error::FieldMismatch {
            expected: field.to_string(),
            found: complex.field.to_string(),
        });
    }
    complex.check_square_zero()?;
    let ranks = block_ranks(complex)?;
    let mut table = DimensionTable::new();
    for (&l, space) in &complex.spaces {
        for ((w, t), cols) in space.columns() {
            let out = ranks.get(&(w, t, l)).copied().unwrap_or(0);
            let inc = ranks.get(&(w, t, l + 1)).copied().unwrap_or(0);
            let dim = cols.len() - out - inc;
            table.add_bidegree(w, l as i64 - 1, t, dim);
        }
    }
    Ok(table)
}

/// Dimensions keyed by `(weight, total degree)`, optionally refined by
/// `(s, t)`. Absent keys are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DimensionTable {
    totals: BTreeMap<(u32, i64), usize>,
    bidegrees: BTreeMap<(u32, i64, i64), usize>,
}

impl DimensionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `dim` at bidegree `(s, t)`; also counted in total degree `s + t`.
    pub fn add_bidegree(&mut self, weight: u32, s: i64, t: i64, dim: usize) {
        if dim == 0 {
            return;
        }
        *self.bidegrees.entry((weight, s, t)).or_default() += dim;
        *self.totals.entry((weight, s + t)).or_default() += dim;
    }

    /// Add `dim` in total degree only.
    pub fn add_total(&mut self, weight: u32, degree: i64, dim: usize) {
        if dim == 0 {
            return;
        }
        *self.totals.entry((weight, degree)).or_default() += dim;
    }

    /// Remove one dimension at `(s, t)`. Returns false if nothing was there.
    pub fn remove_one(&mut self, weight: u32, s: i64, t: i64) -> bool {
        let Some(d) = self.bidegrees.get_mut(&(weight, s, t)) else { return false };
        *d -= 1;
        if *d == 0 {
            self.bidegrees.remove(&(weight, s, t));
        }
        let tot = self.totals.get_mut(&(weight, s + t)).expect("totals track bidegrees");
        *tot -= 1;
        if *tot == 0 {
            self.totals.remove(&(weight, s + t));
        }
        true
    }

    pub fn total(&self, weight: u32, degree: i64) -> usize {
        self.totals.get(&(weight, degree)).copied().unwrap_or(0)
    }

    pub fn bidegree(&self, weight: u32, s: i64, t: i64) -> usize {
        self.bidegrees.get(&(weight, s, t)).copied().unwrap_or(0)
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.totals.keys().map(|k| k.0).collect();
        w.dedup();
        w
    }

    pub fn totals(&self) -> impl Iterator<Item = ((u32, i64), usize)> + '_ {
        self.totals.iter().map(|(k, v)| (*k, *v))
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = ((u32, i64, i64), usize)> + '_ {
        self.bidegrees.iter().map(|(k, v)| (*k, *v))
    }

    /// Nonzero `(degree, dim)` pairs for one weight.
    pub fn totals_for(&self, weight: u32) -> Vec<(i64, usize)> {
        self.totals
            .range((weight, i64::MIN)..=(weight, i64::MAX))
            .map(|(k, v)| (k.1, *v))
            .collect()
    }

    pub fn bidegrees_for(&self, weight: u32) -> Vec<(i64, i64, usize)> {
        self.bidegrees
            .range((weight, i64::MIN, i64::MIN)..=(weight, i64::MAX, i64::MAX))
            .map(|(k, v)| (k.1, k.2, *v))
            .collect()
    }

    /// Dense vector of total-degree dimensions for one weight, starting at
    /// `min(0, lowest degree)`, with trailing zeros trimmed.
    pub fn dense_totals(&self, weight: u32) -> (i64, Vec<usize>) {
        let entries = self.totals_for(weight);
        let lo = entries.first().map_or(0, |e| e.0.min(0));
        let hi = entries.last().map_or(-1, |e| e.0);
        let v = (lo..=hi).map(|d| self.total(weight, d)).collect();
        (lo, v)
    }

    pub fn sum_for(&self, weight: u32) -> usize {
        self.totals_for(weight).iter().map(|e| e.1).sum()
    }

    /// `Σ (−1)^degree dim` for one weight.
    pub fn euler_characteristic(&self, weight: u32) -> i64 {
        self.totals_for(weight)
            .iter()
            .map(|&(d, n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Keep only one weight.
    pub fn restrict(&self, weight: u32) -> DimensionTable {
        DimensionTable {
            totals: self.totals.iter().filter(|(k, _)| k.0 == weight).map(|(k, v)| (*k, *v)).collect(),
            bidegrees: self.bidegrees.iter().filter(|(k, _)| k.0 == weight).map(|(k, v)| (*k, *v)).collect(),
        }
    }

    pub fn merge(&mut self, other: &DimensionTable) {
        for (k, v) in &other.totals {
            *self.totals.entry(*k).or_default() += v;
        }
        for (k, v) in &other.bidegrees {
            *self.bidegrees.entry(*k).or_default() += v;
        }
    }

    pub fn has_bidegrees(&self) -> bool {
        !self.bidegrees.is_empty() || self.totals.is_empty()
    }
}

/// Naive dense Gaussian elimination, kept independent of [`crate::echelon`]
/// as a ground truth for tests.
pub mod oracle {
    use super::*;

    pub fn dense_matrix(map: &SparseMap) -> Vec<Vec<Scalar>> {
        let f = map.field;
        let mut m = vec![vec![f.zero(); map.domain.dim()]; map.codomain.dim()];
        for (i, j, v) in map.entries() {
            m[i][j] = v.clone();
        }
        m
    }

    /// Rank of a dense matrix by textbook row reduction with field division.
    pub fn dense_rank(mut m: Vec<Vec<Scalar>>, field: Field) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !field.is_zero(&m[r][c])) else { continue };
            m.swap(rank, p);
            let inv = field.invert(&m[rank][c]).expect("nonzero pivot");
            for r in 0..rows {
                if r != rank && !field.is_zero(&m[r][c]) {
                    let factor = field.mul(&m[r][c], &inv);
                    let pivot_row = m[rank].clone();
                    for (x, y) in m[r][c..].iter_mut().zip(&pivot_row[c..]) {
                        *x = field.sub(x, &field.mul(&factor, y));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Homology by whole-matrix dense elimination on each `(weight, t)` block.
    pub fn dense_homology(complex: &ChainComplex) -> DimensionTable {
        let field = complex.field;
        let mut table = DimensionTable::new();
        let block_rank = |l: u32, w: u32, t: i64| -> usize {
            let Some(map) = complex.boundaries.get(&l) else { return 0 };
            let dense = dense_matrix(map);
            let cols: Vec<usize> = (0..map.domain.dim())
                .filter(|&j| {
                    let d = map.domain.degree(j);
                    d.weight == w && d.t() == t
                })
                .collect();
            let rows: Vec<usize> = (0..map.codomain.dim())
                .filter(|&i| {
                    let d = map.codomain.degree(i);
                    d.weight == w && d.t() == t
                })
                .collect();
            let sub: Vec<Vec<Scalar>> = rows.iter().map(|&i| cols.iter().map(|&j| dense[i][j].clone()).collect()).collect();
            dense_rank(sub, field)
        };
        for (&l, space) in &complex.spaces {
            for ((w, t), cols) in space.columns() {
                let dim = cols.len() - block_rank(l, w, t) - block_rank(l + 1, w, t);
                table.add_bidegree(w, l as i64 - 1, t, dim);
            }
        }
        table
    }
}
