//! Sparse elimination kernels.
//!
//! Rows are inserted one at a time into an echelon set keyed by leading
//! column; the pivot for a column is always the first row that reached it,
//! so results do not depend on thread scheduling or hashing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{add_mod, inv_mod, mul_mod, Field, FieldSpec, Scalar};

pub type SparseRow = Vec<(usize, Scalar)>;

/// Rank of the span of `rows`, each sorted by column with nonzero entries.
pub fn rank(rows: Vec<SparseRow>, field: Field) -> usize {
    match field.spec() {
        FieldSpec::PrimeField(p) => {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|(c, v)| (c, v.as_residue().expect("prime-field entry"))).collect())
                .collect();
            rank_mod_p(rows, p)
        }
        FieldSpec::Rationals => {
            let rows = rows.into_iter().map(integer_row).collect();
            rank_integer(rows)
        }
    }
}

fn rank_mod_p(rows: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
    let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for mut row in rows {
        row.retain(|e| e.1 != 0);
        while let Some(&(lead, coeff)) = row.first() {
            match pivots.get(&lead) {
                Some(piv) => {
                    // row ← row − coeff · piv, piv normalised to leading 1
                    row = axpy_mod(&row, piv, p - coeff, p);
                }
                None => {
                    let inv = inv_mod(coeff, p);
                    for e in row.iter_mut() {
                        e.1 = mul_mod(e.1, inv, p);
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn axpy_mod(x: &[(usize, u64)], y: &[(usize, u64)], a: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, mul_mod(a, y[j].1, p)));
            j += 1;
        } else {
            let v = add_mod(x[i].1, mul_mod(a, y[j].1, p), p);
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Scale a rational row by the lcm of its denominators and divide out the
/// content, giving a primitive integer row with the same span.
fn integer_row(row: SparseRow) -> Vec<(usize, BigInt)> {
    let rats: Vec<_> = row
        .into_iter()
        .map(|(c, v)| match v {
            Scalar::Rat(r) => (c, r),
            Scalar::Mod(_) => panic!("prime-field entry in a rational row"),
        })
        .filter(|(_, r)| !r.is_zero())
        .collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
    let ints = rats
        .into_iter()
        .map(|(c, r)| (c, r.numer() * (&lcm / r.denom())))
        .collect();
    primitive(ints)
}

fn primitive(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for e in row.iter_mut() {
            e.1 /= &g;
        }
    }
    if row.first().is_some_and(|e| e.1.is_negative()) {
        for e in row.iter_mut() {
            e.1 = -&e.1;
        }
    }
    row
}

/// Fraction-free elimination over the integers: `row ← a·row − b·piv`
/// followed by content removal keeps entries bounded by the pivot rows'.
fn rank_integer(rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    let mut pivots: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
    for mut row in rows {
        while let Some((lead, coeff)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(piv) => {
                    let pl = &piv[0].1;
                    let g = pl.gcd(&coeff);
                    let a = pl / &g;
                    let b = &coeff / &g;
                    row = primitive(combine_int(&row, &a, piv, &b));
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `a·x − b·y`, dropping zeros.
fn combine_int(x: &[(usize, BigInt)], a: &BigInt, y: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// `x + a·y` over a generic field.
pub fn axpy(x: &[(usize, Scalar)], a: &Scalar, y: &[(usize, Scalar)], field: Field) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            let v = field.mul(a, &y[j].1);
            if !field.is_zero(&v) {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&x[i].1, &field.mul(a, &y[j].1));
            if !field.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form: pivot rows with leading coefficient one and
/// zeros in every other pivot column, keyed by pivot column.
pub fn reduced_echelon(rows: Vec<SparseRow>, field: Field) -> BTreeMap<usize, SparseRow> {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        row.retain(|e| !field.is_zero(&e.1));
        row.sort_by_key(|e| e.0);
        while let Some((lead, coeff)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(piv) => row = axpy(&row, &field.neg(&coeff), piv, field),
                None => {
                    let inv = field.invert(&coeff).expect("nonzero lead");
                    for e in row.iter_mut() {
                        e.1 = field.mul(&e.1, &inv);
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    // back-substitute, highest pivot first
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for &c in &cols {
        let piv = pivots[&c].clone();
        for (_, row) in pivots.range_mut(..c) {
            if let Some(pos) = row.iter().position(|e| e.0 == c) {
                let coeff = row[pos].1.clone();
                *row = axpy(row, &field.neg(&coeff), &piv, field);
            }
        }
    }
    pivots
}
