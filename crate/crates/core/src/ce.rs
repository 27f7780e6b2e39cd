//! Chevalley–Eilenberg complexes `CE(𝔤) = Γ(𝔤_even) ⊗ Λ(𝔤_odd)` of tensor
//! shifted Lie algebras, truncated to one weight at a time.
//!
//! A monomial `γ_{k₁}(x₁)⋯γ_{k_m}(x_m)⟨y₁,…,y_n⟩` has word length
//! `ℓ = Σkᵢ + n`, and bar coordinates `s = ℓ − 1`, `t = d − s` where `d` is
//! the sum of the Lie degrees; the total degree `s + t` is `d`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Surface, TensorLieAlgebra};
use crate::error::{Error, Result};
use crate::lie::CharMode;
use crate::linear::{self, BasedSpace, Bidegree, ChainComplex, DimensionTable, GradingShift, SparseMap};
use crate::scalar::{Field, Scalar};

/// Tag recorded in every output table.
pub const BIDEGREE_TAG: &str = "s=len-1";

/// Deliberate corruptions of the differential, used to prove that the
/// structural checks notice sign errors.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Drop the positional sign from the even–odd summand.
    MixedTermSign,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CEMonomial {
    /// `(element, exponent)`, sorted by element, exponents ≥ 1.
    pub even: Vec<(usize, u32)>,
    /// Strictly increasing.
    pub odd: Vec<usize>,
}

impl CEMonomial {
    pub fn new(mut even: Vec<(usize, u32)>, mut odd: Vec<usize>) -> Self {
        even.retain(|e| e.1 > 0);
        even.sort_unstable();
        odd.sort_unstable();
        Self { even, odd }
    }

    pub fn word_length(&self) -> u32 {
        self.even.iter().map(|e| e.1).sum::<u32>() + self.odd.len() as u32
    }

    pub fn weight(&self, g: &TensorLieAlgebra) -> u32 {
        self.even.iter().map(|&(i, k)| k * g.element(i).weight).sum::<u32>()
            + self.odd.iter().map(|&i| g.element(i).weight).sum::<u32>()
    }

    pub fn internal_degree(&self, g: &TensorLieAlgebra) -> i64 {
        self.even.iter().map(|&(i, k)| k as i64 * g.element(i).degree).sum::<i64>()
            + self.odd.iter().map(|&i| g.element(i).degree).sum::<i64>()
    }

    pub fn bidegree(&self, g: &TensorLieAlgebra) -> Bidegree {
        Bidegree::new(self.weight(g), self.internal_degree(g), self.word_length())
    }

    pub fn display<'a>(&'a self, g: &'a TensorLieAlgebra) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, g }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a CEMonomial,
    g: &'a TensorLieAlgebra,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(i, k) in &self.m.even {
            write!(f, "γ{k}({})", self.g.element(i).label)?;
        }
        if !self.m.odd.is_empty() || self.m.even.is_empty() {
            f.write_str("⟨")?;
            for (n, &i) in self.m.odd.iter().enumerate() {
                if n > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&self.g.element(i).label)?;
            }
            f.write_str("⟩")?;
        }
        Ok(())
    }
}

/// All monomials of total weight exactly `weight`, sorted by
/// `(ℓ, d, monomial)`.
pub fn ce_basis(g: &TensorLieAlgebra, weight: u32) -> Vec<CEMonomial> {
    fn go(g: &TensorLieAlgebra, idx: usize, remaining: u32, even: &mut Vec<(usize, u32)>, odd: &mut Vec<usize>, out: &mut Vec<CEMonomial>) {
        if remaining == 0 {
            out.push(CEMonomial::new(even.clone(), odd.clone()));
            return;
        }
        if idx == g.len() {
            return;
        }
        let e = g.element(idx);
        go(g, idx + 1, remaining, even, odd, out);
        if e.weight > remaining {
            return;
        }
        if e.is_even() {
            for k in 1..=remaining / e.weight {
                even.push((idx, k));
                go(g, idx + 1, remaining - k * e.weight, even, odd, out);
                even.pop();
            }
        } else {
            odd.push(idx);
            go(g, idx + 1, remaining - e.weight, even, odd, out);
            odd.pop();
        }
    }
    if weight == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(g, 0, weight, &mut Vec::new(), &mut Vec::new(), &mut out);
    out.sort_by_cached_key(|m| (m.word_length(), m.internal_degree(g), m.clone()));
    out
}

/// Insert odd `z` into a sorted exterior word. Returns the new word and the
/// Koszul sign exponent of moving `z` from the front, or `None` on a repeat.
fn insert_odd(odd: &[usize], z: usize) -> Option<(Vec<usize>, i64)> {
    match odd.binary_search(&z) {
        Ok(_) => None,
        Err(pos) => {
            let mut v = odd.to_vec();
            v.insert(pos, z);
            Some((v, pos as i64))
        }
    }
}

/// Multiply `γ₁(z)` into a divided-power word: `γ₁(z)γ_e(z) = (e+1)γ_{e+1}(z)`.
fn multiply_gamma_one(even: &[(usize, u32)], z: usize) -> (Vec<(usize, u32)>, i64) {
    let mut v = even.to_vec();
    match v.binary_search_by_key(&z, |e| e.0) {
        Ok(pos) => {
            v[pos].1 += 1;
            let factor = v[pos].1 as i64;
            (v, factor)
        }
        Err(pos) => {
            v.insert(pos, (z, 1));
            (v, 1)
        }
    }
}

fn decrement(even: &[(usize, u32)], pos: usize, by: u32) -> Vec<(usize, u32)> {
    let mut v = even.to_vec();
    v[pos].1 -= by;
    v.retain(|e| e.1 > 0);
    v
}

fn without(odd: &[usize], drop: &[usize]) -> Vec<usize> {
    odd.iter().enumerate().filter(|(k, _)| !drop.contains(k)).map(|(_, &y)| y).collect()
}

/// The Chevalley–Eilenberg differential of one monomial.
pub fn ce_differential(m: &CEMonomial, g: &TensorLieAlgebra, field: Field) -> Result<BTreeMap<CEMonomial, Scalar>> {
    ce_differential_with(m, g, field, None)
}

#[doc(hidden)]
pub fn ce_differential_with(m: &CEMonomial, g: &TensorLieAlgebra, field: Field, fault: Option<Fault>) -> Result<BTreeMap<CEMonomial, Scalar>> {
    let f = field;
    let half = f.from_ratio(1, 2)?;
    let mut out: BTreeMap<CEMonomial, Scalar> = BTreeMap::new();
    let mut add = |mono: CEMonomial, c: Scalar| {
        if f.is_zero(&c) {
            return;
        }
        let e = out.entry(mono).or_insert_with(|| f.zero());
        *e = f.add(e, &c);
    };

    let xs = &m.even;
    let ys = &m.odd;

    // even–even pairs
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let even = decrement(&decrement(xs, j, 1), i, 1);
            // decrementing j first keeps index i valid
            for (z, c) in g.bracket(xs[i].0, xs[j].0)? {
                if let Some((odd, pos)) = insert_odd(ys, *z) {
                    add(CEMonomial { even: even.clone(), odd }, f.mul(&f.sign(pos), c));
                }
            }
        }
    }

    // odd–odd pairs, (−1)^{i+j−1} with 1-based positions
    for i in 0..ys.len() {
        for j in i + 1..ys.len() {
            let rest = without(ys, &[i, j]);
            let sign = f.sign((i + 1 + j + 1 - 1) as i64);
            for (z, c) in g.bracket(ys[i], ys[j])? {
                if let Some((odd, pos)) = insert_odd(&rest, *z) {
                    add(CEMonomial { even: xs.clone(), odd }, f.mul(&f.mul(&sign, &f.sign(pos)), c));
                }
            }
        }
    }

    // self-brackets of even elements, coefficient ½
    for i in 0..xs.len() {
        if xs[i].1 < 2 {
            continue;
        }
        let even = decrement(xs, i, 2);
        for (z, c) in g.bracket(xs[i].0, xs[i].0)? {
            if let Some((odd, pos)) = insert_odd(ys, *z) {
                add(CEMonomial { even: even.clone(), odd }, f.mul(&half, &f.mul(&f.sign(pos), c)));
            }
        }
    }

    // even–odd pairs, (−1)^{j−1}
    let positional = fault != Some(Fault::MixedTermSign);
    for i in 0..xs.len() {
        let reduced = decrement(xs, i, 1);
        for j in 0..ys.len() {
            let odd = without(ys, &[j]);
            let sign = if positional { f.sign(j as i64) } else { f.one() };
            for (z, c) in g.bracket(xs[i].0, ys[j])? {
                let (even, factor) = multiply_gamma_one(&reduced, *z);
                let coeff = f.mul(&f.mul(&sign, &f.from_integer(factor)), c);
                add(CEMonomial { even, odd: odd.clone() }, coeff);
            }
        }
    }

    out.retain(|_, c| !f.is_zero(c));
    Ok(out)
}

/// The weight-`k` part of a Chevalley–Eilenberg complex with its monomial bases.
#[derive(Debug, Clone)]
pub struct CEComplex {
    weight: u32,
    monomials: BTreeMap<u32, Vec<CEMonomial>>,
    chain: ChainComplex,
}

impl CEComplex {
    pub fn build(g: &TensorLieAlgebra, weight: u32) -> Result<Self> {
        Self::build_with(g, weight, None)
    }

    #[doc(hidden)]
    pub fn build_with(g: &TensorLieAlgebra, weight: u32, fault: Option<Fault>) -> Result<Self> {
        if weight > g.max_weight() {
            return Err(Error::WeightOverflow {
                weight,
                max: g.max_weight(),
            });
        }
        let field = g.field();
        let mut monomials: BTreeMap<u32, Vec<CEMonomial>> = BTreeMap::new();
        for m in ce_basis(g, weight) {
            monomials.entry(m.word_length()).or_default().push(m);
        }
        let mut spaces: BTreeMap<u32, Arc<BasedSpace>> = BTreeMap::new();
        let mut positions: BTreeMap<u32, HashMap<CEMonomial, usize>> = BTreeMap::new();
        for (&l, ms) in &monomials {
            let space = BasedSpace::new(ms.iter().map(|m| (m.display(g).to_string(), m.bidegree(g))))?;
            spaces.insert(l, Arc::new(space));
            positions.insert(l, ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect());
        }

        let mut boundaries = BTreeMap::new();
        for (&l, ms) in &monomials {
            if l < 2 {
                continue;
            }
            let target = spaces.get(&(l - 1)).cloned().unwrap_or_else(|| Arc::new(BasedSpace::empty()));
            let pos = positions.get(&(l - 1));
            let images: Vec<Result<Vec<(usize, usize, Scalar)>>> = ms
                .par_iter()
                .enumerate()
                .map(|(col, m)| {
                    let image = ce_differential_with(m, g, field, fault)?;
                    image
                        .into_iter()
                        .map(|(mono, c)| {
                            let row = pos.and_then(|p| p.get(&mono)).copied().ok_or_else(|| {
                                Error::GradingViolation(format!("{} is not in C_{}", mono.display(g), l - 1))
                            })?;
                            Ok((row, col, c))
                        })
                        .collect()
                })
                .collect();
            let mut entries = Vec::new();
            for r in images {
                entries.extend(r?);
            }
            let map = SparseMap::from_entries(spaces[&l].clone(), target, GradingShift::BOUNDARY, field, entries)?;
            boundaries.insert(l, map);
        }
        let chain = ChainComplex::new(field, spaces, boundaries)?;
        Ok(Self {
            weight,
            monomials,
            chain,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn monomials(&self, length: u32) -> &[CEMonomial] {
        self.monomials.get(&length).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.monomials.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn homology(&self) -> Result<DimensionTable> {
        linear::homology_dims(&self.chain, self.chain.field())
    }

    /// Whether `m` is a cycle that is not a boundary.
    pub fn is_nonzero_class(&self, m: &CEMonomial) -> Result<bool> {
        let l = m.word_length();
        let Some(space) = self.chain.space(l) else { return Ok(false) };
        let Some(col) = self.monomials[&l].iter().position(|x| x == m) else { return Ok(false) };
        if let Some(d) = self.chain.boundary(l) {
            if !d.column(col).is_empty() {
                return Ok(false);
            }
        }
        let Some(incoming) = self.chain.boundary(l + 1) else { return Ok(true) };
        let field = self.chain.field();
        let mut rows: Vec<Vec<(usize, Scalar)>> = (0..incoming.domain().dim()).map(|j| incoming.column(j).to_vec()).collect();
        let before = crate::echelon::rank(rows.clone(), field);
        rows.push(vec![(col, field.one())]);
        let after = crate::echelon::rank(rows, field);
        debug_assert!(col < space.dim());
        Ok(after > before)
    }
}

/// Build `𝔤` for a surface with standard Lie relations.
pub fn surface_algebra(surface: &Surface, max_weight: u32, field: Field) -> Result<TensorLieAlgebra> {
    TensorLieAlgebra::for_surface(surface, max_weight.max(1), field, CharMode::Standard)
}

/// `H_{s,t}(wt_k CE(𝔤; field))`; also totalled by `s + t`.
pub fn ce_homology(surface: &Surface, k: u32, field: Field) -> Result<DimensionTable> {
    if k == 0 {
        return Ok(DimensionTable::new());
    }
    let g = surface_algebra(surface, k, field)?;
    CEComplex::build(&g, k)?.homology()
}

/// Rational Betti numbers of `B_k(M)` for `k = 1..=k_max`.
pub fn betti_table(surface: &Surface, k_max: u32) -> Result<DimensionTable> {
    let mut table = DimensionTable::new();
    if k_max == 0 {
        return Ok(table);
    }
    let g = surface_algebra(surface, k_max, Field::rationals())?;
    for k in 1..=k_max {
        table.merge(&CEComplex::build(&g, k)?.homology()?);
    }
    Ok(table)
}

/// Per-degree comparison of CE homology over `F_p` and over `Q` at one weight.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub surface: String,
    pub p: u64,
    pub weight: u32,
    pub mod_p: DimensionTable,
    pub rational: DimensionTable,
    /// Degrees where the dimensions differ.
    pub unequal_degrees: Vec<i64>,
    /// Degrees where `dim_{F_p} < dim_Q`, which universal coefficients forbid.
    pub coefficient_violations: Vec<i64>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.unequal_degrees.is_empty()
    }
}

pub(crate) fn degree_range(a: &DimensionTable, b: &DimensionTable, w: u32) -> Vec<i64> {
    let mut ds: Vec<i64> = a.totals_for(w).into_iter().chain(b.totals_for(w)).map(|e| e.0).collect();
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// CE homology over `F_p` against `Q` at weight `k ≤ p`.
pub fn compare(surface: &Surface, p: u64, k: u32) -> Result<Comparison> {
    let fp = Field::prime(p)?;
    if k as u64 > p {
        return Err(Error::WeightAboveP { k, p });
    }
    let mod_p = ce_homology(surface, k, fp)?;
    let rational = ce_homology(surface, k, Field::rationals())?;
    let degrees = degree_range(&mod_p, &rational, k);
    let unequal_degrees = degrees.iter().copied().filter(|&d| mod_p.total(k, d) != rational.total(k, d)).collect();
    let coefficient_violations = degrees.iter().copied().filter(|&d| mod_p.total(k, d) < rational.total(k, d)).collect();
    Ok(Comparison {
        surface: surface.to_string(),
        p,
        weight: k,
        mod_p,
        rational,
        unequal_degrees,
        coefficient_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(field: Field, w: u32) -> TensorLieAlgebra {
        surface_algebra(&Surface::torus(), w, field).unwrap()
    }

    fn mono(g: &TensorLieAlgebra, even: &[(&str, u32)], odd: &[&str]) -> CEMonomial {
        CEMonomial::new(
            even.iter().map(|(l, k)| (g.position_by_label(l).unwrap(), *k)).collect(),
            odd.iter().map(|l| g.position_by_label(l).unwrap()).collect(),
        )
    }

    #[test]
    fn weight_one_and_two_bases() {
        let g = torus(Field::rationals(), 2);
        let w1 = ce_basis(&g, 1);
        assert_eq!(w1.len(), 4);
        assert!(w1.iter().all(|m| m.word_length() == 1));
        let w2 = ce_basis(&g, 2);
        assert_eq!(w2.len(), 12);
        assert_eq!(w2.iter().filter(|m| m.word_length() == 1).count(), 4);
        assert_eq!(w2.iter().filter(|m| m.word_length() == 2).count(), 8);
        assert!(ce_basis(&g, 0).is_empty());
    }

    #[test]
    fn top_divided_power_bidegree() {
        for p in [3u32, 5, 7] {
            let g = torus(Field::rationals(), p);
            let m = mono(&g, &[("c⊗x2", p)], &[]);
            let b = m.bidegree(&g);
            assert_eq!((b.s(), b.t()), (p as i64 - 1, 1 - p as i64));
            assert!(ce_basis(&g, p).contains(&m));
        }
    }

    #[test]
    fn differential_examples() {
        let f = Field::rationals();
        let g = torus(f, 2);
        let d = ce_differential(&mono(&g, &[("d⊗x2", 2)], &[]), &g, f).unwrap();
        assert_eq!(d, BTreeMap::from([(mono(&g, &[], &["d⊗[x2,x2]"]), f.from_ratio(1, 2).unwrap())]));
        assert!(ce_differential(&mono(&g, &[("c⊗x2", 2)], &[]), &g, f).unwrap().is_empty());
        let d = ce_differential(&mono(&g, &[], &["a1⊗x2", "b1⊗x2"]), &g, f).unwrap();
        assert_eq!(d, BTreeMap::from([(mono(&g, &[], &["c⊗[x2,x2]"]), f.one())]));
        for m in ce_basis(&g, 1) {
            assert!(ce_differential(&m, &g, f).unwrap().is_empty());
        }
    }

    #[test]
    fn divided_power_merge() {
        let (v, c) = multiply_gamma_one(&[(3, 2)], 3);
        assert_eq!((v, c), (vec![(3, 3)], 3));
        let (v, c) = multiply_gamma_one(&[(3, 2)], 1);
        assert_eq!((v, c), (vec![(1, 1), (3, 2)], 1));
        assert_eq!(insert_odd(&[1, 4], 2), Some((vec![1, 2, 4], 1)));
        assert_eq!(insert_odd(&[1, 4], 4), None);

        // [d⊗x2, a1⊗x2] = a1⊗[x2,x2] lands on an existing γ₁ factor
        let f = Field::rationals();
        let g = torus(f, 4);
        let m = mono(&g, &[("a1⊗[x2,x2]", 1), ("d⊗x2", 1)], &["a1⊗x2"]);
        let d = ce_differential(&m, &g, f).unwrap();
        assert_eq!(d, BTreeMap::from([(mono(&g, &[("a1⊗[x2,x2]", 2)], &[]), f.from_integer(2))]));
    }

    #[test]
    fn weight_two_rank_at_t_one() {
        let f = Field::rationals();
        let g = torus(f, 2);
        let cx = CEComplex::build(&g, 2).unwrap();
        let d = cx.chain().boundary(2).unwrap();
        let cols: Vec<usize> = (0..d.domain().dim()).filter(|&j| d.domain().degree(j).t() == 1).collect();
        assert_eq!(cols.len(), 2);
        let rows: Vec<_> = cols.iter().map(|&j| d.column(j).to_vec()).collect();
        assert_eq!(crate::echelon::rank(rows, f), 1);
    }

    #[test]
    fn small_torus_homology() {
        let q = Field::rationals();
        let h = ce_homology(&Surface::torus(), 1, q).unwrap();
        assert_eq!(h.dense_totals(1), (0, vec![1, 2, 1]));
        let h = ce_homology(&Surface::torus(), 2, q).unwrap();
        assert_eq!(h.dense_totals(2), (0, vec![1, 2, 1]));
        let h = ce_homology(&Surface::torus(), 3, q).unwrap();
        assert_eq!(h.dense_totals(3), (0, vec![1, 2, 3, 4, 2]));
        assert!(ce_homology(&Surface::torus(), 0, q).unwrap().totals().next().is_none());
    }

    #[test]
    fn fault_is_detected() {
        let f = Field::rationals();
        let g = torus(f, 4);
        let cx = CEComplex::build_with(&g, 4, Some(Fault::MixedTermSign)).unwrap();
        assert!(matches!(cx.homology(), Err(Error::NonZeroComposite { weight: 4, .. })));
        assert!(CEComplex::build(&g, 4).unwrap().homology().is_ok());
    }

    #[test]
    fn top_class_survives_in_char_three() {
        let f3 = Field::prime(3).unwrap();
        let g = torus(f3, 3);
        let cx = CEComplex::build(&g, 3).unwrap();
        assert!(cx.is_nonzero_class(&mono(&g, &[("c⊗x2", 3)], &[])).unwrap());
        // ⟨c⊗[x2,x2]⟩ = ∂⟨a1⊗x2, b1⊗x2⟩ at weight 2
        let cx2 = CEComplex::build(&g, 2).unwrap();
        assert!(!cx2.is_nonzero_class(&mono(&g, &[], &["c⊗[x2,x2]"])).unwrap());
        assert!(cx2.is_nonzero_class(&mono(&g, &[("c⊗x2", 2)], &[])).unwrap());
    }

    #[test]
    fn compare_refuses_weight_above_p() {
        assert!(matches!(compare(&Surface::torus(), 5, 6), Err(Error::WeightAboveP { k: 6, p: 5 })));
        assert!(matches!(compare(&Surface::torus(), 2, 1), Err(Error::EvenCharacteristic(2))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn surfaces() -> impl Strategy<Value = Surface> {
            prop_oneof![(0u32..4).prop_map(Surface::closed), (0u32..4).prop_map(Surface::punctured)]
        }

        fn fields() -> impl Strategy<Value = Field> {
            prop_oneof![Just(Field::rationals()), prop::sample::select(vec![3u64, 5, 7, 11]).prop_map(|p| Field::prime(p).unwrap())]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn differential_respects_grading(s in surfaces(), f in fields(), k in 1u32..6) {
                let g = surface_algebra(&s, k, f).unwrap();
                for m in ce_basis(&g, k) {
                    let b = m.bidegree(&g);
                    for (image, c) in ce_differential(&m, &g, f).unwrap() {
                        prop_assert!(!f.is_zero(&c));
                        let bi = image.bidegree(&g);
                        prop_assert_eq!(bi.weight, b.weight);
                        prop_assert_eq!((bi.s(), bi.t()), (b.s() - 1, b.t()));
                    }
                }
                let cx = CEComplex::build(&g, k).unwrap();
                prop_assert!(cx.chain().check_square_zero().is_ok());
            }

            #[test]
            fn mod_p_bounds_rational(s in surfaces(), p in prop::sample::select(vec![3u64, 5, 7]), k in 1u32..5) {
                let q = ce_homology(&s, k, Field::rationals()).unwrap();
                let fp = ce_homology(&s, k, Field::prime(p).unwrap()).unwrap();
                for ((w, a, b), d) in q.bidegrees() {
                    prop_assert!(fp.bidegree(w, a, b) >= d);
                }
            }
        }
    }
}
