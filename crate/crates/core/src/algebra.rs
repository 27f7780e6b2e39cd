//! Finite graded-commutative coefficient algebras and the tensor shifted Lie
//! algebra `𝔤 = A ⊗ L`.
//!
//! For `y ⊗ x` the degree is `|x| − cohdeg(y)` and the bracket is
//!
//! ```text
//! [y₁⊗x₁, y₂⊗x₂] = (−1)^{|x₁|·cohdeg(y₂)} (y₁∪y₂) ⊗ [x₁,x₂]
//! ```
//!
//! The sign is the Koszul sign of moving `x₁` past `y₂`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{free_lie_basis, CharMode, Generator, LieBasis};
use crate::scalar::{Field, Scalar};

/// Tag recorded in every output table.
pub const KOSZUL_SIGN_TAG: &str = "(-1)^{|x1|*cohdeg(y2)}";

pub type AlgebraVector = Vec<(usize, Scalar)>;

#[derive(Debug, Clone)]
pub struct GradedCommutativeAlgebra {
    field: Field,
    names: Vec<String>,
    degrees: Vec<i64>,
    products: HashMap<(usize, usize), AlgebraVector>,
    unit: Option<usize>,
}

// JSON presentation ---------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub name: String,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<Term>,
}

/// Field-independent presentation of a graded-commutative algebra with
/// integer structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraPresentation {
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

impl AlgebraPresentation {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidAlgebra(format!("schema: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Build and validate over `field`.
    pub fn build(&self, field: Field) -> Result<GradedCommutativeAlgebra> {
        let basis: Vec<(String, i64)> = self.basis.iter().map(|b| (b.name.clone(), b.degree)).collect();
        let products = self
            .products
            .iter()
            .map(|p| {
                let result = p.result.iter().map(|t| (t.name.clone(), field.from_integer(t.coeff))).collect();
                (p.left.clone(), p.right.clone(), result)
            })
            .collect();
        GradedCommutativeAlgebra::new(field, basis, products, self.unit.clone())
    }

    pub fn surface(genus: u32, variant: SurfaceVariant) -> Self {
        let mut basis = Vec::new();
        if variant == SurfaceVariant::Closed {
            basis.push(BasisEntry {
                name: "d".into(),
                degree: 0,
            });
        }
        let mut products = Vec::new();
        for i in 1..=genus {
            basis.push(BasisEntry {
                name: format!("a{i}"),
                degree: 1,
            });
            basis.push(BasisEntry {
                name: format!("b{i}"),
                degree: 1,
            });
            products.push(ProductEntry {
                left: format!("a{i}"),
                right: format!("b{i}"),
                result: vec![Term {
                    name: "c".into(),
                    coeff: 1,
                }],
            });
        }
        basis.push(BasisEntry {
            name: "c".into(),
            degree: 2,
        });
        Self {
            basis,
            products,
            unit: (variant == SurfaceVariant::Closed).then(|| "d".to_string()),
        }
    }
}

/// `(left, right, Σ coeff·name)`.
pub type ProductRow = (String, String, Vec<(String, Scalar)>);

impl GradedCommutativeAlgebra {
    /// Products not listed are zero unless implied by the unit or by graded
    /// commutativity from the mirrored entry.
    pub fn new(
        field: Field,
        basis: Vec<(String, i64)>,
        products: Vec<ProductRow>,
        unit: Option<String>,
    ) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, deg) in basis {
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate basis element {name}")));
            }
            names.push(name);
            degrees.push(deg);
        }
        let lookup = |n: &str| -> Result<usize> {
            index
                .get(n)
                .copied()
                .ok_or_else(|| Error::InvalidAlgebra(format!("unknown basis element {n}")))
        };

        let mut table: HashMap<(usize, usize), AlgebraVector> = HashMap::new();
        for (l, r, result) in products {
            let (li, ri) = (lookup(&l)?, lookup(&r)?);
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (n, c) in result {
                field.check(&c)?;
                let k = lookup(&n)?;
                if degrees[k] != degrees[li] + degrees[ri] {
                    return Err(Error::InvalidAlgebra(format!(
                        "{l}∪{r} has degree {} but {n} has degree {}",
                        degrees[li] + degrees[ri],
                        degrees[k]
                    )));
                }
                let e = acc.entry(k).or_insert_with(|| field.zero());
                *e = field.add(e, &c);
            }
            let v: AlgebraVector = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
            if table.insert((li, ri), v).is_some() {
                return Err(Error::InvalidAlgebra(format!("product {l}∪{r} listed twice")));
            }
        }

        let unit = unit.map(|u| lookup(&u)).transpose()?;
        if let Some(u) = unit {
            if degrees[u] != 0 {
                return Err(Error::InvalidAlgebra(format!("unit {} must have degree 0", names[u])));
            }
            for y in 0..names.len() {
                let id = vec![(y, field.one())];
                for key in [(u, y), (y, u)] {
                    match table.get(&key) {
                        Some(v) if *v != id => {
                            return Err(Error::InvalidAlgebra(format!("unit {} does not act as identity on {}", names[u], names[y])));
                        }
                        Some(_) => {}
                        None => {
                            table.insert(key, id.clone());
                        }
                    }
                }
            }
        }

        // complete by graded commutativity
        let listed: Vec<((usize, usize), AlgebraVector)> = table.iter().map(|(k, v)| (*k, v.clone())).collect();
        for ((l, r), v) in listed {
            table.entry((r, l)).or_insert_with(|| {
                let s = field.sign(degrees[l] * degrees[r]);
                v.iter().map(|(k, c)| (*k, field.mul(&s, c))).collect()
            });
        }
        table.retain(|_, v| !v.is_empty());

        let algebra = Self {
            field,
            names,
            degrees,
            products: table,
            unit,
        };
        algebra.verify()?;
        Ok(algebra)
    }

    /// Check graded commutativity and associativity on all basis elements.
    pub fn verify(&self) -> Result<()> {
        let f = self.field;
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let s = f.sign(self.degrees[a] * self.degrees[b]);
                let ab = self.product(a, b);
                let ba = scale(f, &s, self.product(b, a));
                if ab != ba {
                    return Err(Error::InvalidAlgebra(format!(
                        "graded commutativity fails for {}, {}",
                        self.names[a], self.names[b]
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.multiply(&self.product(a, b), &[(c, f.one())]);
                    let right = self.multiply(&[(a, f.one())], &self.product(b, c));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails for {}, {}, {}",
                            self.names[a], self.names[b], self.names[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Cohomological degree.
    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `e_a ∪ e_b`.
    pub fn product(&self, a: usize, b: usize) -> AlgebraVector {
        self.products.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn multiply(&self, u: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> AlgebraVector {
        let f = self.field;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (a, x) in u {
            for (b, y) in v {
                let xy = f.mul(x, y);
                for (k, c) in self.product(*a, *b) {
                    let e = acc.entry(k).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&xy, &c));
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect()
    }
}

fn scale(f: Field, s: &Scalar, v: AlgebraVector) -> AlgebraVector {
    v.into_iter()
        .map(|(k, c)| (k, f.mul(s, &c)))
        .filter(|(_, c)| !f.is_zero(c))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceVariant {
    Closed,
    /// One-point compactification of the once-punctured surface, reduced.
    PuncturedCompactified,
}

/// Cohomology of `Σ_g` (closed, unital with unit `d`) or the reduced
/// cohomology of `Σ_{g,1}⁺` (non-unital).
pub fn surface_cohomology(genus: u32, variant: SurfaceVariant, field: Field) -> Result<GradedCommutativeAlgebra> {
    AlgebraPresentation::surface(genus, variant).build(field)
}

/// The surfaces this crate knows how to feed into the CE pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Surface {
    Closed { genus: u32 },
    Punctured { genus: u32 },
    Custom { name: String, presentation: AlgebraPresentation },
}

impl Surface {
    pub fn torus() -> Self {
        Surface::Closed { genus: 1 }
    }

    pub fn closed(genus: u32) -> Self {
        Surface::Closed { genus }
    }

    pub fn punctured(genus: u32) -> Self {
        Surface::Punctured { genus }
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        match self {
            Surface::Closed { genus } => AlgebraPresentation::surface(*genus, SurfaceVariant::Closed),
            Surface::Punctured { genus } => AlgebraPresentation::surface(*genus, SurfaceVariant::PuncturedCompactified),
            Surface::Custom { presentation, .. } => presentation.clone(),
        }
    }

    pub fn cohomology(&self, field: Field) -> Result<GradedCommutativeAlgebra> {
        self.presentation().build(field)
    }

    /// The weight-one Lie generator: a class of degree 2 (the dimension).
    pub fn generator(&self) -> Generator {
        Generator::new("x2", 2, 1)
    }

    /// `None` when the mod-p comparison theorems cover this surface.
    pub fn scope_warning(&self) -> Option<String> {
        match self {
            Surface::Closed { genus: 1 } => None,
            Surface::Punctured { genus } if *genus >= 1 => None,
            Surface::Closed { genus } => Some(format!(
                "closed genus {genus} is outside the range of the mod-p comparison theorems (torus only)"
            )),
            Surface::Punctured { .. } => Some("punctured genus 0 is outside the range of the mod-p comparison theorems".into()),
            Surface::Custom { .. } => Some("custom algebras are outside the range of the mod-p comparison theorems".into()),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::Closed { genus: 1 } => f.write_str("torus"),
            Surface::Closed { genus } => write!(f, "closed-g{genus}"),
            Surface::Punctured { genus } => write!(f, "punctured-g{genus}"),
            Surface::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

// Tensor Lie algebra --------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TensorElement {
    /// Index into the coefficient algebra basis.
    pub coeff: usize,
    /// Index into the Lie basis.
    pub lie: usize,
    pub label: String,
    pub weight: u32,
    pub degree: i64,
}

impl TensorElement {
    pub fn is_even(&self) -> bool {
        self.degree.rem_euclid(2) == 0
    }
}

#[derive(Debug, Clone)]
pub struct TensorLieAlgebra {
    field: Field,
    algebra: Arc<GradedCommutativeAlgebra>,
    lie: Arc<LieBasis>,
    elements: Vec<TensorElement>,
    index: HashMap<(usize, usize), usize>,
    brackets: HashMap<(usize, usize), AlgebraVector>,
}

pub fn tensor_lie(algebra: Arc<GradedCommutativeAlgebra>, lie: Arc<LieBasis>) -> Result<TensorLieAlgebra> {
    if algebra.field() != lie.field() {
        return Err(Error::FieldMismatch {
            expected: lie.field().to_string(),
            found: algebra.field().to_string(),
        });
    }
    let field = lie.field();
    let mut elements = Vec::new();
    let mut index = HashMap::new();
    for (li, le) in lie.elements().iter().enumerate() {
        for yi in 0..algebra.len() {
            index.insert((yi, li), elements.len());
            elements.push(TensorElement {
                coeff: yi,
                lie: li,
                label: format!("{}⊗{}", algebra.name(yi), le.word),
                weight: le.weight,
                degree: le.degree - algebra.degree(yi),
            });
        }
    }
    let mut brackets = HashMap::new();
    for (u, eu) in elements.iter().enumerate() {
        for (v, ev) in elements.iter().enumerate() {
            if eu.weight + ev.weight > lie.max_weight() {
                continue;
            }
            let s = field.sign(lie.element(eu.lie).degree * algebra.degree(ev.coeff));
            let yy = algebra.product(eu.coeff, ev.coeff);
            let xx = lie.bracket(eu.lie, ev.lie)?;
            let mut out: AlgebraVector = Vec::new();
            for (y, a) in &yy {
                for (x, b) in xx {
                    let c = field.mul(&s, &field.mul(a, b));
                    if !field.is_zero(&c) {
                        out.push((index[&(*y, *x)], c));
                    }
                }
            }
            out.sort_by_key(|e| e.0);
            if !out.is_empty() {
                brackets.insert((u, v), out);
            }
        }
    }
    Ok(TensorLieAlgebra {
        field,
        algebra,
        lie,
        elements,
        index,
        brackets,
    })
}

impl TensorLieAlgebra {
    /// `A ⊗ Free(x2)` for a surface, with Lie basis up to `max_weight`.
    pub fn for_surface(surface: &Surface, max_weight: u32, field: Field, mode: CharMode) -> Result<Self> {
        let algebra = Arc::new(surface.cohomology(field)?);
        let lie = Arc::new(free_lie_basis(&[surface.generator()], max_weight, field, mode)?);
        tensor_lie(algebra, lie)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn algebra(&self) -> &GradedCommutativeAlgebra {
        &self.algebra
    }

    pub fn lie(&self) -> &LieBasis {
        &self.lie
    }

    pub fn max_weight(&self) -> u32 {
        self.lie.max_weight()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &TensorElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[TensorElement] {
        &self.elements
    }

    pub fn position(&self, coeff: usize, lie: usize) -> Option<usize> {
        self.index.get(&(coeff, lie)).copied()
    }

    pub fn position_by_label(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label == label)
    }

    /// `[e_u, e_v]`; empty when zero. Errors past the weight bound.
    pub fn bracket(&self, u: usize, v: usize) -> Result<&[(usize, Scalar)]> {
        let w = self.elements[u].weight + self.elements[v].weight;
        if w > self.max_weight() {
            return Err(Error::WeightOverflow {
                weight: w,
                max: self.max_weight(),
            });
        }
        Ok(self.brackets.get(&(u, v)).map(Vec::as_slice).unwrap_or(&[]))
    }

    fn bracket_vectors(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Result<AlgebraVector> {
        let f = self.field;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = f.mul(x, y);
                for (k, c) in self.bracket(*i, *j)? {
                    let e = acc.entry(*k).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&xy, c));
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect())
    }

    /// Graded symmetry and Jacobi on every basis pair / triple within the
    /// weight bound.
    pub fn verify(&self) -> Result<()> {
        let f = self.field;
        let n = self.len();
        let max = self.max_weight();
        for u in 0..n {
            for v in 0..n {
                let (eu, ev) = (&self.elements[u], &self.elements[v]);
                if eu.weight + ev.weight > max {
                    continue;
                }
                let s = f.sign(eu.degree * ev.degree);
                let uv = self.bracket(u, v)?.to_vec();
                let vu = scale(f, &s, self.bracket(v, u)?.to_vec());
                if uv != vu {
                    return Err(Error::InvalidAlgebra(format!("graded symmetry fails for {}, {}", eu.label, ev.label)));
                }
                for w in 0..n {
                    let ew = &self.elements[w];
                    if eu.weight + ev.weight + ew.weight > max {
                        continue;
                    }
                    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (a, b, c, sdeg) in [
                        (u, v, w, eu.degree * ew.degree),
                        (v, w, u, ev.degree * eu.degree),
                        (w, u, v, ew.degree * ev.degree),
                    ] {
                        let inner = self.bracket(b, c)?.to_vec();
                        for (k, val) in self.bracket_vectors(&[(a, f.one())], &inner)? {
                            let e = acc.entry(k).or_insert_with(|| f.zero());
                            *e = f.add(e, &f.mul(&f.sign(sdeg), &val));
                        }
                    }
                    if acc.values().any(|c| !f.is_zero(c)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "Jacobi fails for {}, {}, {}",
                            eu.label, ev.label, ew.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Dimensions of one weight component by degree.
    pub fn dims_by_degree(&self, weight: u32) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for e in self.elements.iter().filter(|e| e.weight == weight) {
            *out.entry(e.degree).or_default() += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(f: Field, a: &GradedCommutativeAlgebra, terms: &[(&str, i64)]) -> AlgebraVector {
        let mut v: AlgebraVector = terms.iter().map(|(n, c)| (a.index_of(n).unwrap(), f.from_integer(*c))).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    #[test]
    fn torus_cup_products() {
        let f = Field::rationals();
        let t = surface_cohomology(1, SurfaceVariant::Closed, f).unwrap();
        let i = |n| t.index_of(n).unwrap();
        assert_eq!(t.product(i("a1"), i("b1")), vec_of(f, &t, &[("c", 1)]));
        assert_eq!(t.product(i("b1"), i("a1")), vec_of(f, &t, &[("c", -1)]));
        assert!(t.product(i("a1"), i("a1")).is_empty());
        assert!(t.product(i("c"), i("c")).is_empty());
        assert_eq!(t.product(i("d"), i("c")), vec_of(f, &t, &[("c", 1)]));
        assert_eq!(t.unit(), Some(i("d")));
    }

    #[test]
    fn punctured_genus_two() {
        let f = Field::prime(5).unwrap();
        let a = surface_cohomology(2, SurfaceVariant::PuncturedCompactified, f).unwrap();
        assert_eq!(a.len(), 5);
        assert!(a.product(a.index_of("a1").unwrap(), a.index_of("b2").unwrap()).is_empty());
        assert_eq!(a.unit(), None);
    }

    #[test]
    fn rejects_bad_presentations() {
        let bad_degree = r#"{"basis":[{"name":"a","degree":1},{"name":"c","degree":3}],
            "products":[{"left":"a","right":"a","result":[{"name":"c","coeff":1}]}]}"#;
        let err = AlgebraPresentation::from_json(bad_degree).unwrap().build(Field::rationals());
        assert!(matches!(err, Err(Error::InvalidAlgebra(_))));
        // odd square must vanish by graded commutativity
        let odd_square = r#"{"basis":[{"name":"a","degree":1},{"name":"c","degree":2}],
            "products":[{"left":"a","right":"a","result":[{"name":"c","coeff":1}]}]}"#;
        let err = AlgebraPresentation::from_json(odd_square).unwrap().build(Field::rationals());
        assert!(matches!(err, Err(Error::InvalidAlgebra(_))));
        assert!(AlgebraPresentation::from_json(r#"{"basis": 3}"#).is_err());
        assert!(AlgebraPresentation::from_json(r#"{"basis": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn rejects_non_associative() {
        // x·x = y, x·y = 0 in degree 0, but (x·x)·x = y·x must equal x·(x·x) = x·y.
        let text = r#"{"basis":[{"name":"x","degree":0},{"name":"y","degree":0}],
            "products":[{"left":"x","right":"x","result":[{"name":"y","coeff":1}]},
                        {"left":"y","right":"x","result":[{"name":"x","coeff":1}]}]}"#;
        let err = AlgebraPresentation::from_json(text).unwrap().build(Field::rationals());
        assert!(matches!(err, Err(Error::InvalidAlgebra(m)) if m.contains("associativity") || m.contains("commutativity")));
    }

    #[test]
    fn presentation_round_trip() {
        let p = AlgebraPresentation::surface(2, SurfaceVariant::Closed);
        assert_eq!(AlgebraPresentation::from_json(&p.to_json().unwrap()).unwrap(), p);
    }

    fn torus_g(field: Field) -> TensorLieAlgebra {
        TensorLieAlgebra::for_surface(&Surface::torus(), 3, field, CharMode::Standard).unwrap()
    }

    #[test]
    fn torus_tensor_degrees() {
        let g = torus_g(Field::rationals());
        assert_eq!(g.dims_by_degree(1), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(g.dims_by_degree(2), BTreeMap::from([(1, 1), (2, 2), (3, 1)]));
        let deg = |l: &str| g.element(g.position_by_label(l).unwrap()).degree;
        assert_eq!(deg("d⊗x2"), 2);
        assert_eq!(deg("a1⊗x2"), 1);
        assert_eq!(deg("b1⊗x2"), 1);
        assert_eq!(deg("c⊗x2"), 0);
        assert_eq!(deg("c⊗[x2,x2]"), 1);
    }

    #[test]
    fn torus_tensor_brackets() {
        let f = Field::rationals();
        let g = torus_g(f);
        let at = |l: &str| g.position_by_label(l).unwrap();
        assert_eq!(g.bracket(at("d⊗x2"), at("a1⊗x2")).unwrap(), &[(at("a1⊗[x2,x2]"), f.one())]);
        assert!(g.bracket(at("c⊗x2"), at("a1⊗x2")).unwrap().is_empty());
        // |x2| even: the Koszul sign is +1
        assert_eq!(g.bracket(at("a1⊗x2"), at("b1⊗x2")).unwrap(), &[(at("c⊗[x2,x2]"), f.one())]);
        assert_eq!(g.bracket(at("b1⊗x2"), at("a1⊗x2")).unwrap(), &[(at("c⊗[x2,x2]"), f.from_integer(-1))]);
        g.verify().unwrap();
    }

    #[test]
    fn weight_one_dimension_counts() {
        for genus in 0..4 {
            let closed = TensorLieAlgebra::for_surface(&Surface::closed(genus), 2, Field::rationals(), CharMode::Standard).unwrap();
            assert_eq!(closed.dims_by_degree(1).values().sum::<usize>(), 2 * genus as usize + 2);
            let punct = TensorLieAlgebra::for_surface(&Surface::punctured(genus), 2, Field::rationals(), CharMode::Standard).unwrap();
            assert_eq!(punct.dims_by_degree(1).values().sum::<usize>(), 2 * genus as usize + 1);
        }
    }

    #[test]
    fn bases_coincide_across_fields() {
        for s in [Surface::torus(), Surface::punctured(1), Surface::punctured(2)] {
            let q = TensorLieAlgebra::for_surface(&s, 5, Field::rationals(), CharMode::Standard).unwrap();
            for p in [3, 5, 7] {
                let m = TensorLieAlgebra::for_surface(&s, 5, Field::prime(p).unwrap(), CharMode::Standard).unwrap();
                let ql: Vec<_> = q.elements().iter().map(|e| (&e.label, e.weight, e.degree)).collect();
                let ml: Vec<_> = m.elements().iter().map(|e| (&e.label, e.weight, e.degree)).collect();
                assert_eq!(ql, ml, "{s} over F_{p}");
                m.verify().unwrap();
            }
            q.verify().unwrap();
        }
    }

    #[test]
    fn field_mismatch_rejected() {
        let a = Arc::new(surface_cohomology(1, SurfaceVariant::Closed, Field::rationals()).unwrap());
        let l = Arc::new(free_lie_basis(&[Generator::new("x2", 2, 1)], 2, Field::prime(5).unwrap(), CharMode::Standard).unwrap());
        assert!(matches!(tensor_lie(a, l), Err(Error::FieldMismatch { .. })));
    }
}
