//! Free shifted graded Lie algebras on weighted generators.
//!
//! The bracket has degree −1 (`|[u,v]| = |u| + |v| − 1`), is graded
//! symmetric `[u,v] = (−1)^{|u||v|}[v,u]`, satisfies the graded Jacobi
//! identity, and adds weights. In characteristic 3 the standard theory also
//! imposes `[[x,x],x] = 0`; the operadic variant does not.
//!
//! The basis is built one weight at a time. Every weight-`w` element is a
//! combination of brackets `[u,v]` of basis elements of lower weight, so the
//! weight-`w` component is the span of those formal brackets modulo the
//! symmetry, Jacobi and (optionally) cubic relations, computed by exact
//! row reduction. The non-pivot brackets become the normal forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::echelon::{self, SparseRow};
use crate::error::{Error, Result};
use crate::scalar::{Field, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64, weight: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            weight,
        }
    }
}

/// A binary bracket tree over generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketWord {
    Leaf(Generator),
    Node(Box<BracketWord>, Box<BracketWord>),
}

impl BracketWord {
    pub fn leaf(g: &Generator) -> Self {
        BracketWord::Leaf(g.clone())
    }

    pub fn bracket(u: BracketWord, v: BracketWord) -> Self {
        BracketWord::Node(Box::new(u), Box::new(v))
    }

    pub fn degree(&self) -> i64 {
        match self {
            BracketWord::Leaf(g) => g.degree,
            BracketWord::Node(u, v) => u.degree() + v.degree() - 1,
        }
    }

    pub fn weight(&self) -> u32 {
        match self {
            BracketWord::Leaf(g) => g.weight,
            BracketWord::Node(u, v) => u.weight() + v.weight(),
        }
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketWord::Leaf(g) => f.write_str(&g.name),
            BracketWord::Node(u, v) => write!(f, "[{u},{v}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CharMode {
    #[default]
    Standard,
    /// Characteristic-3 operadic variant: `[[x,x],x]` is not forced to vanish.
    OperadicChar3,
}

/// Sparse vector in the basis of a [`LieBasis`], sorted by index.
pub type LieVector = Vec<(usize, Scalar)>;

#[derive(Debug, Clone)]
pub struct LieElement {
    pub word: BracketWord,
    pub weight: u32,
    pub degree: i64,
}

#[derive(Debug, Clone)]
pub struct LieBasis {
    field: Field,
    mode: CharMode,
    max_weight: u32,
    generators: Vec<Generator>,
    elements: Vec<LieElement>,
    brackets: HashMap<(usize, usize), LieVector>,
}

fn parity_sign(field: Field, a: i64, b: i64) -> Scalar {
    field.sign(a * b)
}

type PairCombination = Vec<((usize, usize), Scalar)>;

/// Basis of the free shifted Lie algebra on `generators` in weights `1..=max_weight`.
pub fn free_lie_basis(generators: &[Generator], max_weight: u32, field: Field, mode: CharMode) -> Result<LieBasis> {
    if max_weight == 0 {
        return Err(Error::InvalidInput("max weight must be positive".into()));
    }
    if mode == CharMode::OperadicChar3 && field.spec() != FieldSpec::PrimeField(3) {
        return Err(Error::InvalidInput("operadic char-3 mode needs F_3 coefficients".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if g.weight == 0 {
            return Err(Error::InvalidInput(format!("generator {} has weight 0", g.name)));
        }
        if generators[..i].iter().any(|h| h.name == g.name) {
            return Err(Error::InvalidInput(format!("duplicate generator {}", g.name)));
        }
    }
    let mut basis = LieBasis {
        field,
        mode,
        max_weight,
        generators: generators.to_vec(),
        elements: Vec::new(),
        brackets: HashMap::new(),
    };
    for w in 1..=max_weight {
        basis.extend_to(w)?;
    }
    Ok(basis)
}

impl LieBasis {
    fn extend_to(&mut self, w: u32) -> Result<()> {
        let field = self.field;
        let lower = self.elements.len();
        // Candidate brackets [i, j] grouped by degree.
        let mut groups: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..lower {
            for j in 0..lower {
                if self.elements[i].weight + self.elements[j].weight == w {
                    let d = self.elements[i].degree + self.elements[j].degree - 1;
                    groups.entry(d).or_default().push((i, j));
                }
            }
        }

        let mut new_elements: Vec<LieElement> = self
            .generators
            .iter()
            .filter(|g| g.weight == w)
            .map(|g| LieElement {
                word: BracketWord::leaf(g),
                weight: w,
                degree: g.degree,
            })
            .collect();
        // (i, j) ↦ combination of candidate normal forms, by candidate pair
        let mut pending: Vec<((usize, usize), PairCombination)> = Vec::new();

        for (_degree, mut cands) in groups {
            // least preferred first; preferred forms have left weight ≤ right weight
            let pref = |&(i, j): &(usize, usize)| (self.elements[i].weight > self.elements[j].weight, i, j);
            cands.sort_by_key(|c| std::cmp::Reverse(pref(c)));
            let col: HashMap<(usize, usize), usize> = cands.iter().enumerate().map(|(k, c)| (*c, k)).collect();
            let relations = self.relations(w, &cands, &col)?;
            let rref = echelon::reduced_echelon(relations, field);
            for (k, &c) in cands.iter().enumerate() {
                let combo = match rref.get(&k) {
                    None => vec![(c, field.one())],
                    Some(row) => row[1..].iter().map(|(kk, v)| (cands[*kk], field.neg(v))).collect(),
                };
                pending.push((c, combo));
            }
            for (k, &(i, j)) in cands.iter().enumerate() {
                if !rref.contains_key(&k) {
                    let word = BracketWord::bracket(self.elements[i].word.clone(), self.elements[j].word.clone());
                    new_elements.push(LieElement {
                        weight: w,
                        degree: word.degree(),
                        word,
                    });
                }
            }
        }

        new_elements.sort_by_cached_key(|e| (e.degree, e.word.to_string()));
        let index_of: HashMap<String, usize> = new_elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.word.to_string(), lower + k))
            .collect();
        let key_index = |(i, j): (usize, usize), elems: &[LieElement]| -> usize {
            let name = format!("[{},{}]", elems[i].word, elems[j].word);
            index_of[&name]
        };
        let mut table = Vec::with_capacity(pending.len());
        for (c, combo) in pending {
            let mut v: LieVector = combo
                .into_iter()
                .map(|(nf, s)| (key_index(nf, &self.elements), s))
                .collect();
            v.sort_by_key(|e| e.0);
            table.push((c, v));
        }
        self.elements.extend(new_elements);
        self.brackets.extend(table);
        Ok(())
    }

    fn relations(&self, w: u32, cands: &[(usize, usize)], col: &HashMap<(usize, usize), usize>) -> Result<Vec<SparseRow>> {
        let field = self.field;
        let mut rows: Vec<SparseRow> = Vec::new();
        let push = |rows: &mut Vec<SparseRow>, terms: Vec<((usize, usize), Scalar)>| {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (c, s) in terms {
                let k = col[&c];
                let e = acc.entry(k).or_insert_with(|| field.zero());
                *e = field.add(e, &s);
            }
            let row: SparseRow = acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect();
            if !row.is_empty() {
                rows.push(row);
            }
        };

        // graded symmetry
        for &(i, j) in cands {
            if i <= j {
                let s = parity_sign(field, self.elements[i].degree, self.elements[j].degree);
                push(&mut rows, vec![((i, j), field.one()), ((j, i), field.neg(&s))]);
            }
        }

        // graded Jacobi on all basis triples of total weight w in this degree
        let degree = {
            let (i, j) = cands[0];
            self.elements[i].degree + self.elements[j].degree - 1
        };
        let n = self.elements.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ea, eb, ec) = (&self.elements[a], &self.elements[b], &self.elements[c]);
                    if ea.weight + eb.weight + ec.weight != w || ea.degree + eb.degree + ec.degree - 2 != degree {
                        continue;
                    }
                    let mut terms = Vec::new();
                    for (outer, (x, y), sdeg) in [
                        (a, (b, c), ea.degree * ec.degree),
                        (b, (c, a), eb.degree * ea.degree),
                        (c, (a, b), ec.degree * eb.degree),
                    ] {
                        let s = field.sign(sdeg);
                        for (k, v) in &self.brackets[&(x, y)] {
                            terms.push(((outer, *k), field.mul(&s, v)));
                        }
                    }
                    push(&mut rows, terms);
                }
            }
        }

        // [[u,u],u] = 0 in standard characteristic 3
        if self.mode == CharMode::Standard && field.characteristic() == 3 {
            for u in 0..n {
                let e = &self.elements[u];
                if e.weight * 3 == w && e.degree % 2 == 0 && 3 * e.degree - 2 == degree {
                    let terms = self.brackets[&(u, u)].iter().map(|(k, v)| ((*k, u), v.clone())).collect();
                    push(&mut rows, terms);
                }
            }
        }
        Ok(rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn mode(&self) -> CharMode {
        self.mode
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &LieElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[LieElement] {
        &self.elements
    }

    /// Basis indices of one weight, in normal-form order.
    pub fn indices_of_weight(&self, w: u32) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| self.elements[i].weight == w).collect()
    }

    pub fn dim(&self, w: u32) -> usize {
        self.indices_of_weight(w).len()
    }

    /// Dimensions of the weight-`w` component by degree.
    pub fn dims_by_degree(&self, w: u32) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for i in self.indices_of_weight(w) {
            *out.entry(self.elements[i].degree).or_default() += 1;
        }
        out
    }

    /// `[e_i, e_j]` in the basis.
    pub fn bracket(&self, i: usize, j: usize) -> Result<&[(usize, Scalar)]> {
        let w = self.elements[i].weight + self.elements[j].weight;
        if w > self.max_weight {
            return Err(Error::WeightOverflow {
                weight: w,
                max: self.max_weight,
            });
        }
        Ok(&self.brackets[&(i, j)])
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_vectors(&self, u: &LieVector, v: &LieVector) -> Result<LieVector> {
        let field = self.field;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, a) in u {
            for (j, b) in v {
                let ab = field.mul(a, b);
                for (k, c) in self.bracket(*i, *j)? {
                    let e = acc.entry(*k).or_insert_with(|| field.zero());
                    *e = field.add(e, &field.mul(&ab, c));
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect())
    }

    pub fn basis_vector(&self, i: usize) -> LieVector {
        vec![(i, self.field.one())]
    }

    /// Express a bracket word in normal forms.
    pub fn normalize(&self, word: &BracketWord) -> Result<LieVector> {
        if word.weight() > self.max_weight {
            return Err(Error::WeightOverflow {
                weight: word.weight(),
                max: self.max_weight,
            });
        }
        match word {
            BracketWord::Leaf(g) => {
                let i = self
                    .elements
                    .iter()
                    .position(|e| matches!(&e.word, BracketWord::Leaf(h) if h == g))
                    .ok_or_else(|| Error::InvalidInput(format!("unknown generator {}", g.name)))?;
                Ok(self.basis_vector(i))
            }
            BracketWord::Node(u, v) => self.bracket_vectors(&self.normalize(u)?, &self.normalize(v)?),
        }
    }

    /// Left-hand side of the graded Jacobi identity on three vectors.
    pub fn jacobiator(&self, x: (&LieVector, i64), y: (&LieVector, i64), z: (&LieVector, i64)) -> Result<LieVector> {
        let f = self.field;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (a, (b, c), s) in [(x, (y, z), x.1 * z.1), (y, (z, x), y.1 * x.1), (z, (x, y), z.1 * y.1)] {
            let inner = self.bracket_vectors(b.0, c.0)?;
            for (k, v) in self.bracket_vectors(a.0, &inner)? {
                let e = acc.entry(k).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(&f.sign(s), &v));
            }
        }
        Ok(acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect())
    }
}
