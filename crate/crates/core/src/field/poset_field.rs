//! Poset-generated field elements: finite sums of upset indicators tensored
//! with matrices, over a monotone family of matrix spaces, with exact
//! evaluation at poset elements and at spectrum points.

use crate::error::{Error, Result};
use crate::numeric::{in_span, row_echelon_basis, CRat, MatrixC, Rat};
use crate::poset::FinitePoset;
use num_complex::Complex;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// A monotone family of matrix spaces over a poset: each element carries a
/// finite list of generator matrices (all of one shape), and a <= b forces
/// span(M_a) to lie inside span(M_b).
#[derive(Clone, Debug)]
pub struct TroFamily {
    poset: FinitePoset,
    generators: Vec<Vec<MatrixC>>,
    rows: usize,
    cols: usize,
}

impl TroFamily {
    /// Validating constructor; rejects shape clashes and compatibility
    /// violations.
    pub fn new(poset: FinitePoset, generators: Vec<Vec<MatrixC>>) -> Result<Self> {
        let fam = Self::new_unchecked(poset, generators)?;
        if let Some(msg) = fam.compatibility_violation() {
            return Err(Error::structural(msg));
        }
        Ok(fam)
    }

    /// Shape-checked constructor that defers the monotonicity check, so
    /// axiom checkers can report it as a failure instead of erroring.
    pub fn new_unchecked(poset: FinitePoset, generators: Vec<Vec<MatrixC>>) -> Result<Self> {
        if generators.len() != poset.len() {
            return Err(Error::structural(
                "one generator list per poset element is required",
            ));
        }
        let shape = generators
            .iter()
            .flatten()
            .map(|m| (m.rows(), m.cols()))
            .next()
            .ok_or_else(|| Error::structural("family needs at least one generator matrix"))?;
        for m in generators.iter().flatten() {
            if (m.rows(), m.cols()) != shape {
                return Err(Error::structural("family generators must share one shape"));
            }
        }
        Ok(TroFamily {
            poset,
            generators,
            rows: shape.0,
            cols: shape.1,
        })
    }

    /// First monotonicity violation, if any: some a <= b with a generator of
    /// M_a outside span(M_b).
    pub fn compatibility_violation(&self) -> Option<String> {
        let n = self.poset.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.poset.leq(a, b) {
                    let target_basis: Vec<Vec<CRat>> =
                        self.generators[b].iter().map(|m| m.flatten()).collect();
                    for (k, g) in self.generators[a].iter().enumerate() {
                        if !in_span(&target_basis, &g.flatten()) {
                            return Some(format!(
                                "generator {k} of '{}' escapes the span at '{}'",
                                self.poset.name(a),
                                self.poset.name(b)
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn generators_of(&self, a: usize) -> &[MatrixC] {
        &self.generators[a]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// The fiber at t: an echelon basis of span{M_a : a <= t}.
    pub fn fiber_basis(&self, t: usize) -> Vec<Vec<CRat>> {
        let mut vectors = Vec::new();
        for a in 0..self.poset.len() {
            if self.poset.leq(a, t) {
                for g in &self.generators[a] {
                    vectors.push(g.flatten());
                }
            }
        }
        row_echelon_basis(&vectors)
    }

    /// The left algebra family: A_u spanned by the products g h* of the
    /// generators of M_u. Monotone whenever the module family is.
    pub fn left_algebra_family(&self) -> Result<TroFamily> {
        let generators = self
            .generators
            .iter()
            .map(|gens| {
                let mut out = Vec::new();
                for g in gens {
                    for h in gens {
                        out.push(g.mul(&h.adjoint()));
                    }
                }
                out
            })
            .collect();
        TroFamily::new(self.poset.clone(), generators)
    }

    /// The right algebra family: B_u spanned by the products g* h.
    pub fn right_algebra_family(&self) -> Result<TroFamily> {
        let generators = self
            .generators
            .iter()
            .map(|gens| {
                let mut out = Vec::new();
                for g in gens {
                    for h in gens {
                        out.push(g.adjoint().mul(h));
                    }
                }
                out
            })
            .collect();
        TroFamily::new(self.poset.clone(), generators)
    }
}

/// One term: the product of the upset indicators named in `ups`, tensored
/// with a matrix coefficient. A plain generator term has a single upset.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTerm {
    pub ups: BTreeSet<usize>,
    pub coeff: MatrixC,
}

/// A finite sum of indicator-tensor terms, evaluated pointwise. Products,
/// adjoints and the two inner products stay in this class, which is what
/// makes the bimodule identities checkable by exact evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldElement {
    terms: Vec<FieldTerm>,
    rows: usize,
    cols: usize,
}

/// A point at which fields are evaluated: an element of the poset, or a
/// spectrum point given by its generator list and 0/1 assignment.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalPoint {
    Element(usize),
    Spectrum {
        generators: Vec<usize>,
        assignment: Vec<bool>,
    },
}

impl EvalPoint {
    /// Indicator value of the upset of `a` at this point.
    fn chi(&self, a: usize, poset: &FinitePoset) -> Result<bool> {
        match self {
            EvalPoint::Element(t) => Ok(poset.leq(a, *t)),
            EvalPoint::Spectrum {
                generators,
                assignment,
            } => {
                let pos = generators.iter().position(|&g| g == a).ok_or_else(|| {
                    Error::structural(format!(
                        "spectrum point does not carry generator '{}'",
                        poset.name(a)
                    ))
                })?;
                Ok(assignment[pos])
            }
        }
    }

    pub fn describe(&self, poset: &FinitePoset) -> String {
        match self {
            EvalPoint::Element(t) => poset.name(*t).to_string(),
            EvalPoint::Spectrum { generators, assignment } => {
                let bits: Vec<String> = generators
                    .iter()
                    .zip(assignment)
                    .map(|(&g, &b)| format!("{}={}", poset.name(g), b as u8))
                    .collect();
                format!("spectrum[{}]", bits.join(","))
            }
        }
    }
}

impl FieldElement {
    /// The generator field: the indicator of the upset of `a` tensored with
    /// a matrix from span(M_a); membership is checked by a linear solve.
    pub fn generator(family: &TroFamily, a: usize, coeff: MatrixC) -> Result<Self> {
        if a >= family.poset().len() {
            return Err(Error::structural("unknown poset element"));
        }
        if (coeff.rows(), coeff.cols()) != family.shape() {
            return Err(Error::structural("coefficient shape mismatch"));
        }
        let basis: Vec<Vec<CRat>> = family.generators_of(a).iter().map(|m| m.flatten()).collect();
        if !in_span(&basis, &coeff.flatten()) {
            return Err(Error::structural(format!(
                "coefficient is not in the span of the generators at '{}'",
                family.poset().name(a)
            )));
        }
        Ok(FieldElement {
            terms: vec![FieldTerm {
                ups: BTreeSet::from([a]),
                coeff,
            }],
            rows: family.shape().0,
            cols: family.shape().1,
        })
    }

    /// Sum of generator terms.
    pub fn sum_of(family: &TroFamily, parts: Vec<(usize, MatrixC)>) -> Result<Self> {
        let mut total: Option<FieldElement> = None;
        for (a, coeff) in parts {
            let g = FieldElement::generator(family, a, coeff)?;
            total = Some(match total {
                None => g,
                Some(t) => t.add(&g)?,
            });
        }
        total.ok_or_else(|| Error::structural("empty field element"))
    }

    pub fn terms(&self) -> &[FieldTerm] {
        &self.terms
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::structural("field sum shape mismatch"));
        }
        let mut terms = self.terms.clone();
        for t in &other.terms {
            match terms.iter_mut().find(|u| u.ups == t.ups) {
                Some(u) => u.coeff = u.coeff.add(&t.coeff),
                None => terms.push(t.clone()),
            }
        }
        terms.retain(|t| !t.coeff.is_zero());
        Ok(FieldElement {
            terms,
            rows: self.rows,
            cols: self.cols,
        })
    }

    pub fn scale(&self, s: &CRat) -> Self {
        FieldElement {
            terms: self
                .terms
                .iter()
                .map(|t| FieldTerm {
                    ups: t.ups.clone(),
                    coeff: t.coeff.scale(s),
                })
                .filter(|t| !t.coeff.is_zero())
                .collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    /// Pointwise product: indicators multiply by intersecting upset lists,
    /// coefficients by matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::structural("field product shape mismatch"));
        }
        let mut out = FieldElement {
            terms: Vec::new(),
            rows: self.rows,
            cols: other.cols,
        };
        for s in &self.terms {
            for t in &other.terms {
                let ups: BTreeSet<usize> = s.ups.union(&t.ups).copied().collect();
                let coeff = s.coeff.mul(&t.coeff);
                let piece = FieldElement {
                    terms: vec![FieldTerm { ups, coeff }],
                    rows: self.rows,
                    cols: other.cols,
                };
                out = out.add(&piece)?;
            }
        }
        Ok(out)
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        FieldElement {
            terms: self
                .terms
                .iter()
                .map(|t| FieldTerm {
                    ups: t.ups.clone(),
                    coeff: t.coeff.adjoint(),
                })
                .collect(),
            rows: self.cols,
            cols: self.rows,
        }
    }

    /// Left (algebra-valued) inner product m n*.
    pub fn inner_left(&self, other: &Self) -> Result<Self> {
        self.mul(&other.adjoint())
    }

    /// Right (algebra-valued) inner product m* n.
    pub fn inner_right(&self, other: &Self) -> Result<Self> {
        self.adjoint().mul(other)
    }

    /// Exact evaluation: the sum of coefficients whose every named upset
    /// contains the point.
    pub fn evaluate(&self, poset: &FinitePoset, at: &EvalPoint) -> Result<MatrixC> {
        let mut out = MatrixC::zeros(self.rows, self.cols);
        for term in &self.terms {
            let mut live = true;
            for &a in &term.ups {
                if !at.chi(a, poset)? {
                    live = false;
                    break;
                }
            }
            if live {
                out = out.add(&term.coeff);
            }
        }
        Ok(out)
    }

    /// Multiply by a scalar function (a rational combination of indicator
    /// products); evaluation commutes with this action.
    pub fn scale_by(&self, f: &ScalarField) -> Self {
        let mut terms = Vec::new();
        for (ups_f, c) in &f.terms {
            for t in &self.terms {
                let ups: BTreeSet<usize> = t.ups.union(ups_f).copied().collect();
                terms.push(FieldTerm {
                    ups,
                    coeff: t.coeff.scale(&Complex::new(c.clone(), Rat::zero())),
                });
            }
        }
        let mut out = FieldElement {
            terms: Vec::new(),
            rows: self.rows,
            cols: self.cols,
        };
        for term in terms {
            let piece = FieldElement {
                terms: vec![term],
                rows: self.rows,
                cols: self.cols,
            };
            out = out.add(&piece).expect("shapes agree");
        }
        out
    }
}

/// A scalar function generated by the upset indicators under rational linear
/// combinations and products: enough for every Boolean combination, since
/// complements are 1 - chi and intersections are products.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    /// Sum over (upset set, rational coefficient); the empty set is the
    /// constant function 1.
    terms: Vec<(BTreeSet<usize>, Rat)>,
}

impl ScalarField {
    pub fn one() -> Self {
        ScalarField {
            terms: vec![(BTreeSet::new(), Rat::one())],
        }
    }

    pub fn chi(a: usize) -> Self {
        ScalarField {
            terms: vec![(BTreeSet::from([a]), Rat::one())],
        }
    }

    /// 1 - f.
    pub fn complement(&self) -> Self {
        let mut out = ScalarField::one();
        for (ups, c) in &self.terms {
            out.push(ups.clone(), -c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (ups, c) in &other.terms {
            out.push(ups.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ScalarField { terms: Vec::new() };
        for (u1, c1) in &self.terms {
            for (u2, c2) in &other.terms {
                out.push(u1.union(u2).copied().collect(), c1 * c2);
            }
        }
        out
    }

    fn push(&mut self, ups: BTreeSet<usize>, c: Rat) {
        match self.terms.iter_mut().find(|(u, _)| *u == ups) {
            Some((_, existing)) => *existing += c,
            None => self.terms.push((ups, c)),
        }
        self.terms.retain(|(_, c)| !c.is_zero());
    }

    pub fn evaluate(&self, poset: &FinitePoset, at: &EvalPoint) -> Result<Rat> {
        let mut out = Rat::zero();
        for (ups, c) in &self.terms {
            let mut live = true;
            for &a in ups {
                if !at.chi(a, poset)? {
                    live = false;
                    break;
                }
            }
            if live {
                out += c;
            }
        }
        Ok(out)
    }
}

/// Span basis and norms of the fiber at a point.
#[derive(Clone, Debug)]
pub struct FiberReport {
    pub point: String,
    pub basis: Vec<Vec<CRat>>,
    pub dimension: usize,
    /// Operator norms of the basis vectors reshaped to the family shape.
    pub norms: Vec<f64>,
}

/// The fiber at a poset element: span{M_a : a <= t} with a computed basis.
pub fn fiber(family: &TroFamily, t: usize) -> Result<FiberReport> {
    if t >= family.poset().len() {
        return Err(Error::structural("unknown poset element"));
    }
    let basis = family.fiber_basis(t);
    let (rows, cols) = family.shape();
    let norms = basis
        .iter()
        .map(|v| {
            let mut m = MatrixC::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    *m.at_mut(i, j) = v[i * cols + j].clone();
                }
            }
            m.op_norm_f64()
        })
        .collect();
    Ok(FiberReport {
        point: family.poset().name(t).to_string(),
        dimension: basis.len(),
        basis,
        norms,
    })
}
