//! Banded (finite propagation) operators between the Hilbert spaces spanned
//! by the points of finite metric spaces, in exact-rational or float entry
//! mode, with the ternary product propagation bound.

pub mod decompose;
pub mod factor;
pub mod translation;

pub use decompose::{decompose_finite_propagation, Decomposition, Piece};
pub use factor::{factor_through, Factorization, FactorPiece};
pub use translation::PartialTranslation;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, GluedMetric};
use crate::numeric::{magnitude_f64, CRat};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Entry scalar for banded operators. The exact mode decides "nonzero"
/// exactly; the float mode uses a support threshold relative to the largest
/// entry magnitude, so that propagation stays well defined.
pub trait OpScalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn magnitude(&self) -> f64;
    /// Whether this value counts as an absent entry at the given scale
    /// (the largest magnitude in the operator being normalized).
    fn is_negligible(&self, scale: f64) -> bool;
}

impl OpScalar for CRat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn magnitude(&self) -> f64 {
        magnitude_f64(self)
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Support threshold factor for float-mode operators.
pub const FLOAT_SUPPORT_TAU: f64 = 1e-12;

impl OpScalar for Complex64 {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_SUPPORT_TAU * scale
    }
}

/// Where an operator's propagation is measured: the cross block of a glue,
/// or a single space for operators from a space to itself.
pub trait PropagationMetric {
    fn domain_space(&self) -> &FiniteMetricSpace;
    fn codomain_space(&self) -> &FiniteMetricSpace;
    /// Distance between domain point x and codomain point y.
    fn dist(&self, x: usize, y: usize) -> crate::numeric::Rat;
}

impl PropagationMetric for GluedMetric {
    fn domain_space(&self) -> &FiniteMetricSpace {
        self.left()
    }
    fn codomain_space(&self) -> &FiniteMetricSpace {
        self.right()
    }
    fn dist(&self, x: usize, y: usize) -> crate::numeric::Rat {
        self.cross(x, y).clone()
    }
}

impl PropagationMetric for FiniteMetricSpace {
    fn domain_space(&self) -> &FiniteMetricSpace {
        self
    }
    fn codomain_space(&self) -> &FiniteMetricSpace {
        self
    }
    fn dist(&self, x: usize, y: usize) -> crate::numeric::Rat {
        FiniteMetricSpace::dist(self, x, y).clone()
    }
}

/// A sparse operator H_domain -> H_codomain in the point bases, with no
/// stored entry equal to (mode-dependent) zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedOperator<S: OpScalar> {
    domain: FiniteMetricSpace,
    codomain: FiniteMetricSpace,
    /// (codomain row y, domain column x) -> value.
    entries: BTreeMap<(usize, usize), S>,
}

/// Exact-rational operators, the default numeric mode.
pub type BandedOperatorExact = BandedOperator<CRat>;
/// Float-mode operators with thresholded support.
pub type BandedOperatorFloat = BandedOperator<Complex64>;

impl<S: OpScalar> BandedOperator<S> {
    pub fn new(
        domain: FiniteMetricSpace,
        codomain: FiniteMetricSpace,
        entries: BTreeMap<(usize, usize), S>,
    ) -> Result<Self> {
        for &(y, x) in entries.keys() {
            if y >= codomain.len() || x >= domain.len() {
                return Err(Error::structural(format!(
                    "entry ({y}, {x}) outside the {}x{} index range",
                    codomain.len(),
                    domain.len()
                )));
            }
        }
        Ok(Self::normalized(domain, codomain, entries))
    }

    fn normalized(
        domain: FiniteMetricSpace,
        codomain: FiniteMetricSpace,
        entries: BTreeMap<(usize, usize), S>,
    ) -> Self {
        let scale = entries
            .values()
            .map(|v| v.magnitude())
            .fold(0.0_f64, f64::max);
        let entries = entries
            .into_iter()
            .filter(|(_, v)| !v.is_negligible(scale))
            .collect();
        BandedOperator {
            domain,
            codomain,
            entries,
        }
    }

    pub fn zero(domain: FiniteMetricSpace, codomain: FiniteMetricSpace) -> Self {
        BandedOperator {
            domain,
            codomain,
            entries: BTreeMap::new(),
        }
    }

    /// The elementary matrix e_{yx}.
    pub fn elementary(
        domain: FiniteMetricSpace,
        codomain: FiniteMetricSpace,
        y: usize,
        x: usize,
    ) -> Result<Self> {
        let mut entries = BTreeMap::new();
        entries.insert((y, x), S::one());
        Self::new(domain, codomain, entries)
    }

    pub fn domain(&self) -> &FiniteMetricSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteMetricSpace {
        &self.codomain
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), S> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Largest number of nonzero entries in a column.
    pub fn max_column_degree(&self) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &(_, x) in self.entries.keys() {
            *counts.entry(x).or_insert(0) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// Largest number of nonzero entries in a row.
    pub fn max_row_degree(&self) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &(y, _) in self.entries.keys() {
            *counts.entry(y).or_insert(0) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::structural("operator sum needs matching spaces"));
        }
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            let merged = match entries.get(k) {
                Some(cur) => cur.add(v),
                None => v.clone(),
            };
            entries.insert(*k, merged);
        }
        Ok(Self::normalized(
            self.domain.clone(),
            self.codomain.clone(),
            entries,
        ))
    }

    /// Composition self . other (apply `other` first). Requires the domain
    /// of self to be the codomain space of `other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.domain != other.codomain {
            return Err(Error::structural(
                "operator product needs self.domain == other.codomain",
            ));
        }
        let mut entries: BTreeMap<(usize, usize), S> = BTreeMap::new();
        for (&(a, b), v) in &self.entries {
            for (&(b2, c), w) in &other.entries {
                if b == b2 {
                    let add = v.mul(w);
                    let merged = match entries.get(&(a, c)) {
                        Some(cur) => cur.add(&add),
                        None => add,
                    };
                    entries.insert((a, c), merged);
                }
            }
        }
        Ok(Self::normalized(
            other.domain.clone(),
            self.codomain.clone(),
            entries,
        ))
    }

    /// Conjugate transpose: an operator H_codomain -> H_domain.
    pub fn adjoint(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(&(y, x), v)| ((x, y), v.conj()))
            .collect();
        BandedOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries,
        }
    }

    /// Largest support distance under the given metric; zero for the zero
    /// operator by convention.
    pub fn propagation(&self, metric: &impl PropagationMetric) -> Result<crate::numeric::Rat> {
        if metric.domain_space() != &self.domain || metric.codomain_space() != &self.codomain {
            return Err(Error::structural(
                "metric index spaces do not match the operator",
            ));
        }
        Ok(self
            .entries
            .keys()
            .map(|&(y, x)| metric.dist(x, y))
            .max()
            .unwrap_or_else(Zero::zero))
    }
}

/// The ternary product T S* R with its propagation, asserting the triple
/// propagation bound: prop(T S* R) <= prop(T) + prop(S) + prop(R).
pub fn tro_triple<S: OpScalar>(
    t: &BandedOperator<S>,
    s: &BandedOperator<S>,
    r: &BandedOperator<S>,
    d: &GluedMetric,
) -> Result<(BandedOperator<S>, crate::numeric::Rat)> {
    for op in [t, s, r] {
        if op.domain() != d.left() || op.codomain() != d.right() {
            return Err(Error::structural(
                "ternary product needs three operators H_X -> H_Y over the glue",
            ));
        }
    }
    let product = t.mul(&s.adjoint())?.mul(r)?;
    let prop = product.propagation(d)?;
    let bound = t.propagation(d)? + s.propagation(d)? + r.propagation(d)?;
    if !product.is_zero() && prop > bound {
        return Err(Error::internal(format!(
            "ternary propagation bound violated: {prop} > {bound}"
        )));
    }
    Ok((product, prop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{glue, smallest_metric};
    use crate::numeric::{crat_int, rat_int, Rat};

    fn spaces(nx: usize, ny: usize) -> (FiniteMetricSpace, FiniteMetricSpace) {
        (
            FiniteMetricSpace::half_line(nx),
            FiniteMetricSpace::half_line(ny),
        )
    }

    #[test]
    fn zero_operator_has_zero_propagation() {
        let (x, y) = spaces(3, 3);
        let d = smallest_metric(&x, &y, "0", "0").unwrap();
        let z = BandedOperatorExact::zero(x, y);
        assert_eq!(z.propagation(&d).unwrap(), Rat::zero());
    }

    #[test]
    fn elementary_propagation_is_the_distance() {
        let (x, y) = spaces(3, 3);
        let d = smallest_metric(&x, &y, "0", "0").unwrap();
        let e = BandedOperatorExact::elementary(x, y, 2, 1).unwrap();
        // d(x=1, y=2) = 1 + 1 + 2 = 4 for the basepoint-sum glue.
        assert_eq!(e.propagation(&d).unwrap(), rat_int(4));
    }

    #[test]
    fn adjoint_involution_and_product_shapes() {
        let (x, y) = spaces(2, 3);
        let mut entries = BTreeMap::new();
        entries.insert((0, 1), crat_int(2, 1));
        entries.insert((2, 0), crat_int(0, 3));
        let op = BandedOperatorExact::new(x.clone(), y.clone(), entries).unwrap();
        assert_eq!(op.adjoint().adjoint(), op);
        let gram = op.adjoint().mul(&op).unwrap();
        assert_eq!(gram.domain(), &x);
        assert_eq!(gram.codomain(), &x);
    }

    #[test]
    fn ternary_triple_with_zero_middle() {
        let (x, y) = spaces(2, 2);
        let d = smallest_metric(&x, &y, "0", "0").unwrap();
        let t = BandedOperatorExact::elementary(x.clone(), y.clone(), 0, 0).unwrap();
        let s = BandedOperatorExact::zero(x.clone(), y.clone());
        let r = BandedOperatorExact::elementary(x, y, 1, 1).unwrap();
        let (prod, prop) = tro_triple(&t, &s, &r, &d).unwrap();
        assert!(prod.is_zero());
        assert_eq!(prop, Rat::zero());
    }

    #[test]
    fn chain_witness_reaches_three_l() {
        // X = {x, u}, Y = {v, y}; distances d(x,v) = d(u,v) = d(u,y) = L and
        // d(x,y) = 3L; T = e_{y,u}, S = e_{v,u}, R = e_{v,x} gives
        // T S* R = e_{y,x} with propagation exactly 3L.
        let l = rat_int(5);
        let x_space = FiniteMetricSpace::new(
            vec!["x".into(), "u".into()],
            vec![
                vec![rat_int(0), rat_int(10)],
                vec![rat_int(10), rat_int(0)],
            ],
            None,
        )
        .unwrap();
        let y_space = FiniteMetricSpace::new(
            vec!["v".into(), "y".into()],
            vec![
                vec![rat_int(0), rat_int(10)],
                vec![rat_int(10), rat_int(0)],
            ],
            None,
        )
        .unwrap();
        let cross = vec![
            vec![l.clone(), rat_int(15)],
            vec![l.clone(), l.clone()],
        ];
        let d = glue(x_space.clone(), y_space.clone(), cross).unwrap();
        let t = BandedOperatorExact::elementary(x_space.clone(), y_space.clone(), 1, 1).unwrap();
        let s = BandedOperatorExact::elementary(x_space.clone(), y_space.clone(), 0, 1).unwrap();
        let r = BandedOperatorExact::elementary(x_space, y_space, 0, 0).unwrap();
        for op in [&t, &s, &r] {
            assert_eq!(op.propagation(&d).unwrap(), l);
        }
        let (prod, prop) = tro_triple(&t, &s, &r, &d).unwrap();
        assert_eq!(prod.support_len(), 1);
        assert!(prod.entries().contains_key(&(1, 0)));
        assert_eq!(prop, rat_int(15));
    }

    #[test]
    fn float_mode_drops_negligible_entries() {
        let (x, y) = spaces(2, 2);
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), Complex64::new(1.0, 0.0));
        entries.insert((1, 1), Complex64::new(1e-30, 0.0));
        let op = BandedOperatorFloat::new(x, y, entries).unwrap();
        assert_eq!(op.support_len(), 1);
    }
}
