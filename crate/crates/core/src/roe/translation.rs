//! Partial translations: injective partial maps with a uniform displacement
//! bound, and their 0/1 operators.

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::numeric::Rat;
use crate::roe::{BandedOperator, OpScalar, PropagationMetric};
use std::collections::BTreeMap;

/// An injective partial map from domain indices to codomain indices with a
/// displacement bound: d(x, t(x)) < bound for every x in the domain of t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTranslation {
    /// x -> t(x), injective.
    pairs: BTreeMap<usize, usize>,
    bound: Rat,
}

impl PartialTranslation {
    pub fn new(pairs: BTreeMap<usize, usize>, bound: Rat) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &w in pairs.values() {
            if !seen.insert(w) {
                return Err(Error::structural(
                    "partial translation must be injective",
                ));
            }
        }
        Ok(PartialTranslation { pairs, bound })
    }

    pub fn pairs(&self) -> &BTreeMap<usize, usize> {
        &self.pairs
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.pairs.get(&x).copied()
    }

    /// Check the strict displacement bound under the given metric.
    pub fn check_bound(&self, metric: &impl PropagationMetric) -> Result<()> {
        for (&x, &w) in &self.pairs {
            let d = metric.dist(x, w);
            if d >= self.bound {
                return Err(Error::precondition(format!(
                    "displacement d({x}, {w}) = {d} is not below the bound {}",
                    self.bound
                )));
            }
        }
        Ok(())
    }

    /// The 0/1 operator sending the basis vector at x to the one at t(x).
    pub fn to_operator<S: OpScalar>(
        &self,
        domain: FiniteMetricSpace,
        codomain: FiniteMetricSpace,
    ) -> Result<BandedOperator<S>> {
        let entries = self
            .pairs
            .iter()
            .map(|(&x, &w)| ((w, x), S::one()))
            .collect();
        BandedOperator::new(domain, codomain, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::smallest_metric;
    use crate::numeric::{rat_int, CRat};

    #[test]
    fn injectivity_is_enforced() {
        let mut pairs = BTreeMap::new();
        pairs.insert(0, 1);
        pairs.insert(1, 1);
        assert!(PartialTranslation::new(pairs, rat_int(3)).is_err());
    }

    #[test]
    fn bound_check_is_strict() {
        let x = FiniteMetricSpace::half_line(2);
        let y = FiniteMetricSpace::half_line(2);
        let d = smallest_metric(&x, &y, "0", "0").unwrap();
        let mut pairs = BTreeMap::new();
        pairs.insert(0, 0); // d = 1
        let t_ok = PartialTranslation::new(pairs.clone(), rat_int(2)).unwrap();
        assert!(t_ok.check_bound(&d).is_ok());
        let t_tight = PartialTranslation::new(pairs, rat_int(1)).unwrap();
        assert!(t_tight.check_bound(&d).is_err());
    }

    #[test]
    fn operator_of_translation() {
        let x = FiniteMetricSpace::half_line(3);
        let y = FiniteMetricSpace::half_line(3);
        let mut pairs = BTreeMap::new();
        pairs.insert(0, 2);
        pairs.insert(2, 0);
        let t = PartialTranslation::new(pairs, rat_int(10)).unwrap();
        let op: BandedOperator<CRat> = t.to_operator(x, y).unwrap();
        assert_eq!(op.support_len(), 2);
        assert!(op.entries().contains_key(&(2, 0)));
        assert!(op.entries().contains_key(&(0, 2)));
    }
}
