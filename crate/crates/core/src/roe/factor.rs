//! Constructive factorization of a partial translation for a composed
//! metric through the middle space, using the midpoint witnesses retained
//! by the min-plus composition.

use crate::error::{Error, Result};
use crate::metric::{Composition, GluedMetric};
use crate::roe::{BandedOperator, OpScalar, PartialTranslation};
use std::collections::BTreeMap;

/// One leg pair of the factorization: T restricted to U_i equals G_i F_i.
#[derive(Clone, Debug)]
pub struct FactorPiece<S: OpScalar> {
    /// f restricted to U_i, a partial translation for the first metric.
    pub inner: PartialTranslation,
    /// g_i with g_i(f(x)) = t(x), a partial translation for the second.
    pub outer: PartialTranslation,
    pub inner_operator: BandedOperator<S>,
    pub outer_operator: BandedOperator<S>,
}

/// The factorization T = sum of G_i F_i through the midpoint map.
#[derive(Clone, Debug)]
pub struct Factorization<S: OpScalar> {
    pub pieces: Vec<FactorPiece<S>>,
    /// Largest midpoint fiber; the number of pieces never exceeds it.
    pub max_fiber: usize,
}

/// Factor the operator of a partial translation t (for the composed metric,
/// with strict bound C) as a sum of products of 0/1 operators whose legs
/// have propagation strictly below C for the respective factor metrics.
///
/// For each x the retained midpoint y = f(x) satisfies
/// d1(x, y) + d2(y, t(x)) = d(x, t(x)) < C, so both legs are below C.
/// The domain splits into at most max |f^-1(y)| parts on which f is
/// injective, assigned greedily in ascending point order.
pub fn factor_through<S: OpScalar>(
    translation: &PartialTranslation,
    composition: &Composition,
    d1: &GluedMetric,
    d2: &GluedMetric,
) -> Result<Factorization<S>> {
    let composed = &composition.glue;
    if d1.right() != d2.left() {
        return Err(Error::structural("factor metrics do not share a middle space"));
    }
    if composed.left() != d1.left() || composed.right() != d2.right() {
        return Err(Error::structural(
            "composition does not match the factor metrics",
        ));
    }
    translation.check_bound(composed)?;

    // Midpoint map f on the domain of t.
    let f: BTreeMap<usize, usize> = translation
        .pairs()
        .iter()
        .map(|(&x, &z)| (x, composition.midpoints[x][z]))
        .collect();

    let max_fiber = {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &y in f.values() {
            *counts.entry(y).or_insert(0) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    };

    // Greedy first-fit: x goes to the first part where its midpoint is new.
    let mut parts: Vec<BTreeMap<usize, usize>> = Vec::new();
    for (&x, &y) in &f {
        match parts
            .iter_mut()
            .find(|part| part.values().all(|&used| used != y))
        {
            Some(part) => {
                part.insert(x, y);
            }
            None => {
                let mut part = BTreeMap::new();
                part.insert(x, y);
                parts.push(part);
            }
        }
    }
    if parts.len() > max_fiber {
        return Err(Error::internal("fiber split exceeded the fiber bound"));
    }

    let bound = translation.bound().clone();
    let mut pieces = Vec::with_capacity(parts.len());
    for part in parts {
        let inner = PartialTranslation::new(part.clone(), bound.clone())?;
        inner.check_bound(d1).map_err(|_| {
            Error::internal("inner leg exceeded the bound; midpoint witness broken")
        })?;
        let outer_pairs: BTreeMap<usize, usize> = part
            .iter()
            .map(|(&x, &y)| (y, translation.apply(x).expect("x in domain")))
            .collect();
        let outer = PartialTranslation::new(outer_pairs, bound.clone())?;
        outer.check_bound(d2).map_err(|_| {
            Error::internal("outer leg exceeded the bound; midpoint witness broken")
        })?;
        let inner_operator = inner.to_operator(d1.left().clone(), d1.right().clone())?;
        let outer_operator = outer.to_operator(d2.left().clone(), d2.right().clone())?;
        pieces.push(FactorPiece {
            inner,
            outer,
            inner_operator,
            outer_operator,
        });
    }

    // T = sum of G_i F_i, exactly and without cancellation: the products
    // have pairwise disjoint supports.
    let mut rebuilt = BandedOperator::<S>::zero(d1.left().clone(), d2.right().clone());
    let mut seen = std::collections::BTreeSet::new();
    for piece in &pieces {
        let product = piece.outer_operator.mul(&piece.inner_operator)?;
        for key in product.entries().keys() {
            if !seen.insert(*key) {
                return Err(Error::internal("factor pieces overlap on support"));
            }
        }
        rebuilt = rebuilt.add(&product)?;
    }
    let target: BandedOperator<S> =
        translation.to_operator(composed.left().clone(), composed.right().clone())?;
    if rebuilt != target {
        return Err(Error::internal("factorization does not reassemble the operator"));
    }

    Ok(Factorization { pieces, max_fiber })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{compose, smallest_metric, FiniteMetricSpace};
    use crate::numeric::{rat_int, CRat, Rat};
    use num_traits::One;

    fn chain_spaces(n: usize) -> (FiniteMetricSpace, FiniteMetricSpace, FiniteMetricSpace) {
        (
            FiniteMetricSpace::half_line(n),
            FiniteMetricSpace::half_line(n),
            FiniteMetricSpace::half_line(n),
        )
    }

    #[test]
    fn singleton_middle_gives_singleton_pieces() {
        let x = FiniteMetricSpace::half_line(3);
        let y = FiniteMetricSpace::half_line(1);
        let z = FiniteMetricSpace::half_line(3);
        let d1 = smallest_metric(&x, &y, "0", "0").unwrap();
        let d2 = smallest_metric(&y, &z, "0", "0").unwrap();
        let comp = compose(&d1, &d2).unwrap();
        let mut pairs = BTreeMap::new();
        for i in 0..3 {
            pairs.insert(i, i);
        }
        // Composed distance x -> z is x + 2 + z; bound above the worst case.
        let t = PartialTranslation::new(pairs, rat_int(100)).unwrap();
        let fact: Factorization<CRat> = factor_through(&t, &comp, &d1, &d2).unwrap();
        // Every x routes through the single midpoint, so f has one fiber of
        // size |U| and the split produces |U| singleton pieces.
        assert_eq!(fact.max_fiber, 3);
        assert_eq!(fact.pieces.len(), 3);
        for piece in &fact.pieces {
            assert_eq!(piece.inner.len(), 1);
        }
    }

    #[test]
    fn shared_midpoints_split_into_two_parts() {
        let (x, y, z) = chain_spaces(4);
        let d1 = smallest_metric(&x, &y, "0", "0").unwrap();
        let d2 = smallest_metric(&y, &z, "0", "0").unwrap();
        let comp = compose(&d1, &d2).unwrap();
        // For basepoint-sum glues every optimal midpoint is the basepoint,
        // so any two domain points share their midpoint and the greedy
        // split must separate them.
        let mut pairs = BTreeMap::new();
        pairs.insert(0, 1);
        pairs.insert(1, 0);
        let t = PartialTranslation::new(pairs, rat_int(100)).unwrap();
        let fact: Factorization<CRat> = factor_through(&t, &comp, &d1, &d2).unwrap();
        assert_eq!(fact.max_fiber, 2);
        assert_eq!(fact.pieces.len(), 2);
        let total: usize = fact.pieces.iter().map(|p| p.inner.len()).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn legs_stay_strictly_below_the_bound() {
        let (x, y, z) = chain_spaces(4);
        let d1 = smallest_metric(&x, &y, "0", "0").unwrap();
        let d2 = smallest_metric(&y, &z, "0", "0").unwrap();
        let comp = compose(&d1, &d2).unwrap();
        let mut pairs = BTreeMap::new();
        pairs.insert(0, 3);
        pairs.insert(2, 1);
        pairs.insert(3, 0);
        let worst: Rat = (0..4)
            .map(|i| comp.glue.cross(i, 3 - i).clone())
            .max()
            .unwrap();
        let bound = worst + Rat::one();
        let t = PartialTranslation::new(pairs, bound.clone()).unwrap();
        let fact: Factorization<CRat> = factor_through(&t, &comp, &d1, &d2).unwrap();
        for piece in &fact.pieces {
            for (&xx, &yy) in piece.inner.pairs() {
                assert!(d1.cross(xx, yy) < &bound);
            }
            for (&yy, &zz) in piece.outer.pairs() {
                assert!(d2.cross(yy, zz) < &bound);
            }
        }
    }

    #[test]
    fn violated_bound_is_a_precondition_error() {
        let (x, y, z) = chain_spaces(3);
        let d1 = smallest_metric(&x, &y, "0", "0").unwrap();
        let d2 = smallest_metric(&y, &z, "0", "0").unwrap();
        let comp = compose(&d1, &d2).unwrap();
        let mut pairs = BTreeMap::new();
        pairs.insert(2, 2); // composed distance 2 + 2 + 2 = 6
        let t = PartialTranslation::new(pairs, rat_int(3)).unwrap();
        let err = factor_through::<CRat>(&t, &comp, &d1, &d2);
        assert!(err.is_err());
    }
}
