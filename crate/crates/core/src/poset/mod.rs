//! Finite posets, the clopen upset/complement topology, separation
//! witnesses, the noncompactness refuter, and the finite-resolution
//! spectrum of the generated indicator algebra.

pub mod clopen;
pub mod spectrum;

pub use clopen::{
    hausdorff_witness, refute_subcover, singleton_term, subbase_sets, urysohn_function,
    ClopenSet, SubcoverOutcome, Term,
};
pub use spectrum::{gamma_spectrum, GeneratedAlgebra, PointTag, Spectrum, SpectrumPoint};

use crate::error::{Error, Result};

/// A finite partially ordered set: element names plus the full relation
/// matrix. Reflexivity, antisymmetry and transitivity are checked on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(elements: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = elements.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::structural(format!("relation matrix must be {n}x{n}")));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if elements[i] == elements[j] {
                    return Err(Error::structural(format!(
                        "duplicate element '{}'",
                        elements[i]
                    )));
                }
            }
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::structural(format!(
                    "relation not reflexive at '{}'",
                    elements[i]
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::structural(format!(
                        "relation not antisymmetric on '{}', '{}'",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::structural(format!(
                            "relation not transitive on '{}', '{}', '{}'",
                            elements[i], elements[j], elements[k]
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset { elements, leq })
    }

    /// The chain 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinitePoset { elements, leq }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn leq_matrix(&self) -> &Vec<Vec<bool>> {
        &self.leq
    }

    /// The upset {b : a <= b} as an index bitmask.
    pub fn upset(&self, a: usize) -> Vec<bool> {
        (0..self.len()).map(|b| self.leq(a, b)).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| (0..self.len()).all(|a| !self.leq(a, c) || a == c))
            .collect()
    }

    pub fn is_minimal(&self, c: usize) -> bool {
        (0..self.len()).all(|a| !self.leq(a, c) || a == c)
    }

    /// The smallest element, when one exists.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.leq(b, x)))
    }

    /// Cover relations (a < b with nothing strictly between), for Hasse
    /// diagram export.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    let strictly_between = (0..n).any(|c| {
                        c != a && c != b && self.leq(a, c) && self.leq(c, b)
                    });
                    if !strictly_between {
                        covers.push((a, b));
                    }
                }
            }
        }
        covers
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_a_poset_with_bottom() {
        let p = FinitePoset::chain(3);
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(p.bottom(), Some(0));
        assert_eq!(p.minimal_elements(), vec![0]);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn non_transitive_relation_rejected() {
        let leq = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let err = FinitePoset::new(vec!["a".into(), "b".into(), "c".into()], leq);
        assert!(err.is_err());
    }

    #[test]
    fn antichain_minimals() {
        let leq = vec![vec![true, false], vec![false, true]];
        let p = FinitePoset::new(vec!["a".into(), "b".into()], leq).unwrap();
        assert_eq!(p.minimal_elements(), vec![0, 1]);
        assert_eq!(p.bottom(), None);
    }
}
