//! The finite-resolution spectrum of the algebra generated by upset
//! indicators: 0/1 generator assignments admitted by the universe sample or
//! by declared witness sequences, with the extended order between points.

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// A finitely generated indicator algebra over a sampled universe.
///
/// Only upset indicators are used as generators; with a smallest element the
/// bottom indicator is the unit and complements are derived, so this loses
/// nothing. Every spectrum output carries the generator/universe fingerprint
/// because points are only sound for the declared sample.
#[derive(Clone, Debug)]
pub struct GeneratedAlgebra {
    poset: FinitePoset,
    generators: Vec<usize>,
    universe: Vec<usize>,
    witnesses: Vec<(String, Vec<usize>)>,
}

impl GeneratedAlgebra {
    pub fn new(
        poset: FinitePoset,
        generators: Vec<usize>,
        universe: Vec<usize>,
    ) -> Result<Self> {
        for &g in &generators {
            if g >= poset.len() {
                return Err(Error::structural("generator index out of range"));
            }
            if !universe.contains(&g) {
                return Err(Error::structural(format!(
                    "universe is missing generator '{}'",
                    poset.name(g)
                )));
            }
        }
        for &u in &universe {
            if u >= poset.len() {
                return Err(Error::structural("universe index out of range"));
            }
        }
        Ok(GeneratedAlgebra {
            poset,
            generators,
            universe,
            witnesses: Vec::new(),
        })
    }

    /// Everything as generator and universe.
    pub fn full(poset: FinitePoset) -> Self {
        let all: Vec<usize> = (0..poset.len()).collect();
        GeneratedAlgebra {
            poset,
            generators: all.clone(),
            universe: all,
            witnesses: Vec::new(),
        }
    }

    /// Declare a limit witness: a finite run of universe elements whose
    /// signature stabilizes; the stabilized signature is admitted as a point.
    /// Limits are never invented, only declared.
    pub fn with_witness(mut self, name: impl Into<String>, sequence: Vec<usize>) -> Result<Self> {
        if sequence.is_empty() {
            return Err(Error::structural("witness sequence must be nonempty"));
        }
        for &u in &sequence {
            if u >= self.poset.len() {
                return Err(Error::structural("witness element out of range"));
            }
        }
        self.witnesses.push((name.into(), sequence));
        Ok(self)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    /// Signature of an element: for each generator g, whether g <= u.
    pub fn signature(&self, u: usize) -> Vec<bool> {
        self.generators.iter().map(|&g| self.poset.leq(g, u)).collect()
    }

    /// Universe partition by signature; each atom has a constant signature.
    pub fn atoms(&self) -> Vec<(Vec<bool>, Vec<usize>)> {
        let mut atoms: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
        for &u in &self.universe {
            let sig = self.signature(u);
            match atoms.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, members)) => members.push(u),
                None => atoms.push((sig, vec![u])),
            }
        }
        atoms
    }
}

/// How a spectrum point is justified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointTag {
    /// Attained by this universe element (the first one, in universe order).
    Realized(usize),
    /// Stabilized signature of the named witness sequence.
    Limit(String),
}

/// A point of the finite-resolution spectrum: a 0/1 assignment on the
/// generators, downward closed along the poset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub assignment: Vec<bool>,
    pub tags: Vec<PointTag>,
}

impl SpectrumPoint {
    pub fn is_realized(&self) -> bool {
        self.tags.iter().any(|t| matches!(t, PointTag::Realized(_)))
    }

    pub fn is_limit(&self) -> bool {
        self.tags.iter().any(|t| matches!(t, PointTag::Limit(_)))
    }
}

/// The spectrum: distinct points plus the order r <= t (the 1-entries of r
/// imply those of t), and the fingerprint it is sound for.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub generator_names: Vec<String>,
    pub universe_names: Vec<String>,
    pub points: Vec<SpectrumPoint>,
    pub order: Vec<Vec<bool>>,
}

impl Spectrum {
    pub fn realized_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_realized()).count()
    }
}

/// Enumerate the admitted generator assignments: one per signature attained
/// on the universe, plus one per declared witness limit, deduplicated. The
/// order on points is implication of 1-entries.
pub fn gamma_spectrum(alg: &GeneratedAlgebra) -> Result<Spectrum> {
    if alg.poset.bottom().is_none() {
        return Err(Error::precondition(
            "the ambient poset must have a smallest element",
        ));
    }
    let mut points: Vec<SpectrumPoint> = Vec::new();
    fn admit(points: &mut Vec<SpectrumPoint>, assignment: Vec<bool>, tag: PointTag) {
        match points.iter_mut().find(|p| p.assignment == assignment) {
            Some(p) => {
                if !p.tags.contains(&tag) {
                    p.tags.push(tag);
                }
            }
            None => points.push(SpectrumPoint {
                assignment,
                tags: vec![tag],
            }),
        }
    }

    for &u in &alg.universe {
        let sig = alg.signature(u);
        let realized_here = points.iter().any(|p| p.assignment == sig && p.is_realized());
        if !realized_here {
            admit(&mut points, sig, PointTag::Realized(u));
        }
    }

    for (name, sequence) in &alg.witnesses {
        let final_sig = alg.signature(*sequence.last().unwrap());
        if sequence.len() >= 2 {
            let prev_sig = alg.signature(sequence[sequence.len() - 2]);
            if prev_sig != final_sig {
                return Err(Error::structural(format!(
                    "witness '{name}' has not stabilized within the provided window"
                )));
            }
        }
        admit(&mut points, final_sig, PointTag::Limit(name.clone()));
    }

    // Downward closure along the generator order: g1 <= g2 and sig(g2) = 1
    // forces sig(g1) = 1. Realized signatures satisfy it automatically;
    // witness limits are checked here.
    for p in &points {
        for (i, &g1) in alg.generators.iter().enumerate() {
            for (j, &g2) in alg.generators.iter().enumerate() {
                if alg.poset.leq(g1, g2) && p.assignment[j] && !p.assignment[i] {
                    return Err(Error::structural(
                        "admitted signature is not downward closed",
                    ));
                }
            }
        }
    }

    let order = points
        .iter()
        .map(|r| {
            points
                .iter()
                .map(|t| {
                    r.assignment
                        .iter()
                        .zip(&t.assignment)
                        .all(|(&ri, &ti)| !ri || ti)
                })
                .collect()
        })
        .collect();

    Ok(Spectrum {
        generator_names: alg
            .generators
            .iter()
            .map(|&g| alg.poset.name(g).to_string())
            .collect(),
        universe_names: alg
            .universe
            .iter()
            .map(|&u| alg.poset.name(u).to_string())
            .collect(),
        points,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_chain_recovers_itself() {
        let alg = GeneratedAlgebra::full(FinitePoset::chain(3));
        let spec = gamma_spectrum(&alg).unwrap();
        assert_eq!(spec.points.len(), 3);
        assert!(spec.points.iter().all(|p| p.is_realized()));
        // Order restricted to realized points is the chain order.
        for i in 0..3 {
            for j in 0..3 {
                let pi = spec
                    .points
                    .iter()
                    .position(|p| p.tags.contains(&PointTag::Realized(i)))
                    .unwrap();
                let pj = spec
                    .points
                    .iter()
                    .position(|p| p.tags.contains(&PointTag::Realized(j)))
                    .unwrap();
                assert_eq!(spec.order[pi][pj], i <= j);
            }
        }
    }

    #[test]
    fn truncated_half_line_with_tail_witness() {
        // Chain 0..5 samples the half line; generators 0, 1, 2; the declared
        // tail witness stabilizes at the all-ones signature, which element 2
        // already realizes, so the point carries both tags.
        let poset = FinitePoset::chain(6);
        let alg = GeneratedAlgebra::new(poset, vec![0, 1, 2], (0..6).collect())
            .unwrap()
            .with_witness("tail", vec![0, 1, 2, 3, 4, 5])
            .unwrap();
        let spec = gamma_spectrum(&alg).unwrap();
        let sigs: Vec<&Vec<bool>> = spec.points.iter().map(|p| &p.assignment).collect();
        assert_eq!(spec.points.len(), 3);
        assert!(sigs.contains(&&vec![true, false, false]));
        assert!(sigs.contains(&&vec![true, true, false]));
        assert!(sigs.contains(&&vec![true, true, true]));
        let limit_point = spec
            .points
            .iter()
            .find(|p| p.assignment == vec![true, true, true])
            .unwrap();
        assert!(limit_point.is_realized());
        assert!(limit_point.is_limit());
        assert!(limit_point.tags.contains(&PointTag::Realized(2)));
    }

    #[test]
    fn missing_generator_in_universe_is_structural() {
        let poset = FinitePoset::chain(3);
        let err = GeneratedAlgebra::new(poset, vec![2], vec![0, 1]);
        assert!(err.is_err());
    }

    #[test]
    fn bottomless_poset_is_rejected() {
        let leq = vec![vec![true, false], vec![false, true]];
        let poset = FinitePoset::new(vec!["a".into(), "b".into()], leq).unwrap();
        let alg = GeneratedAlgebra::full(poset);
        assert!(gamma_spectrum(&alg).is_err());
    }

    #[test]
    fn atoms_partition_the_universe() {
        let poset = FinitePoset::chain(6);
        let alg = GeneratedAlgebra::new(poset, vec![0, 1, 2], (0..6).collect()).unwrap();
        let atoms = alg.atoms();
        let total: usize = atoms.iter().map(|(_, m)| m.len()).sum();
        assert_eq!(total, 6);
        for (sig, members) in &atoms {
            for &m in members {
                assert_eq!(&alg.signature(m), sig);
            }
        }
        assert_eq!(atoms.len(), 3);
    }
}
