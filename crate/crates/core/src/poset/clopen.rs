//! The clopen subbase U_a / V_a, separation witnesses, indicator functions,
//! and the refutation procedure for candidate finite subcovers.

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// A symbolic expression over the subbase generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// U_a = {b : a <= b}
    Up(usize),
    /// V_a = complement of U_a
    Down(usize),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Not(Box<Term>),
}

impl Term {
    pub fn eval(&self, poset: &FinitePoset) -> Vec<bool> {
        match self {
            Term::Up(a) => poset.upset(*a),
            Term::Down(a) => poset.upset(*a).iter().map(|b| !b).collect(),
            Term::And(l, r) => zip_with(&l.eval(poset), &r.eval(poset), |a, b| a && b),
            Term::Or(l, r) => zip_with(&l.eval(poset), &r.eval(poset), |a, b| a || b),
            Term::Not(t) => t.eval(poset).iter().map(|b| !b).collect(),
        }
    }

    /// Complemented term; complements of subbase sets stay in the subbase.
    pub fn complement(&self) -> Term {
        match self {
            Term::Up(a) => Term::Down(*a),
            Term::Down(a) => Term::Up(*a),
            Term::Not(t) => (**t).clone(),
            other => Term::Not(Box::new(other.clone())),
        }
    }

    pub fn render(&self, poset: &FinitePoset) -> String {
        match self {
            Term::Up(a) => format!("U[{}]", poset.name(*a)),
            Term::Down(a) => format!("V[{}]", poset.name(*a)),
            Term::And(l, r) => format!("({} & {})", l.render(poset), r.render(poset)),
            Term::Or(l, r) => format!("({} | {})", l.render(poset), r.render(poset)),
            Term::Not(t) => format!("!{}", t.render(poset)),
        }
    }
}

fn zip_with(a: &[bool], b: &[bool], f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// A clopen set: its carrier over the poset's elements plus the symbolic
/// term it evaluates. The carrier always equals the term's evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClopenSet {
    pub carrier: Vec<bool>,
    pub term: Term,
}

impl ClopenSet {
    pub fn from_term(poset: &FinitePoset, term: Term) -> Self {
        ClopenSet {
            carrier: term.eval(poset),
            term,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.carrier[i]
    }

    pub fn is_disjoint_from(&self, other: &ClopenSet) -> bool {
        self.carrier
            .iter()
            .zip(&other.carrier)
            .all(|(&a, &b)| !(a && b))
    }

    pub fn complement(&self, poset: &FinitePoset) -> ClopenSet {
        ClopenSet::from_term(poset, self.term.complement())
    }

    /// Indicator values in element order.
    pub fn indicator(&self) -> Vec<u8> {
        self.carrier.iter().map(|&b| b as u8).collect()
    }
}

/// All subbase sets U_a and V_a, with their terms, interleaved per element.
pub fn subbase_sets(poset: &FinitePoset) -> Vec<ClopenSet> {
    let mut out = Vec::with_capacity(2 * poset.len());
    for a in 0..poset.len() {
        out.push(ClopenSet::from_term(poset, Term::Up(a)));
        out.push(ClopenSet::from_term(poset, Term::Down(a)));
    }
    out
}

/// Disjoint clopen neighborhoods separating two distinct elements.
///
/// When a <= b fails the pair (U_a, V_a) works; otherwise a <= b holds, so
/// b <= a fails by antisymmetry and (V_b, U_b) separates instead.
pub fn hausdorff_witness(
    poset: &FinitePoset,
    a: usize,
    b: usize,
) -> Result<(ClopenSet, ClopenSet)> {
    if a == b {
        return Err(Error::structural("cannot separate an element from itself"));
    }
    let (holder_a, holder_b) = if !poset.leq(a, b) {
        (
            ClopenSet::from_term(poset, Term::Up(a)),
            ClopenSet::from_term(poset, Term::Down(a)),
        )
    } else {
        (
            ClopenSet::from_term(poset, Term::Down(b)),
            ClopenSet::from_term(poset, Term::Up(b)),
        )
    };
    debug_assert!(holder_a.contains(a) && holder_b.contains(b));
    debug_assert!(holder_a.is_disjoint_from(&holder_b));
    Ok((holder_a, holder_b))
}

/// The canonical expression of the singleton {x} as a finite intersection
/// of subbase sets: U_x meets V_b over every b not below x. Witnesses that
/// the generated topology on a finite poset is discrete.
pub fn singleton_term(poset: &FinitePoset, x: usize) -> Term {
    let mut term = Term::Up(x);
    for b in 0..poset.len() {
        if !poset.leq(b, x) {
            term = Term::And(Box::new(term), Box::new(Term::Down(b)));
        }
    }
    term
}

/// A clopen separating function: a set W with a in W, W disjoint from F,
/// W a finite intersection of subbase sets, together with its indicator.
///
/// F must be closed (in the finite case every set is, which the discreteness
/// of the topology guarantees; the check is kept for the contract) and must
/// not contain a.
pub fn urysohn_function(
    poset: &FinitePoset,
    closed_set: &[usize],
    a: usize,
) -> Result<(ClopenSet, Vec<u8>)> {
    if closed_set.contains(&a) {
        return Err(Error::precondition("the point must lie outside the closed set"));
    }
    if closed_set.iter().any(|&f| f >= poset.len()) {
        return Err(Error::structural("closed set names an unknown element"));
    }
    if !is_closed(poset, closed_set) {
        return Err(Error::precondition("the set is not closed in the generated topology"));
    }

    // Factors that contain a, in canonical order: U_a first, then V_b for
    // each b not below a, then the remaining upsets U_c with c <= a.
    let mut factors: Vec<Term> = vec![Term::Up(a)];
    for b in 0..poset.len() {
        if !poset.leq(b, a) {
            factors.push(Term::Down(b));
        }
    }
    for c in 0..poset.len() {
        if c != a && poset.leq(c, a) {
            factors.push(Term::Up(c));
        }
    }

    // Smallest number of factors whose intersection avoids F, searched by
    // subset size with the factor order breaking ties.
    let avoided = |carrier: &[bool]| closed_set.iter().all(|&f| !carrier[f]);
    for size in 1..=factors.len() {
        if let Some(term) = search_intersection(poset, &factors, size, avoided) {
            let w = ClopenSet::from_term(poset, term);
            debug_assert!(w.contains(a));
            // Indicator continuity: both W and its complement are clopen.
            let f = w.indicator();
            debug_assert_eq!(
                w.complement(poset).indicator(),
                f.iter().map(|v| 1 - v).collect::<Vec<_>>()
            );
            return Ok((w, f));
        }
    }
    Err(Error::internal(
        "no separating intersection found; the singleton factorization always qualifies",
    ))
}

fn search_intersection(
    poset: &FinitePoset,
    factors: &[Term],
    size: usize,
    accept: impl Fn(&[bool]) -> bool + Copy,
) -> Option<Term> {
    fn rec(
        poset: &FinitePoset,
        factors: &[Term],
        size: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        accept: impl Fn(&[bool]) -> bool + Copy,
    ) -> Option<Term> {
        if chosen.len() == size {
            let mut term = factors[chosen[0]].clone();
            for &idx in &chosen[1..] {
                term = Term::And(Box::new(term), Box::new(factors[idx].clone()));
            }
            let carrier = term.eval(poset);
            return accept(&carrier).then_some(term);
        }
        for i in start..factors.len() {
            chosen.push(i);
            if let Some(t) = rec(poset, factors, size, i + 1, chosen, accept) {
                return Some(t);
            }
            chosen.pop();
        }
        None
    }
    rec(poset, factors, size, 0, &mut Vec::new(), accept)
}

/// Openness in the topology generated by the subbase: every member has a
/// basic (finite-intersection) neighborhood inside the set. On finite posets
/// the singleton factorization makes every set open, hence every set closed.
fn is_closed(poset: &FinitePoset, set: &[usize]) -> bool {
    let complement: Vec<usize> = (0..poset.len()).filter(|i| !set.contains(i)).collect();
    complement.iter().all(|&x| {
        let term = singleton_term(poset, x);
        let carrier = term.eval(poset);
        carrier
            .iter()
            .enumerate()
            .all(|(i, &inside)| !inside || complement.contains(&i))
    })
}

/// Result of probing a candidate subcover of {U_a} against the minimals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubcoverOutcome {
    /// Every listed minimal lies in some candidate upset.
    Covered,
    /// The first minimal (in input order) missed by all candidate upsets.
    Uncovered(usize),
}

/// A minimal element c lies in U_a only when a <= c, which by minimality
/// forces a = c; so any candidate family of upsets covers exactly the
/// minimals it names. Returns the first uncovered minimal in input order.
pub fn refute_subcover(
    poset: &FinitePoset,
    minimals: &[usize],
    candidate: &[usize],
) -> Result<SubcoverOutcome> {
    for &c in minimals {
        if c >= poset.len() {
            return Err(Error::structural("minimal index out of range"));
        }
        if !poset.is_minimal(c) {
            return Err(Error::precondition(format!(
                "'{}' is not minimal in the ambient poset",
                poset.name(c)
            )));
        }
    }
    for pair in minimals.windows(2) {
        // Pairwise incomparability is implied by minimality plus distinctness,
        // but the contract asks for it, so distinctness is what we verify.
        if pair[0] == pair[1] {
            return Err(Error::precondition("duplicate minimal element"));
        }
    }
    for &c in minimals {
        let covered = candidate.iter().any(|&a| poset.leq(a, c));
        if !covered {
            return Ok(SubcoverOutcome::Uncovered(c));
        }
    }
    Ok(SubcoverOutcome::Covered)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinitePoset {
        // 0 < a, b < 1 (top is called "t").
        let elements = vec!["0".into(), "a".into(), "b".into(), "t".into()];
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
        }
        leq[0][1] = true;
        leq[0][2] = true;
        leq[0][3] = true;
        leq[1][3] = true;
        leq[2][3] = true;
        FinitePoset::new(elements, leq).unwrap()
    }

    #[test]
    fn subbase_on_chain() {
        let p = FinitePoset::chain(3);
        let sets = subbase_sets(&p);
        // U_1 = {1, 2}, V_1 = {0}
        assert_eq!(sets[2].carrier, vec![false, true, true]);
        assert_eq!(sets[3].carrier, vec![true, false, false]);
        // Bottom's upset is everything.
        assert_eq!(sets[0].carrier, vec![true, true, true]);
    }

    #[test]
    fn subbase_on_diamond() {
        let p = diamond();
        let a = p.index_of("a").unwrap();
        let u_a = ClopenSet::from_term(&p, Term::Up(a));
        assert_eq!(u_a.carrier, vec![false, true, false, true]);
        let v_a = u_a.complement(&p);
        assert_eq!(v_a.carrier, vec![true, false, true, false]);
    }

    #[test]
    fn complement_carriers_match_terms() {
        let p = diamond();
        for s in subbase_sets(&p) {
            let c = s.complement(&p);
            for i in 0..p.len() {
                assert_eq!(s.contains(i), !c.contains(i));
            }
        }
    }

    #[test]
    fn hausdorff_incomparable_pair() {
        let p = diamond();
        let a = p.index_of("a").unwrap();
        let b = p.index_of("b").unwrap();
        let (wa, wb) = hausdorff_witness(&p, a, b).unwrap();
        assert!(wa.contains(a) && wb.contains(b));
        assert!(wa.is_disjoint_from(&wb));
        assert_eq!(wa.term, Term::Up(a));
    }

    #[test]
    fn hausdorff_comparable_pair_uses_reversed_branch() {
        let p = FinitePoset::chain(2);
        // a = 0 < b = 1: U_0 contains both, so the witness must come from b.
        let (wa, wb) = hausdorff_witness(&p, 0, 1).unwrap();
        assert_eq!(wa.term, Term::Down(1));
        assert_eq!(wb.term, Term::Up(1));
        assert!(wa.contains(0) && wb.contains(1));
        assert!(wa.is_disjoint_from(&wb));
    }

    #[test]
    fn hausdorff_chain_pair_down() {
        let p = FinitePoset::chain(2);
        // a = 1, b = 0: 1 <= 0 fails, so (U_1, V_1) = ({1}, {0}).
        let (wa, wb) = hausdorff_witness(&p, 1, 0).unwrap();
        assert_eq!(wa.carrier, vec![false, true]);
        assert_eq!(wb.carrier, vec![true, false]);
    }

    #[test]
    fn urysohn_empty_closed_set() {
        let p = FinitePoset::chain(3);
        let (w, f) = urysohn_function(&p, &[], 1).unwrap();
        assert_eq!(w.term, Term::Up(1));
        assert_eq!(f, vec![0, 1, 1]);
    }

    #[test]
    fn urysohn_on_diamond_top() {
        let p = diamond();
        let top = p.index_of("t").unwrap();
        let (w, _) = urysohn_function(&p, &[0], top).unwrap();
        assert_eq!(w.term, Term::Up(top));
        assert_eq!(w.carrier, vec![false, false, false, true]);
    }

    #[test]
    fn urysohn_avoids_upper_chain_via_complement() {
        let p = FinitePoset::chain(3);
        let (w, f) = urysohn_function(&p, &[2], 0).unwrap();
        // V_1 = {0} avoids both 1 and 2 and is a single factor.
        assert_eq!(w.term, Term::Down(1));
        assert_eq!(f, vec![1, 0, 0]);
    }

    #[test]
    fn urysohn_rejects_point_in_set() {
        let p = FinitePoset::chain(2);
        assert!(urysohn_function(&p, &[0], 0).is_err());
    }

    #[test]
    fn singletons_are_basic_opens() {
        let p = diamond();
        for x in 0..p.len() {
            let carrier = singleton_term(&p, x).eval(&p);
            let expect: Vec<bool> = (0..p.len()).map(|i| i == x).collect();
            assert_eq!(carrier, expect);
        }
    }

    fn antichain(n: usize) -> FinitePoset {
        let elements = (0..n).map(|i| format!("c{i}")).collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FinitePoset::new(elements, leq).unwrap()
    }

    #[test]
    fn refuter_finds_third_minimal() {
        let p = antichain(5);
        let outcome = refute_subcover(&p, &[0, 1, 2, 3, 4], &[0, 1]).unwrap();
        assert_eq!(outcome, SubcoverOutcome::Uncovered(2));
    }

    #[test]
    fn refuter_full_cover() {
        let p = antichain(5);
        let outcome = refute_subcover(&p, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(outcome, SubcoverOutcome::Covered);
    }

    #[test]
    fn non_minimal_candidate_covers_nothing() {
        // c0..c2 minimal, b above c2 only.
        let elements = vec!["c0".into(), "c1".into(), "c2".into(), "b".into()];
        let mut leq = vec![vec![false; 4]; 4];
        for i in 0..4 {
            leq[i][i] = true;
        }
        leq[2][3] = true; // c2 <= b
        let p = FinitePoset::new(elements, leq).unwrap();
        let outcome = refute_subcover(&p, &[0, 1, 2], &[3]).unwrap();
        assert_eq!(outcome, SubcoverOutcome::Uncovered(0));
    }

    #[test]
    fn non_minimal_in_minimals_is_rejected() {
        let p = FinitePoset::chain(2);
        assert!(refute_subcover(&p, &[1], &[]).is_err());
    }
}
