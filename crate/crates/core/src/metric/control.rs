//! Coarse-order certificates: monotone piecewise-linear control functions,
//! tightest-certificate construction, and the two-scale stability compare.

use crate::error::{Error, Result};
use crate::metric::glue::GluedMetric;
use crate::numeric::{rat, Rat};
use num_traits::{One, Zero};

/// Slope inserted between flat steps so certificates are strictly increasing.
pub fn repair_slope() -> Rat {
    rat(1, 1024)
}

/// A strictly increasing piecewise-linear function on [0, oo), evaluated
/// exactly on rationals, extended linearly beyond the last breakpoint.
/// Serves as the computable stand-in for a control homeomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlFunction {
    /// Increasing (t, phi(t)) pairs; the first t is 0.
    breakpoints: Vec<(Rat, Rat)>,
    tail_slope: Rat,
    /// The (d1, d2) pairs this certificate was built to dominate.
    constraints: Vec<(Rat, Rat)>,
}

impl ControlFunction {
    pub fn new(breakpoints: Vec<(Rat, Rat)>, tail_slope: Rat) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::structural("control function needs breakpoints"));
        }
        if breakpoints[0].0 != Rat::zero() {
            return Err(Error::structural("control function must start at t = 0"));
        }
        if breakpoints[0].1 < Rat::zero() {
            return Err(Error::structural("control function needs phi(0) >= 0"));
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(Error::structural(
                    "control function breakpoints must be strictly increasing",
                ));
            }
        }
        if tail_slope <= Rat::zero() {
            return Err(Error::structural("control function tail slope must be positive"));
        }
        Ok(ControlFunction {
            breakpoints,
            tail_slope,
            constraints: Vec::new(),
        })
    }

    pub fn identity() -> Self {
        ControlFunction {
            breakpoints: vec![(Rat::zero(), Rat::zero())],
            tail_slope: Rat::one(),
            constraints: Vec::new(),
        }
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    pub fn tail_slope(&self) -> &Rat {
        &self.tail_slope
    }

    pub fn constraints(&self) -> &[(Rat, Rat)] {
        &self.constraints
    }

    /// Exact evaluation.
    pub fn eval(&self, t: &Rat) -> Rat {
        assert!(*t >= Rat::zero(), "control functions live on [0, oo)");
        let last = self.breakpoints.len() - 1;
        if *t >= self.breakpoints[last].0 {
            let (t0, v0) = &self.breakpoints[last];
            return v0 + &self.tail_slope * (t - t0);
        }
        // t below the last breakpoint: find the surrounding segment.
        let mut hi = 1;
        while self.breakpoints[hi].0 < *t {
            hi += 1;
        }
        let (t0, v0) = &self.breakpoints[hi - 1];
        let (t1, v1) = &self.breakpoints[hi];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Does this certificate dominate every recorded constraint pair?
    pub fn dominates_constraints(&self) -> bool {
        self.constraints.iter().all(|(a, b)| self.eval(a) >= *b)
    }

    /// Compose with `inner` first: returns t -> self(inner(t)). The result
    /// certifies d1 <= d3 when `inner` certifies d1 <= d2 and `self`
    /// certifies d2 <= d3.
    pub fn compose_after(&self, inner: &ControlFunction) -> ControlFunction {
        let mut knots: Vec<Rat> = inner.breakpoints.iter().map(|(t, _)| t.clone()).collect();
        // Preimages of the outer breakpoints, where they exist.
        for (s, _) in &self.breakpoints {
            if let Some(t) = inner.preimage(s) {
                knots.push(t);
            }
        }
        knots.sort();
        knots.dedup();
        let breakpoints: Vec<(Rat, Rat)> = knots
            .into_iter()
            .map(|t| {
                let v = self.eval(&inner.eval(&t));
                (t, v)
            })
            .collect();
        let tail_slope = &self.tail_slope * &inner.tail_slope;
        ControlFunction {
            breakpoints,
            tail_slope,
            constraints: Vec::new(),
        }
    }

    /// Inverse image of a value, if it is attained (strict monotonicity
    /// makes it unique).
    fn preimage(&self, value: &Rat) -> Option<Rat> {
        if *value < self.breakpoints[0].1 {
            return None;
        }
        let last = self.breakpoints.len() - 1;
        if *value >= self.breakpoints[last].1 {
            let (t0, v0) = &self.breakpoints[last];
            return Some(t0 + (value - v0) / &self.tail_slope);
        }
        let mut hi = 1;
        while self.breakpoints[hi].1 < *value {
            hi += 1;
        }
        let (t0, v0) = &self.breakpoints[hi - 1];
        let (t1, v1) = &self.breakpoints[hi];
        Some(t0 + (t1 - t0) * (value - v0) / (v1 - v0))
    }

    /// Tightest monotone certificate dominating the given (d1, d2) pairs:
    /// the prefix-max step function t -> max{d2 : d1 <= t}, repaired to
    /// strict monotonicity with the fixed slope between flat steps.
    pub fn tightest(pairs: &[(Rat, Rat)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::structural("no pairs to certify"));
        }
        let eps = repair_slope();
        let mut sorted = pairs.to_vec();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut breakpoints: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero())];
        let mut running_max = Rat::zero();
        let mut i = 0;
        while i < sorted.len() {
            let t = sorted[i].0.clone();
            let mut step_max = running_max.clone();
            while i < sorted.len() && sorted[i].0 == t {
                if sorted[i].1 > step_max {
                    step_max = sorted[i].1.clone();
                }
                i += 1;
            }
            running_max = step_max;
            let (prev_t, prev_v) = breakpoints.last().unwrap().clone();
            debug_assert!(t > prev_t, "cross distances are strictly positive");
            let floor = &prev_v + &eps * (&t - &prev_t);
            let v = if running_max > floor { running_max.clone() } else { floor };
            breakpoints.push((t, v));
        }
        let mut cf = ControlFunction::new(breakpoints, Rat::one())?;
        cf.constraints = pairs.to_vec();
        debug_assert!(cf.dominates_constraints());
        Ok(cf)
    }
}

/// Outcome of a coarse-order comparison.
#[derive(Clone, Debug)]
pub enum CompareVerdict {
    /// d1 <= d2, certified: d2(x, y) <= phi(d1(x, y)) on the data.
    Leq(ControlFunction),
    /// d2 <= d1, certified by the function carried.
    Geq(ControlFunction),
    /// Both directions certified.
    Equivalent(ControlFunction, ControlFunction),
    /// A finite witness against both directions. Never produced from finite
    /// snapshots (they cannot witness coarse inequivalence); kept so callers
    /// can represent externally-derived knowledge.
    Incomparable { witness: String },
    /// The certificates failed the two-scale stability test.
    Inconclusive { detail: String },
}

fn cross_pairs(d1: &GluedMetric, d2: &GluedMetric) -> Vec<(Rat, Rat)> {
    let mut pairs = Vec::new();
    for x in 0..d1.left().len() {
        for y in 0..d1.right().len() {
            pairs.push((d1.cross(x, y).clone(), d2.cross(x, y).clone()));
        }
    }
    pairs
}

fn require_same_pair(d1: &GluedMetric, d2: &GluedMetric) -> Result<()> {
    if d1.left() != d2.left() || d1.right() != d2.right() {
        return Err(Error::structural(
            "comparison needs both glues over the same (X, Y) pair",
        ));
    }
    Ok(())
}

/// Compare two glues on a single finite snapshot.
///
/// On finite data the tightest certificate always exists in both directions,
/// so the verdict is `Equivalent`; family-level claims need the two-scale
/// variant [`control_compare_stable`].
pub fn control_compare(d1: &GluedMetric, d2: &GluedMetric) -> Result<CompareVerdict> {
    require_same_pair(d1, d2)?;
    let phi = ControlFunction::tightest(&cross_pairs(d1, d2))?;
    let psi = ControlFunction::tightest(&cross_pairs(d2, d1))?;
    Ok(CompareVerdict::Equivalent(phi, psi))
}

/// Certificate for d1 <= d2 from a snapshot (always constructible).
pub fn certify_leq(d1: &GluedMetric, d2: &GluedMetric) -> Result<ControlFunction> {
    require_same_pair(d1, d2)?;
    ControlFunction::tightest(&cross_pairs(d1, d2))
}

/// Two-scale comparison: the same pair of metrics sampled at truncation R
/// (`small`) and at truncation 2R (`large`). A direction is certified only
/// when the tightest step data at the large scale agrees with the small
/// scale over the small domain; otherwise the verdict is inconclusive.
pub fn control_compare_stable(
    small: (&GluedMetric, &GluedMetric),
    large: (&GluedMetric, &GluedMetric),
) -> Result<CompareVerdict> {
    require_same_pair(small.0, small.1)?;
    require_same_pair(large.0, large.1)?;
    require_subglue(small.0, large.0)?;
    require_subglue(small.1, large.1)?;

    let leq_stable = direction_stable(
        &cross_pairs(small.0, small.1),
        &cross_pairs(large.0, large.1),
    );
    let geq_stable = direction_stable(
        &cross_pairs(small.1, small.0),
        &cross_pairs(large.1, large.0),
    );
    let phi = ControlFunction::tightest(&cross_pairs(small.0, small.1))?;
    let psi = ControlFunction::tightest(&cross_pairs(small.1, small.0))?;
    Ok(match (leq_stable, geq_stable) {
        (true, true) => CompareVerdict::Equivalent(phi, psi),
        (true, false) => CompareVerdict::Leq(phi),
        (false, true) => CompareVerdict::Geq(psi),
        (false, false) => CompareVerdict::Inconclusive {
            detail: "tightest certificates disagree between truncation scales in both directions"
                .into(),
        },
    })
}

/// The step data max{d2 : d1 <= t} must be unchanged by the larger sample
/// at every t observed in the small sample.
fn direction_stable(small_pairs: &[(Rat, Rat)], large_pairs: &[(Rat, Rat)]) -> bool {
    let step_max = |pairs: &[(Rat, Rat)], t: &Rat| -> Rat {
        pairs
            .iter()
            .filter(|(a, _)| a <= t)
            .map(|(_, b)| b.clone())
            .max()
            .unwrap_or_else(Rat::zero)
    };
    let mut ts: Vec<Rat> = small_pairs.iter().map(|(a, _)| a.clone()).collect();
    ts.sort();
    ts.dedup();
    ts.iter()
        .all(|t| step_max(small_pairs, t) == step_max(large_pairs, t))
}

/// Check that `small` embeds in `large` by point names, with identical
/// within-space and cross distances on the common points.
fn require_subglue(small: &GluedMetric, large: &GluedMetric) -> Result<()> {
    let find = |space: &crate::metric::space::FiniteMetricSpace, name: &str| {
        space
            .index_of(name)
            .ok_or_else(|| Error::structural(format!("point '{name}' missing at larger scale")))
    };
    let left_map: Vec<usize> = small
        .left()
        .points()
        .iter()
        .map(|p| find(large.left(), p))
        .collect::<Result<_>>()?;
    let right_map: Vec<usize> = small
        .right()
        .points()
        .iter()
        .map(|p| find(large.right(), p))
        .collect::<Result<_>>()?;
    for (i, &li) in left_map.iter().enumerate() {
        for (j, &lj) in left_map.iter().enumerate() {
            if small.left().dist(i, j) != large.left().dist(li, lj) {
                return Err(Error::structural("left space is not an isometric subspace"));
            }
        }
        for (j, &rj) in right_map.iter().enumerate() {
            if small.cross(i, j) != large.cross(li, rj) {
                return Err(Error::structural("cross distances differ between scales"));
            }
        }
    }
    for (i, &ri) in right_map.iter().enumerate() {
        for (j, &rj) in right_map.iter().enumerate() {
            if small.right().dist(i, j) != large.right().dist(ri, rj) {
                return Err(Error::structural("right space is not an isometric subspace"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::glue::{glue, smallest_metric};
    use crate::metric::space::FiniteMetricSpace;
    use crate::numeric::rat_int;

    fn half(n: usize) -> FiniteMetricSpace {
        FiniteMetricSpace::half_line(n)
    }

    #[test]
    fn identity_certificate_for_equal_metrics() {
        let g = smallest_metric(&half(3), &half(3), "0", "0").unwrap();
        match control_compare(&g, &g).unwrap() {
            CompareVerdict::Equivalent(phi, psi) => {
                assert!(phi.dominates_constraints());
                assert!(psi.dominates_constraints());
                for (a, b) in phi.constraints() {
                    assert_eq!(a, b);
                }
            }
            other => panic!("expected equivalent, got {other:?}"),
        }
    }

    #[test]
    fn constant_shift_is_equivalent() {
        let x = half(3);
        let y = half(3);
        let base = smallest_metric(&x, &y, "0", "0").unwrap();
        // Shifting all cross distances by a constant preserves every mixed
        // triangle, so the shifted glue passes validation.
        let shifted_cross: Vec<Vec<_>> = (0..x.len())
            .map(|i| {
                (0..y.len())
                    .map(|j| base.cross(i, j) + rat_int(5))
                    .collect()
            })
            .collect();
        let shifted = glue(x, y, shifted_cross).unwrap();
        match control_compare(&shifted, &base).unwrap() {
            CompareVerdict::Equivalent(phi, _) => {
                for (a, b) in phi.constraints() {
                    assert_eq!(&(b + rat_int(5)), a);
                    assert!(phi.eval(a) >= *b);
                }
            }
            other => panic!("expected equivalent, got {other:?}"),
        }
    }

    #[test]
    fn certificates_compose_transitively() {
        let x = half(4);
        let y = half(4);
        let d1 = smallest_metric(&x, &y, "0", "0").unwrap();
        let shift = |g: &GluedMetric, c: i64| {
            let cross = (0..x.len())
                .map(|i| {
                    (0..y.len())
                        .map(|j| g.cross(i, j) + rat_int(c))
                        .collect()
                })
                .collect();
            glue(x.clone(), y.clone(), cross).unwrap()
        };
        let d2 = shift(&d1, 3);
        let d3 = shift(&d1, 7);
        let phi12 = certify_leq(&d1, &d2).unwrap();
        let phi23 = certify_leq(&d2, &d3).unwrap();
        let phi13 = phi23.compose_after(&phi12);
        // Composed certificate dominates the direct constraint set.
        for i in 0..x.len() {
            for j in 0..y.len() {
                assert!(phi13.eval(d1.cross(i, j)) >= *d3.cross(i, j));
            }
        }
    }

    #[test]
    fn strictly_increasing_after_repair() {
        // Flat data still yields a strictly increasing certificate.
        let pairs = vec![
            (rat_int(1), rat_int(4)),
            (rat_int(2), rat_int(4)),
            (rat_int(9), rat_int(4)),
        ];
        let phi = ControlFunction::tightest(&pairs).unwrap();
        let mut prev = phi.eval(&rat_int(0));
        for t in 1..=10 {
            let v = phi.eval(&rat_int(t));
            assert!(v > prev);
            prev = v;
        }
        assert!(phi.dominates_constraints());
    }
}
