//! Parameterized space families with monotone truncations.

use crate::error::{Error, Result};
use crate::metric::space::FiniteMetricSpace;
use crate::numeric::{rat_int, Rat};
use num_traits::{Signed, ToPrimitive};

/// A family of metric spaces indexed by a truncation radius. Truncations at
/// growing radii are isometric subspaces of one another.
#[derive(Clone, Debug)]
pub enum SpaceFamily {
    /// A fixed space; truncation keeps the ball around the basepoint.
    Explicit(FiniteMetricSpace),
    /// The half line 0, 1, 2, ... with |m - n|.
    HalfLine,
    /// The union of coordinate axes in l1: the origin plus points (i, n),
    /// n >= 1, on each of the given number of axes. Distances: |n - m| on a
    /// shared axis, n + m across axes, n to the origin.
    AxisUnion { axes: usize },
}

impl SpaceFamily {
    /// The finite space of all family points within `radius` of the origin
    /// or basepoint.
    pub fn truncate(&self, radius: &Rat) -> Result<FiniteMetricSpace> {
        if radius.is_negative() {
            return Err(Error::structural("truncation radius must be nonnegative"));
        }
        match self {
            SpaceFamily::Explicit(space) => {
                let base = space.basepoint();
                let keep: Vec<usize> = (0..space.len())
                    .filter(|&i| space.dist(base, i) <= radius)
                    .collect();
                let points = keep.iter().map(|&i| space.point_name(i).to_string()).collect();
                let dist = keep
                    .iter()
                    .map(|&i| keep.iter().map(|&j| space.dist(i, j).clone()).collect())
                    .collect();
                FiniteMetricSpace::new(points, dist, Some(space.basepoint_name()))
            }
            SpaceFamily::HalfLine => {
                let n = radius
                    .floor()
                    .to_integer()
                    .to_usize()
                    .ok_or_else(|| Error::structural("radius out of range"))?;
                Ok(FiniteMetricSpace::half_line(n + 1))
            }
            SpaceFamily::AxisUnion { axes } => {
                if *axes == 0 {
                    return Err(Error::structural("axis union needs at least one axis"));
                }
                let r = radius
                    .floor()
                    .to_integer()
                    .to_usize()
                    .ok_or_else(|| Error::structural("radius out of range"))?;
                // (axis, coordinate); axis 0 with coordinate 0 is the origin.
                let mut coords: Vec<(usize, usize)> = vec![(0, 0)];
                for axis in 1..=*axes {
                    for n in 1..=r {
                        coords.push((axis, n));
                    }
                }
                let name = |&(axis, n): &(usize, usize)| {
                    if n == 0 {
                        "0".to_string()
                    } else {
                        format!("a{axis}n{n}")
                    }
                };
                let dist_of = |a: &(usize, usize), b: &(usize, usize)| -> Rat {
                    let (ai, an) = *a;
                    let (bi, bn) = *b;
                    if ai == bi || an == 0 || bn == 0 {
                        rat_int((an as i64 - bn as i64).abs())
                    } else {
                        rat_int((an + bn) as i64)
                    }
                };
                let points = coords.iter().map(name).collect();
                let dist = coords
                    .iter()
                    .map(|a| coords.iter().map(|b| dist_of(a, b)).collect())
                    .collect();
                FiniteMetricSpace::new(points, dist, Some("0"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::space::validate_metric;
    use num_traits::Zero;

    #[test]
    fn half_line_truncation_agrees_with_formula() {
        let fam = SpaceFamily::HalfLine;
        let s = fam.truncate(&rat_int(3)).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.dist(1, 3), &rat_int(2));
        assert!(validate_metric(&s, &[]).pass);
    }

    #[test]
    fn axis_union_is_a_metric_and_monotone() {
        let fam = SpaceFamily::AxisUnion { axes: 3 };
        let small = fam.truncate(&rat_int(2)).unwrap();
        let large = fam.truncate(&rat_int(4)).unwrap();
        assert!(validate_metric(&small, &[]).pass);
        assert!(validate_metric(&large, &[]).pass);
        // Isometric inclusion by point names.
        for i in 0..small.len() {
            for j in 0..small.len() {
                let li = large.index_of(small.point_name(i)).unwrap();
                let lj = large.index_of(small.point_name(j)).unwrap();
                assert_eq!(small.dist(i, j), large.dist(li, lj));
            }
        }
        // Cross-axis distance is the l1 sum.
        let a = small.index_of("a1n2").unwrap();
        let b = small.index_of("a2n1").unwrap();
        assert_eq!(small.dist(a, b), &rat_int(3));
    }

    #[test]
    fn zero_radius_axis_union_is_the_origin() {
        let fam = SpaceFamily::AxisUnion { axes: 2 };
        let s = fam.truncate(&Rat::zero()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.point_name(0), "0");
    }
}
