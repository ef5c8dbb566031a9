//! Glued metrics on a disjoint union X ⊔ Y: validation, min-plus
//! composition with midpoint witnesses, adjoints and derived metrics.

use crate::error::{Error, Result};
use crate::metric::space::{validate_metric, FiniteMetricSpace, MetricViolation};
use crate::numeric::Rat;
use num_traits::Zero;

/// A metric on X ⊔ Y restricting to the given metrics on X and Y, with all
/// cross distances strictly positive. Stored as the two spaces plus the
/// |X| x |Y| cross block; the within-space blocks are the spaces' own
/// matrices by construction, so the restriction condition is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedMetric {
    left: FiniteMetricSpace,
    right: FiniteMetricSpace,
    cross: Vec<Vec<Rat>>,
}

/// Which triple broke the glue validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlueViolation {
    /// Some cross entry is not strictly positive.
    Gap { x: usize, y: usize },
    /// A mixed triangle inequality fails; indices name points of X ⊔ Y in
    /// the order (left points first, then right points).
    Triangle { a: String, b: String, c: String },
}

impl GluedMetric {
    /// Validate and build a glue from two spaces and a cross matrix.
    ///
    /// Every mixed triangle inequality is checked exactly; the first
    /// violation is reported with the offending triple.
    pub fn new(
        left: FiniteMetricSpace,
        right: FiniteMetricSpace,
        cross: Vec<Vec<Rat>>,
    ) -> Result<Self> {
        let nx = left.len();
        let ny = right.len();
        if cross.len() != nx || cross.iter().any(|row| row.len() != ny) {
            return Err(Error::structural(format!(
                "cross matrix must be {nx}x{ny}"
            )));
        }
        let candidate = GluedMetric { left, right, cross };
        if let Some(v) = candidate.violation() {
            return Err(Error::structural(format!("glue rejected: {v:?}")));
        }
        Ok(candidate)
    }

    fn violation(&self) -> Option<GlueViolation> {
        let nx = self.left.len();
        let ny = self.right.len();
        for x in 0..nx {
            for y in 0..ny {
                if self.cross[x][y] <= Rat::zero() {
                    return Some(GlueViolation::Gap { x, y });
                }
            }
        }
        // Full metric check on the union, reported with point names.
        let total = self.union_space();
        let report = validate_metric(&total, &[]);
        if let Some(MetricViolation::Triangle { x, y, z }) = report.violation {
            return Some(GlueViolation::Triangle {
                a: total.point_name(x).to_string(),
                b: total.point_name(y).to_string(),
                c: total.point_name(z).to_string(),
            });
        }
        debug_assert!(report.pass, "non-triangle violation in a glued union");
        None
    }

    /// The union X ⊔ Y as a single metric space. Left points keep their
    /// names; right points are suffixed with a prime when names collide.
    pub fn union_space(&self) -> FiniteMetricSpace {
        let nx = self.left.len();
        let ny = self.right.len();
        let mut names: Vec<String> = self.left.points().to_vec();
        for p in self.right.points() {
            let mut name = p.clone();
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
        }
        let mut dist = vec![vec![Rat::zero(); nx + ny]; nx + ny];
        for i in 0..nx {
            for j in 0..nx {
                dist[i][j] = self.left.dist(i, j).clone();
            }
        }
        for i in 0..ny {
            for j in 0..ny {
                dist[nx + i][nx + j] = self.right.dist(i, j).clone();
            }
        }
        for x in 0..nx {
            for y in 0..ny {
                dist[x][nx + y] = self.cross[x][y].clone();
                dist[nx + y][x] = self.cross[x][y].clone();
            }
        }
        FiniteMetricSpace::new(names, dist, None).expect("union space shape")
    }

    pub fn left(&self) -> &FiniteMetricSpace {
        &self.left
    }

    pub fn right(&self) -> &FiniteMetricSpace {
        &self.right
    }

    pub fn cross(&self, x: usize, y: usize) -> &Rat {
        &self.cross[x][y]
    }

    pub fn cross_matrix(&self) -> &Vec<Vec<Rat>> {
        &self.cross
    }

    /// Smallest cross distance.
    pub fn gap(&self) -> Rat {
        let mut best: Option<Rat> = None;
        for row in &self.cross {
            for v in row {
                best = Some(match best {
                    None => v.clone(),
                    Some(b) => b.min(v.clone()),
                });
            }
        }
        best.expect("nonempty cross")
    }

    /// The same metric read in the opposite order: a glue over (Y, X).
    pub fn adjoint(&self) -> GluedMetric {
        let nx = self.left.len();
        let ny = self.right.len();
        let mut cross = vec![vec![Rat::zero(); nx]; ny];
        for x in 0..nx {
            for y in 0..ny {
                cross[y][x] = self.cross[x][y].clone();
            }
        }
        GluedMetric {
            left: self.right.clone(),
            right: self.left.clone(),
            cross,
        }
    }
}

/// Validated glue constructor (free-standing name matching the operation).
pub fn glue(
    left: FiniteMetricSpace,
    right: FiniteMetricSpace,
    cross: Vec<Vec<Rat>>,
) -> Result<GluedMetric> {
    GluedMetric::new(left, right, cross)
}

/// A min-plus composition together with, for each (x, z), the midpoint y
/// attaining the minimum (lowest index on ties).
#[derive(Clone, Debug)]
pub struct Composition {
    pub glue: GluedMetric,
    /// `midpoints[x][z]` is the index in Y of the attaining midpoint.
    pub midpoints: Vec<Vec<usize>>,
}

/// Min-plus composition: given d1 over (X, Y) and d2 over (Y, Z), produce
/// the glue over (X, Z) with cross(x, z) = min over y of d1(x,y) + d2(y,z).
///
/// The middle spaces must be identical (same points, same distances). The
/// result is always a valid glue; its validation is asserted, not exposed.
pub fn compose(d1: &GluedMetric, d2: &GluedMetric) -> Result<Composition> {
    if d1.right() != d2.left() {
        return Err(Error::structural(
            "middle spaces differ; composition needs d1.right == d2.left",
        ));
    }
    let nx = d1.left().len();
    let ny = d1.right().len();
    let nz = d2.right().len();
    let mut cross = vec![vec![Rat::zero(); nz]; nx];
    let mut midpoints = vec![vec![0usize; nz]; nx];
    for x in 0..nx {
        for z in 0..nz {
            let mut best = d1.cross(x, 0) + d2.cross(0, z);
            let mut arg = 0usize;
            for y in 1..ny {
                let v = d1.cross(x, y) + d2.cross(y, z);
                if v < best {
                    best = v;
                    arg = y;
                }
            }
            cross[x][z] = best;
            midpoints[x][z] = arg;
        }
    }
    let glue = GluedMetric::new(d1.left().clone(), d2.right().clone(), cross)
        .map_err(|e| Error::internal(format!("composition failed validation: {e}")))?;
    Ok(Composition { glue, midpoints })
}

/// The adjoint, the derived metric on X and the derived metric on Y.
#[derive(Clone, Debug)]
pub struct DerivedMetrics {
    pub adjoint: GluedMetric,
    /// d^r on X: min over u in Y of d(x1,u) + d(x2,u) off the diagonal.
    pub right_derived: FiniteMetricSpace,
    /// d^l on Y: min over u in X of d(u,y1) + d(u,y2) off the diagonal.
    pub left_derived: FiniteMetricSpace,
}

/// Compute d*, d^r and d^l, asserting the composition identity
/// (d* after d)(x1, x2') = d^r(x1, x2) entrywise off the diagonal.
pub fn derived_metrics(d: &GluedMetric) -> Result<DerivedMetrics> {
    let adj = d.adjoint();
    let right_derived = derived_on_left(d)?;
    let left_derived = derived_on_left(&adj)?;

    // Identity against the min-plus route: compose(d, d*) glues X with X'.
    let through = compose(d, &adj)?;
    let nx = d.left().len();
    for x1 in 0..nx {
        for x2 in 0..nx {
            if x1 != x2 && through.glue.cross(x1, x2) != right_derived.dist(x1, x2) {
                return Err(Error::internal(format!(
                    "derived metric identity failed at ({x1}, {x2})"
                )));
            }
        }
    }
    Ok(DerivedMetrics {
        adjoint: adj,
        right_derived,
        left_derived,
    })
}

fn derived_on_left(d: &GluedMetric) -> Result<FiniteMetricSpace> {
    let nx = d.left().len();
    let ny = d.right().len();
    let mut dist = vec![vec![Rat::zero(); nx]; nx];
    for x1 in 0..nx {
        for x2 in 0..nx {
            if x1 == x2 {
                continue;
            }
            let mut best = d.cross(x1, 0) + d.cross(x2, 0);
            for u in 1..ny {
                let v = d.cross(x1, u) + d.cross(x2, u);
                if v < best {
                    best = v;
                }
            }
            dist[x1][x2] = best;
        }
    }
    let space = FiniteMetricSpace::new(d.left().points().to_vec(), dist, None)?;
    let report = validate_metric(&space, &[]);
    if !report.pass {
        return Err(Error::internal(format!(
            "derived metric is not a metric: {:?}",
            report.violation
        )));
    }
    Ok(space)
}

/// The basepoint-sum glue d(x, y) = d_X(x, x0) + 1 + d_Y(y0, y); always a
/// valid glue, and minimal in the coarse order among glues of the pair.
pub fn smallest_metric(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    x0: &str,
    y0: &str,
) -> Result<GluedMetric> {
    let xi = left
        .index_of(x0)
        .ok_or_else(|| Error::structural(format!("basepoint '{x0}' not in left space")))?;
    let yi = right
        .index_of(y0)
        .ok_or_else(|| Error::structural(format!("basepoint '{y0}' not in right space")))?;
    let one = crate::numeric::rat_int(1);
    let cross = (0..left.len())
        .map(|x| {
            (0..right.len())
                .map(|y| left.dist(x, xi) + &one + right.dist(yi, y))
                .collect()
        })
        .collect();
    GluedMetric::new(left.clone(), right.clone(), cross)
}

/// `smallest_metric` with the spaces' own basepoints (first point when none
/// was declared); the canonical representative of the bottom class.
pub fn smallest_metric_default(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
) -> Result<GluedMetric> {
    let x0 = left.basepoint_name().to_string();
    let y0 = right.basepoint_name().to_string();
    smallest_metric(left, right, &x0, &y0)
}
