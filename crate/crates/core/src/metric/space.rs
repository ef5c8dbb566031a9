//! Finite metric spaces over exact rationals: validation, uniform
//! discreteness and the bounded-geometry ball-count profile.

use crate::error::{Error, Result};
use crate::numeric::Rat;
use num_traits::Zero;

/// A finite metric space with named points and an exact distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    dist: Vec<Vec<Rat>>,
    basepoint: Option<usize>,
}

/// Why a candidate distance matrix fails to be a metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricViolation {
    /// `dist(x, x) != 0`.
    NonzeroDiagonal { x: usize },
    /// `dist(x, y) != dist(y, x)`.
    Asymmetric { x: usize, y: usize },
    /// `dist(x, y) <= 0` for distinct points.
    NonPositive { x: usize, y: usize },
    /// `dist(x, z) > dist(x, y) + dist(y, z)`.
    Triangle { x: usize, y: usize, z: usize },
}

/// Result of validating a space: separation constant, ball-count profile and
/// either a pass or the first violation found.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub pass: bool,
    pub violation: Option<MetricViolation>,
    /// Minimal distance between distinct points (uniform discreteness), when
    /// the matrix is at least positive off the diagonal.
    pub separation: Option<Rat>,
    /// For each requested radius R, the largest ball cardinality C(R).
    pub ball_profile: Vec<(Rat, usize)>,
}

impl FiniteMetricSpace {
    /// Build a space, checking only structure (shape, name uniqueness). Use
    /// [`validate_metric`] for the metric axioms.
    pub fn new(
        points: Vec<String>,
        dist: Vec<Vec<Rat>>,
        basepoint: Option<&str>,
    ) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::structural("a metric space needs at least one point"));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::structural(format!(
                "distance matrix must be {n}x{n} to match the point list"
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if points[i] == points[j] {
                    return Err(Error::structural(format!(
                        "duplicate point identifier '{}'",
                        points[i]
                    )));
                }
            }
        }
        let basepoint = match basepoint {
            None => None,
            Some(name) => Some(
                points
                    .iter()
                    .position(|p| p == name)
                    .ok_or_else(|| Error::structural(format!("basepoint '{name}' not in space")))?,
            ),
        };
        Ok(FiniteMetricSpace {
            points,
            dist,
            basepoint,
        })
    }

    /// Build and require the metric axioms to hold.
    pub fn new_checked(
        points: Vec<String>,
        dist: Vec<Vec<Rat>>,
        basepoint: Option<&str>,
    ) -> Result<Self> {
        let space = Self::new(points, dist, basepoint)?;
        let report = validate_metric(&space, &[]);
        if let Some(v) = report.violation {
            return Err(Error::structural(format!("not a metric: {v:?}")));
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rat {
        &self.dist[i][j]
    }

    pub fn dist_matrix(&self) -> &Vec<Vec<Rat>> {
        &self.dist
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint.unwrap_or(0)
    }

    pub fn basepoint_name(&self) -> &str {
        &self.points[self.basepoint()]
    }

    pub fn with_basepoint(mut self, index: usize) -> Result<Self> {
        if index >= self.points.len() {
            return Err(Error::structural("basepoint index out of range"));
        }
        self.basepoint = Some(index);
        Ok(self)
    }

    /// Smallest distance between distinct points.
    pub fn separation(&self) -> Rat {
        let n = self.len();
        let mut best: Option<Rat> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.dist(i, j).clone();
                best = Some(match best {
                    None => d,
                    Some(b) => b.min(d),
                });
            }
        }
        best.unwrap_or_else(Rat::zero)
    }

    /// Number of points within distance `radius` of point `i` (inclusive).
    pub fn ball_size(&self, i: usize, radius: &Rat) -> usize {
        (0..self.len()).filter(|&j| self.dist(i, j) <= radius).count()
    }

    /// The half-line `{0, 1, ..., n-1}` with `|i - j|` distances, basepoint 0.
    pub fn half_line(n: usize) -> Self {
        let points = (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| crate::numeric::rat_int((i as i64 - j as i64).abs()))
                    .collect()
            })
            .collect();
        FiniteMetricSpace {
            points,
            dist,
            basepoint: Some(0),
        }
    }
}

/// Check the metric axioms exhaustively and report the separation constant
/// plus the ball-count profile for the requested radii.
///
/// Invariant failures are reported in the result, not raised; only shape
/// problems reject before the scan (handled in the constructors).
pub fn validate_metric(space: &FiniteMetricSpace, radii: &[Rat]) -> ValidationReport {
    let n = space.len();
    let mut violation = None;

    'scan: {
        for x in 0..n {
            if !space.dist(x, x).is_zero() {
                violation = Some(MetricViolation::NonzeroDiagonal { x });
                break 'scan;
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if space.dist(x, y) != space.dist(y, x) {
                    violation = Some(MetricViolation::Asymmetric { x, y });
                    break 'scan;
                }
                if space.dist(x, y) <= &Rat::zero() {
                    violation = Some(MetricViolation::NonPositive { x, y });
                    break 'scan;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = space.dist(x, z);
                    let rhs = space.dist(x, y) + space.dist(y, z);
                    if *lhs > rhs {
                        violation = Some(MetricViolation::Triangle { x, y, z });
                        break 'scan;
                    }
                }
            }
        }
    }

    let pass = violation.is_none();
    let separation = if pass { Some(space.separation()) } else { None };
    let ball_profile = if pass {
        radii
            .iter()
            .map(|r| {
                let c = (0..n).map(|i| space.ball_size(i, r)).max().unwrap_or(0);
                (r.clone(), c)
            })
            .collect()
    } else {
        Vec::new()
    };

    ValidationReport {
        pass,
        violation,
        separation,
        ball_profile,
    }
}
