//! Exact-arithmetic finite metric spaces, glued metrics with min-plus
//! composition, derived metrics, and coarse-order certificates.

pub mod control;
pub mod family;
pub mod glue;
pub mod space;

pub use control::{
    certify_leq, control_compare, control_compare_stable, CompareVerdict, ControlFunction,
};
pub use family::SpaceFamily;
pub use glue::{
    compose, derived_metrics, glue, smallest_metric, smallest_metric_default, Composition,
    DerivedMetrics, GluedMetric,
};
pub use space::{validate_metric, FiniteMetricSpace, MetricViolation, ValidationReport};
