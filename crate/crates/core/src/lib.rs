//! Curvature of Riemannian 4-manifolds given as explicit metric charts, and
//! the metric conditions of their twistor spaces.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::suspicious_arithmetic_impl)]

pub mod error;
pub mod dsl;
pub mod curvature;
pub mod lambda2;
pub mod forms;
pub mod twistor;
pub mod chern;
pub mod catalog;
pub mod oracle;

pub use error::{Error, Result};

pub use catalog::{CatalogEntry, CatalogParams};
pub use chern::{ChernData, Definiteness};
pub use curvature::{analyze_point, FrameCurvature, OrthonormalFrame, PointGeometry};
pub use dsl::{parse_metric, MetricSpec, Orientation};
pub use forms::NumericForm;
pub use lambda2::CurvatureBlocks;
pub use oracle::{FiberChart, OracleOptions, TwistorChartPoint};
pub use twistor::{LambdaSet, Sign, Structure, TwistorDefects};
pub use nalgebra::{Matrix3, Matrix4};
