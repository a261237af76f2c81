//! Fixtures shared by the benchmarks.

use twistorlab_core::catalog::{self, CatalogParams};
use twistorlab_core::{MetricSpec, TwistorChartPoint};

pub fn spec(name: &str) -> MetricSpec {
    catalog::get(name, &CatalogParams::default())
        .expect("catalog entry")
        .spec
}

/// Deterministic interior base point of the entry's domain.
pub fn base_point(spec: &MetricSpec) -> [f64; 4] {
    std::array::from_fn(|i| {
        let (lo, hi) = spec.domain()[i];
        lo + (hi - lo) * (0.37 + 0.05 * i as f64)
    })
}

pub fn chart_point(spec: &MetricSpec) -> TwistorChartPoint {
    TwistorChartPoint::new(base_point(spec), [0.3, -0.4])
}
