//! Metric description language: expression trees, parsing, and exact
//! second-order evaluation of the metric components.

mod expr;
mod jet;
mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub use expr::{BinOp, Expr, Func};
pub use jet::{Jet2, Real};
pub use parse::parse_metric;

use crate::error::{Error, Result};

/// Smallest eigenvalue below which a metric counts as degenerate.
pub const MIN_EIGENVALUE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Standard,
    Reversed,
}

/// Metric jets at a point: `jets[i][j]` carries `g_ij` with its first and
/// second partial derivatives.
pub type MetricJets = [[Jet2; 4]; 4];

/// A symmetric 4x4 field of component expressions over a coordinate box.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    /// Upper triangle in row-major order: g11 g12 g13 g14 g22 ... g44.
    entries: Vec<Expr>,
    parameters: BTreeMap<String, f64>,
    domain: [(f64, f64); 4],
    orientation: Orientation,
}

const fn upper(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * 4 - i * (i + 1) / 2 + j
}

impl MetricSpec {
    pub const DEFAULT_INTERVAL: (f64, f64) = (-1.0, 1.0);

    pub fn from_upper(
        entries: Vec<Expr>,
        parameters: BTreeMap<String, f64>,
        domain: [(f64, f64); 4],
        orientation: Orientation,
    ) -> Result<Self> {
        if entries.len() != 10 {
            return Err(Error::InvalidParameter {
                name: "entries".into(),
                reason: format!("expected 10 upper-triangle entries, got {}", entries.len()),
            });
        }
        let mut names = Vec::new();
        for e in &entries {
            e.parameters(&mut names);
        }
        if let Some(missing) = names.iter().find(|n| !parameters.contains_key(*n)) {
            return Err(Error::UnknownIdentifier {
                name: missing.clone(),
                line: 0,
                column: 0,
            });
        }
        Ok(Self {
            entries,
            parameters,
            domain,
            orientation,
        })
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.entries[upper(i, j)]
    }

    pub fn parameters(&self) -> &BTreeMap<String, f64> {
        &self.parameters
    }

    pub fn domain(&self) -> &[(f64, f64); 4] {
        &self.domain
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_domain(mut self, domain: [(f64, f64); 4]) -> Self {
        self.domain = domain;
        self
    }

    /// Rebind a declared parameter.
    pub fn with_parameter(mut self, name: &str, value: f64) -> Result<Self> {
        match self.parameters.get_mut(name) {
            Some(v) => {
                *v = value;
                Ok(self)
            }
            None => Err(Error::InvalidParameter {
                name: name.into(),
                reason: "not declared in this metric".into(),
            }),
        }
    }

    pub fn contains(&self, point: &[f64; 4]) -> bool {
        point
            .iter()
            .zip(self.domain.iter())
            .all(|(x, (lo, hi))| x > lo && x < hi)
    }

    /// Seeded uniform draw from the domain box.
    pub fn sample_points<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<[f64; 4]> {
        self.sample_scaled(n, 1.0, rng)
    }

    /// Like [`Self::sample_points`] but from the box shrunk about its
    /// centre by `fraction`.
    pub fn sample_scaled<R: rand::Rng + ?Sized>(&self, n: usize, fraction: f64, rng: &mut R) -> Vec<[f64; 4]> {
        (0..n)
            .map(|_| {
                std::array::from_fn(|i| {
                    let (lo, hi) = self.domain[i];
                    let mid = 0.5 * (lo + hi);
                    let half = 0.5 * (hi - lo) * fraction;
                    loop {
                        let v = rng.random_range(mid - half..mid + half);
                        if v > lo && v < hi {
                            break v;
                        }
                    }
                })
            })
            .collect()
    }

    /// Render back into the description language.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for (name, v) in &self.parameters {
            let _ = writeln!(out, "param {name} = {v}");
        }
        for (k, (lo, hi)) in self.domain.iter().enumerate() {
            if (*lo, *hi) != Self::DEFAULT_INTERVAL {
                let _ = writeln!(out, "domain x{} = ({lo}, {hi})", k + 1);
            }
        }
        for i in 0..4 {
            for j in i..4 {
                let e = self.component(i, j);
                if i == j || !e.is_zero_const() {
                    let _ = writeln!(out, "g{}{} = {e}", i + 1, j + 1);
                }
            }
        }
        out
    }

    pub fn eval_values(&self, point: &[f64; 4]) -> Result<Matrix4<f64>> {
        let mut g = Matrix4::zeros();
        for i in 0..4 {
            for j in i..4 {
                let v: f64 = self.component(i, j).eval(point, &self.parameters)?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }
}

/// Exact value, gradient and Hessian of every metric component at `point`.
pub fn eval_jet2(spec: &MetricSpec, point: &[f64; 4]) -> Result<MetricJets> {
    let mut out = [[Jet2::constant(0.0); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let jet: Jet2 = spec.component(i, j).eval(point, spec.parameters())?;
            out[i][j] = jet;
            out[j][i] = jet;
        }
    }
    Ok(out)
}

pub fn jet_values(jets: &MetricJets) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| jets[i][j].value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleDiagnostic {
    pub point: [f64; 4],
    pub evaluable: bool,
    pub symmetric: bool,
    pub min_eigenvalue: Option<f64>,
    pub positive_definite: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub samples: Vec<SampleDiagnostic>,
    pub pass: bool,
}

impl Diagnostics {
    pub fn first_failure(&self) -> Option<&SampleDiagnostic> {
        self.samples.iter().find(|s| !s.positive_definite)
    }
}

/// Check evaluability, symmetry and positive-definiteness at each sample.
pub fn validate(spec: &MetricSpec, samples: &[[f64; 4]]) -> Diagnostics {
    let samples: Vec<SampleDiagnostic> = samples
        .iter()
        .map(|p| match spec.eval_values(p) {
            Err(e) => SampleDiagnostic {
                point: *p,
                evaluable: false,
                symmetric: false,
                min_eigenvalue: None,
                positive_definite: false,
                error: Some(e.to_string()),
            },
            Ok(g) => {
                let symmetric = (g - g.transpose()).amax() == 0.0;
                let finite = g.iter().all(|v| v.is_finite());
                let min_eig = if finite {
                    Some(SymmetricEigen::new(g).eigenvalues.min())
                } else {
                    None
                };
                let positive_definite = symmetric && min_eig.is_some_and(|m| m > MIN_EIGENVALUE);
                SampleDiagnostic {
                    point: *p,
                    evaluable: finite,
                    symmetric,
                    min_eigenvalue: min_eig,
                    positive_definite,
                    error: (!finite).then(|| "non-finite metric value".to_string()),
                }
            }
        })
        .collect();
    let pass = !samples.is_empty() && samples.iter().all(|s| s.positive_definite);
    Diagnostics { samples, pass }
}
