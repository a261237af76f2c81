use std::path::PathBuf;

use serde::Serialize;
use twistorlab_core::catalog::{self, CatalogParams};
use twistorlab_core::dsl::validate;
use twistorlab_core::{parse_metric, MetricSpec, Orientation};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSource {
    Catalog { name: String, params: CatalogParams },
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TGrid {
    Single { t: f64 },
    Range { min: f64, max: f64, steps: usize },
}

impl TGrid {
    /// Grid values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            TGrid::Single { t } => vec![t],
            TGrid::Range { min, max, steps } => {
                if steps == 1 {
                    return vec![min];
                }
                let step = (max - min) / (steps - 1) as f64;
                (0..steps)
                    .map(|i| if i + 1 == steps { max } else { min + step * i as f64 })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Which of `d𝕂₊`, `d𝕂₋` the chart oracle checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleSigns {
    #[default]
    Plus,
    Minus,
    Both,
}

impl OracleSigns {
    pub fn plus(self) -> bool {
        self != OracleSigns::Minus
    }

    pub fn minus(self) -> bool {
        self != OracleSigns::Plus
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Analyses {
    pub blocks: bool,
    pub twistor: bool,
    pub chern: bool,
}

impl Default for Analyses {
    fn default() -> Self {
        Self {
            blocks: true,
            twistor: true,
            chern: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub source: MetricSource,
    pub orientation: Orientation,
    pub t: TGrid,
    pub points: usize,
    pub seed: u64,
    /// Relative zero tolerance for the classification flags.
    pub tol: f64,
    /// Base stencil step of the chart oracle.
    pub h: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub analyses: Analyses,
    pub signs: OracleSigns,
    pub corrupt_frame: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            source: MetricSource::Catalog {
                name: "flat".into(),
                params: CatalogParams::default(),
            },
            orientation: Orientation::Standard,
            t: TGrid::Single { t: 1.0 },
            points: 20,
            seed: 0,
            tol: 1e-8,
            h: 1e-3,
            format: Format::Json,
            out: None,
            analyses: Analyses::default(),
            signs: OracleSigns::default(),
            corrupt_frame: None,
        }
    }
}

/// What the report records about the run that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub manifold: Option<String>,
    pub metric_file: Option<String>,
    pub r: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub eps: Option<f64>,
    pub orientation: Orientation,
    pub t: TGrid,
    pub points: usize,
    pub seed: u64,
    pub format: Format,
    pub analyses: Analyses,
    pub signs: OracleSigns,
}

impl RunConfig {
    pub fn check(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::validation(msg));
        for t in self.t.values() {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("t must be positive, got {t}"));
            }
        }
        if let TGrid::Range { min, max, steps } = self.t {
            if steps == 0 || min > max {
                return bad(format!("invalid t grid [{min}, {max}] with {steps} steps"));
            }
        }
        if self.points == 0 {
            return bad("points must be at least 1".into());
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad(format!("tolerance must be positive, got {}", self.tol));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return bad(format!("h must be positive, got {}", self.h));
        }
        Ok(())
    }

    pub fn load_spec(&self) -> Result<MetricSpec, CliError> {
        match &self.source {
            MetricSource::Catalog { name, params } => {
                let params = CatalogParams {
                    orientation: self.orientation,
                    ..*params
                };
                Ok(catalog::get(name, &params)?.spec)
            }
            MetricSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
                Ok(parse_metric(&text)?.with_orientation(self.orientation))
            }
        }
    }

    /// Load the metric and draw the sample points, rejecting the metric at
    /// the first point where it fails to evaluate or is not positive definite.
    pub fn spec_and_samples(&self) -> Result<(MetricSpec, Vec<[f64; 4]>), CliError> {
        self.check()?;
        let spec = self.load_spec()?;
        let samples = spec.sample_points(self.points, &mut self.rng());
        let diag = validate(&spec, &samples);
        if let Some(f) = diag.first_failure() {
            let reason = f.error.clone().unwrap_or_else(|| {
                if !f.symmetric {
                    "metric is not symmetric".into()
                } else {
                    format!("metric is not positive definite (smallest eigenvalue {:?})", f.min_eigenvalue)
                }
            });
            return Err(CliError::validation(reason).at(f.point.to_vec()));
        }
        Ok((spec, samples))
    }

    pub fn rng(&self) -> rand_chacha::ChaCha8Rng {
        use rand_chacha::rand_core::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn echo(&self) -> ConfigEcho {
        let (manifold, metric_file, params) = match &self.source {
            MetricSource::Catalog { name, params } => (Some(name.clone()), None, Some((name.as_str(), params))),
            MetricSource::File(p) => (None, Some(p.display().to_string()), None),
        };
        let pick = |want: &str, v: fn(&CatalogParams) -> f64| {
            params.and_then(|(name, p)| (name == want).then(|| v(p)))
        };
        ConfigEcho {
            manifold,
            metric_file,
            r: pick("sphere4", |p| p.r),
            r1: pick("s2xs2", |p| p.r1),
            r2: pick("s2xs2", |p| p.r2),
            eps: pick("perturbed_flat", |p| p.eps),
            orientation: self.orientation,
            t: self.t,
            points: self.points,
            seed: self.seed,
            format: self.format,
            analyses: self.analyses,
            signs: self.signs,
        }
    }
}
