//! Built-in metrics with closed-form curvature where one exists.

use std::collections::BTreeMap;

use nalgebra::Matrix3;
use serde::Serialize;

use crate::curvature::FrameCurvature;
use crate::dsl::{parse_metric, MetricSpec, Orientation};
use crate::error::{Error, Result};
use crate::lambda2::{blocks_from_frame_curvature, orientation_flip, CurvatureBlocks};

pub const NAMES: [&str; 5] = ["flat", "sphere4", "s2xs2", "cp2_fs", "perturbed_flat"];

/// Scalar curvature of the Fubini–Study chart below, measured by this engine
/// and frozen.
pub const CP2_FS_SCALAR: f64 = 24.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalogParams {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub eps: f64,
    pub orientation: Orientation,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            r: 1.0,
            r1: 1.0,
            r2: 1.0,
            eps: 0.01,
            orientation: Orientation::Standard,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Oracle {
    /// Space form with sectional curvature `K`.
    ConstantCurvature(f64),
    /// `S²×S²` with Gauss curvatures `K1`, `K2`, product-adapted frame.
    ProductSpheres(f64, f64),
}

impl Oracle {
    pub fn frame_curvature(&self) -> FrameCurvature {
        match *self {
            Oracle::ConstantCurvature(k) => constant_curvature_oracle(k),
            Oracle::ProductSpheres(k1, k2) => product_sphere_oracle(k1, k2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectedFlags {
    pub asd: bool,
    pub einstein: bool,
    pub constant_s: bool,
    pub s: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub dsl: String,
    pub spec: MetricSpec,
    pub oracle: Option<Oracle>,
    pub expected: ExpectedFlags,
}

impl CatalogEntry {
    /// Oracle blocks in the oracle's own frame, respecting orientation.
    pub fn oracle_blocks(&self) -> Option<CurvatureBlocks> {
        let r = self.oracle?.frame_curvature();
        let b = blocks_from_frame_curvature(&r).ok()?;
        Some(match self.spec.orientation() {
            Orientation::Standard => b,
            Orientation::Reversed => orientation_flip(&b),
        })
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `R_αβγδ = K(δ_αγ δ_βδ − δ_αδ δ_βγ)`.
pub fn constant_curvature_oracle(k: f64) -> FrameCurvature {
    FrameCurvature::from_fn(|a, b, c, d| k * (delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c)))
}

/// Only `R_1212 = K1` and `R_3434 = K2` up to symmetries.
pub fn product_sphere_oracle(k1: f64, k2: f64) -> FrameCurvature {
    FrameCurvature::from_fn(|a, b, c, d| {
        let factor = a / 2;
        if b / 2 != factor || c / 2 != factor || d / 2 != factor {
            return 0.0;
        }
        let k = if factor == 0 { k1 } else { k2 };
        k * (delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c))
    })
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: name.into(),
            reason: format!("must be a positive finite number, got {v}"),
        })
    }
}

fn sphere4_dsl(r: f64) -> String {
    let conf = "(2*r^2/(r^2 + x1^2 + x2^2 + x3^2 + x4^2))^2";
    format!(
        "param r = {r}\ndomain x1 = ({lo}, {r})\ndomain x2 = ({lo}, {r})\n\
         domain x3 = ({lo}, {r})\ndomain x4 = ({lo}, {r})\n\
         g11 = {conf}\ng22 = {conf}\ng33 = {conf}\ng44 = {conf}\n",
        lo = -r
    )
}

fn s2xs2_dsl(r1: f64, r2: f64) -> String {
    let (lo, hi) = (0.3, std::f64::consts::PI - 0.3);
    let pi = std::f64::consts::PI;
    format!(
        "param r1 = {r1}\nparam r2 = {r2}\n\
         domain x1 = ({lo}, {hi})\ndomain x2 = ({mpi}, {pi})\n\
         domain x3 = ({lo}, {hi})\ndomain x4 = ({mpi}, {pi})\n\
         g11 = r1^2\ng22 = r1^2*sin(x1)^2\ng33 = r2^2\ng44 = r2^2*sin(x3)^2\n",
        mpi = -pi
    )
}

const CP2_DSL: &str = "\
# Fubini-Study metric on the affine chart z1 = x1 + i x2, z2 = x3 + i x4
g11 = (1 + x3^2 + x4^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g22 = (1 + x3^2 + x4^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g33 = (1 + x1^2 + x2^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g44 = (1 + x1^2 + x2^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g13 = (-x1*x3 - x2*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g14 = (x2*x3 - x1*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g23 = (x1*x4 - x2*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
g24 = (-x1*x3 - x2*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2
";

fn perturbed_dsl(eps: f64) -> String {
    format!(
        "param eps = {eps}\n\
         g11 = 1 + eps*x2^2\ng12 = eps*x1*x3\ng22 = 1\ng33 = 1\ng34 = eps*x2*x4\ng44 = 1\n"
    )
}

pub fn get(name: &str, params: &CatalogParams) -> Result<CatalogEntry> {
    let mut parameters = BTreeMap::new();
    let (dsl, oracle, expected) = match name {
        "flat" => (
            "g11 = 1\ng22 = 1\ng33 = 1\ng44 = 1\n".to_string(),
            Some(Oracle::ConstantCurvature(0.0)),
            ExpectedFlags {
                asd: true,
                einstein: true,
                constant_s: true,
                s: Some(0.0),
            },
        ),
        "sphere4" => {
            check_positive("r", params.r)?;
            parameters.insert("r".into(), params.r);
            let k = 1.0 / (params.r * params.r);
            (
                sphere4_dsl(params.r),
                Some(Oracle::ConstantCurvature(k)),
                ExpectedFlags {
                    asd: true,
                    einstein: true,
                    constant_s: true,
                    s: Some(12.0 * k),
                },
            )
        }
        "s2xs2" => {
            check_positive("r1", params.r1)?;
            check_positive("r2", params.r2)?;
            parameters.insert("r1".into(), params.r1);
            parameters.insert("r2".into(), params.r2);
            let k1 = 1.0 / (params.r1 * params.r1);
            let k2 = 1.0 / (params.r2 * params.r2);
            (
                s2xs2_dsl(params.r1, params.r2),
                Some(Oracle::ProductSpheres(k1, k2)),
                ExpectedFlags {
                    asd: false,
                    einstein: k1 == k2,
                    constant_s: true,
                    s: Some(2.0 * (k1 + k2)),
                },
            )
        }
        "cp2_fs" => (
            CP2_DSL.to_string(),
            None,
            ExpectedFlags {
                asd: params.orientation == Orientation::Reversed,
                einstein: true,
                constant_s: true,
                s: Some(CP2_FS_SCALAR),
            },
        ),
        "perturbed_flat" => {
            if !params.eps.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "eps".into(),
                    reason: "must be finite".into(),
                });
            }
            parameters.insert("eps".into(), params.eps);
            (
                perturbed_dsl(params.eps),
                None,
                ExpectedFlags {
                    asd: params.eps == 0.0,
                    einstein: params.eps == 0.0,
                    constant_s: params.eps == 0.0,
                    s: None,
                },
            )
        }
        other => return Err(Error::UnknownManifold(other.into())),
    };
    let spec = parse_metric(&dsl)?.with_orientation(params.orientation);
    Ok(CatalogEntry {
        name: name.into(),
        parameters,
        dsl,
        spec,
        oracle,
        expected,
    })
}

/// Sorted eigenvalues of `A`, `C` and singular values of `B`.
pub fn block_invariants(b: &CurvatureBlocks) -> [f64; 9] {
    let eig = |m: &Matrix3<f64>| {
        let mut v: Vec<f64> = nalgebra::SymmetricEigen::new((m + m.transpose()) * 0.5)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let mut sv: Vec<f64> = b.b.singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    let a = eig(&b.a);
    let c = eig(&b.c);
    [a[0], a[1], a[2], sv[0], sv[1], sv[2], c[0], c[1], c[2]]
}
