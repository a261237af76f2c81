//! First Chern form data of the natural unitary connection on the twistor
//! space.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use serde::Serialize;

use crate::curvature::FrameCurvature;
use crate::lambda2::CurvatureBlocks;

/// `(W⁺ + s/12)² − Ric₀*Ric₀ = A·A − Bᵀ·B`.
pub fn fine_panov_operator(blocks: &CurvatureBlocks) -> Matrix3<f64> {
    blocks.a * blocks.a - blocks.b.transpose() * blocks.b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Semidefinite,
    Indefinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DefinitenessClass {
    pub class: Definiteness,
    /// Ascending.
    pub eigenvalues: [f64; 3],
}

pub fn classify_definiteness(d: &Matrix3<f64>) -> DefinitenessClass {
    let sym = (d + d.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let eigenvalues = [ev[0], ev[1], ev[2]];
    let tau = 1e-8 * ev.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let pos = ev.iter().filter(|v| **v > tau).count();
    let neg = ev.iter().filter(|v| **v < -tau).count();
    let class = match (pos, neg) {
        (3, 0) => Definiteness::PositiveDefinite,
        (0, 3) => Definiteness::NegativeDefinite,
        (p, n) if p > 0 && n > 0 => Definiteness::Indefinite,
        _ => Definiteness::Semidefinite,
    };
    DefinitenessClass { class, eigenvalues }
}

/// `√(A12² + A13²)`, the obstruction to the Chern form being of type (1,1).
pub fn one_one_defect(blocks: &CurvatureBlocks) -> f64 {
    blocks.a[(0, 1)].hypot(blocks.a[(0, 2)])
}

/// `F_γδ = R_12γδ + R_34γδ`, the components of `Ω¹₂ + Ω³₄`.
pub fn chern_curvature(r: &FrameCurvature) -> [[f64; 4]; 4] {
    std::array::from_fn(|c| std::array::from_fn(|d| r.get(0, 1, c, d) + r.get(2, 3, c, d)))
}

/// Coefficient of `θ1∧θ2∧θ3∧θ4` in `(Ω¹₂ + Ω³₄)∧(Ω¹₂ + Ω³₄)`.
pub fn wedge_square_coeff(r: &FrameCurvature) -> f64 {
    let f = chern_curvature(r);
    2.0 * (f[0][1] * f[2][3] - f[0][2] * f[1][3] + f[0][3] * f[1][2])
}

/// Components of the first Chern forms on the co-frame `θ1..θ6`. Horizontal
/// entries are indexed by pairs `γ < δ` of base directions; the fiber entry
/// multiplies `θ5∧θ6`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernTrace {
    /// `(1/2π) F_γδ` for `γ < δ`, ordered 12, 13, 14, 23, 24, 34.
    pub horizontal: [f64; 6],
    /// `4/2π`.
    pub fiber: f64,
    /// `c1(𝓗, 𝕁₊) = c1(𝒱, 𝕁₊)`: horizontal entries then fiber.
    pub c1_vertical_plus: [f64; 7],
    pub c1_horizontal_plus: [f64; 7],
    /// `c1(Z, 𝕁₊) = 2 c1(𝒱, 𝕁₊)`.
    pub c1_total_plus: [f64; 7],
    pub c1_vertical_minus: [f64; 7],
    pub c1_horizontal_minus: [f64; 7],
    /// Identically zero.
    pub c1_total_minus: [f64; 7],
}

pub const PAIR_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl ChernTrace {
    /// Largest violation of the relations between the bundle Chern forms.
    pub fn relation_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..7 {
            worst = worst
                .max((self.c1_vertical_plus[k] - self.c1_horizontal_plus[k]).abs())
                .max((self.c1_total_plus[k] - 2.0 * self.c1_vertical_plus[k]).abs())
                .max((self.c1_horizontal_minus[k] + self.c1_vertical_minus[k]).abs())
                .max(self.c1_total_minus[k].abs());
        }
        worst
    }
}

pub fn connection_curvature_trace(r: &FrameCurvature) -> ChernTrace {
    let f = chern_curvature(r);
    let horizontal = PAIR_ORDER.map(|(c, d)| f[c][d] / (2.0 * PI));
    let fiber = 4.0 / (2.0 * PI);
    let mut v = [0.0; 7];
    v[..6].copy_from_slice(&horizontal);
    v[6] = fiber;
    let twice = v.map(|x| 2.0 * x);
    let neg = v.map(|x| -x);
    let total_minus: [f64; 7] = std::array::from_fn(|k| v[k] + neg[k]);
    ChernTrace {
        horizontal,
        fiber,
        c1_vertical_plus: v,
        c1_horizontal_plus: v,
        c1_total_plus: twice,
        c1_vertical_minus: neg,
        c1_horizontal_minus: v,
        c1_total_minus: total_minus,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernData {
    pub d: [[f64; 3]; 3],
    pub class: DefinitenessClass,
    pub one_one_defect: f64,
    pub wedge_square_coeff: f64,
    pub c1_fiber_coeff: f64,
}

pub fn chern_data(blocks: &CurvatureBlocks, r: &FrameCurvature) -> ChernData {
    let d = fine_panov_operator(blocks);
    ChernData {
        d: std::array::from_fn(|i| std::array::from_fn(|j| d[(i, j)])),
        class: classify_definiteness(&d),
        one_one_defect: one_one_defect(blocks),
        wedge_square_coeff: wedge_square_coeff(r),
        c1_fiber_coeff: 4.0 / (2.0 * PI),
    }
}
