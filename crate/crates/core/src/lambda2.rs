//! Self-dual / anti-self-dual splitting of 2-forms and the curvature blocks.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Matrix4, Matrix6};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::curvature::FrameCurvature;
use crate::error::{Error, Result};

/// Antisymmetric 4x4 arrays representing 2-forms in a frame.
pub type TwoForm = Matrix4<f64>;

/// `E_m^±`, normalized so the six forms are orthonormal.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda2Basis {
    pub plus: [TwoForm; 3],
    pub minus: [TwoForm; 3],
}

const PAIRS: [((usize, usize), (usize, usize)); 3] = [((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))];

fn basis_half(sign: f64) -> [TwoForm; 3] {
    PAIRS.map(|((p, q), (r, s))| {
        let mut m = TwoForm::zeros();
        m[(p, q)] = FRAC_1_SQRT_2;
        m[(q, p)] = -FRAC_1_SQRT_2;
        m[(r, s)] += sign * FRAC_1_SQRT_2;
        m[(s, r)] -= sign * FRAC_1_SQRT_2;
        m
    })
}

pub fn basis() -> Lambda2Basis {
    Lambda2Basis {
        plus: basis_half(1.0),
        minus: basis_half(-1.0),
    }
}

/// `⟨φ, ψ⟩ = ½ φ_αβ ψ_αβ`.
pub fn inner(phi: &TwoForm, psi: &TwoForm) -> f64 {
    0.5 * phi.component_mul(psi).sum()
}

fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut v = idx;
    let mut sign = 1.0;
    for i in 0..4 {
        for j in 0..3 - i {
            if v[j] == v[j + 1] {
                return 0.0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v == [0, 1, 2, 3] {
        sign
    } else {
        0.0
    }
}

/// `(⋆φ)_αβ = ½ ε_αβγδ φ_γδ`.
pub fn hodge_star(phi: &TwoForm) -> TwoForm {
    TwoForm::from_fn(|a, b| {
        let mut v = 0.0;
        for c in 0..4 {
            for d in 0..4 {
                v += levi_civita([a, b, c, d]) * phi[(c, d)];
            }
        }
        0.5 * v
    })
}

/// `(R̂φ)_αβ = ½ R_αβγδ φ_γδ`.
pub fn apply_curvature(r: &FrameCurvature, phi: &TwoForm) -> TwoForm {
    TwoForm::from_fn(|a, b| {
        let mut v = 0.0;
        for c in 0..4 {
            for d in 0..4 {
                v += r.get(a, b, c, d) * phi[(c, d)];
            }
        }
        0.5 * v
    })
}

/// `a·φ = a φ aᵀ`, the action of a frame rotation on 2-form components.
pub fn act(a: &Matrix4<f64>, phi: &TwoForm) -> TwoForm {
    a * phi * a.transpose()
}

/// Curvature operator on `Λ⁺ ⊕ Λ⁻` as `[[A, Bᵀ], [B, C]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureBlocks {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub c: Matrix3<f64>,
}

impl CurvatureBlocks {
    pub fn zero() -> Self {
        Self {
            a: Matrix3::zeros(),
            b: Matrix3::zeros(),
            c: Matrix3::zeros(),
        }
    }

    pub fn new(a: Matrix3<f64>, b: Matrix3<f64>, c: Matrix3<f64>) -> Self {
        Self { a, b, c }
    }

    /// `s = 4 tr A`.
    pub fn scalar(&self) -> f64 {
        4.0 * self.a.trace()
    }

    pub fn w_plus(&self) -> Matrix3<f64> {
        self.a - Matrix3::identity() * (self.scalar() / 12.0)
    }

    pub fn w_minus(&self) -> Matrix3<f64> {
        self.c - Matrix3::identity() * (self.scalar() / 12.0)
    }

    /// `‖W⁺‖_F`.
    pub fn asd_defect(&self) -> f64 {
        self.w_plus().norm()
    }

    pub fn w_minus_norm(&self) -> f64 {
        self.w_minus().norm()
    }

    /// `‖B‖_F`.
    pub fn einstein_defect(&self) -> f64 {
        self.b.norm()
    }

    pub fn operator(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.a);
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&self.b.transpose());
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&self.b);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.c);
        m
    }

    /// Frobenius norm of the full operator; the scale for zero tests.
    pub fn norm(&self) -> f64 {
        self.operator().norm()
    }

    /// A defect counts as zero below `1e-8 · max(1, ‖R‖)`.
    pub fn zero_tolerance(&self) -> f64 {
        1e-8 * self.norm().max(1.0)
    }

    pub fn is_asd(&self) -> bool {
        self.asd_defect() < self.zero_tolerance()
    }

    pub fn is_einstein(&self) -> bool {
        self.einstein_defect() < self.zero_tolerance()
    }
}

pub fn blocks_from_frame_curvature(r: &FrameCurvature) -> Result<CurvatureBlocks> {
    let tol = 1e-9 * r.norm().max(1.0);
    let defect = r.symmetry_defect().max(r.bianchi_defect());
    if defect > tol {
        return Err(Error::SymmetryViolation { defect });
    }
    let e = basis();
    let img_p = e.plus.map(|phi| apply_curvature(r, &phi));
    let img_m = e.minus.map(|phi| apply_curvature(r, &phi));
    let a = Matrix3::from_fn(|m, n| inner(&e.plus[m], &img_p[n]));
    let b = Matrix3::from_fn(|m, n| inner(&e.minus[m], &img_p[n]));
    let c = Matrix3::from_fn(|m, n| inner(&e.minus[m], &img_m[n]));
    let asym = (a - a.transpose()).amax().max((c - c.transpose()).amax());
    if asym > tol {
        return Err(Error::SymmetryViolation { defect: asym });
    }
    Ok(CurvatureBlocks { a, b, c })
}

/// Inverse of the block extraction: `R_αβγδ = Σ (E_m)_αβ M_mn (E_n)_γδ`.
pub fn frame_curvature_from_blocks(blocks: &CurvatureBlocks) -> FrameCurvature {
    let e = basis();
    let forms: Vec<&TwoForm> = e.plus.iter().chain(e.minus.iter()).collect();
    let m = blocks.operator();
    FrameCurvature::from_fn(|a, b, c, d| {
        let mut v = 0.0;
        for (i, fi) in forms.iter().enumerate() {
            let x = fi[(a, b)];
            if x == 0.0 {
                continue;
            }
            for (j, fj) in forms.iter().enumerate() {
                v += x * m[(i, j)] * fj[(c, d)];
            }
        }
        v
    })
}

/// Swap the roles of `Λ⁺` and `Λ⁻`.
pub fn orientation_flip(blocks: &CurvatureBlocks) -> CurvatureBlocks {
    CurvatureBlocks {
        a: blocks.c,
        b: blocks.b.transpose(),
        c: blocks.a,
    }
}

pub fn so4_defect(a: &Matrix4<f64>) -> f64 {
    (a.transpose() * a - Matrix4::identity())
        .amax()
        .max((a.determinant() - 1.0).abs())
}

/// Image of `a ∈ SO(4)` under the double cover onto `SO(3) × SO(3)`.
pub fn so4_split(a: &Matrix4<f64>) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
    let defect = so4_defect(a);
    if defect > 1e-10 {
        return Err(Error::NotSpecialOrthogonal { defect });
    }
    let e = basis();
    let ap = Matrix3::from_fn(|m, n| inner(&e.plus[m], &act(a, &e.plus[n])));
    let am = Matrix3::from_fn(|m, n| inner(&e.minus[m], &act(a, &e.minus[n])));
    Ok((ap, am))
}

/// Blocks seen from the rotated frame `e·a`.
pub fn rotate_blocks(blocks: &CurvatureBlocks, a: &Matrix4<f64>) -> Result<CurvatureBlocks> {
    let (ap, am) = so4_split(a)?;
    Ok(CurvatureBlocks {
        a: ap.transpose() * blocks.a * ap,
        b: am.transpose() * blocks.b * ap,
        c: am.transpose() * blocks.c * am,
    })
}

/// Haar-distributed rotation via QR of a Gaussian matrix.
pub fn random_so4<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let m = Matrix4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = m.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..4 {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(3).neg_mut();
    }
    q
}

/// Rotation by `angle` in the `(i, j)` coordinate plane.
pub fn plane_rotation(i: usize, j: usize, angle: f64) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    let (s, c) = angle.sin_cos();
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m
}

/// Random algebraic curvature operator: symmetric `A`, `C` with equal trace
/// and arbitrary `B`, entries of order `scale`.
pub fn random_blocks<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> CurvatureBlocks {
    let mut g = || scale * rng.sample::<f64, _>(StandardNormal);
    let a = Matrix3::from_fn(|_, _| g());
    let a = (a + a.transpose()) * 0.5;
    let c = Matrix3::from_fn(|_, _| g());
    let mut c = (c + c.transpose()) * 0.5;
    let b = Matrix3::from_fn(|_, _| g());
    let shift = (a.trace() - c.trace()) / 3.0;
    c += Matrix3::identity() * shift;
    CurvatureBlocks { a, b, c }
}

/// Random anti-self-dual blocks (`A` scalar) with the given scalar curvature.
pub fn random_asd_blocks<R: Rng + ?Sized>(rng: &mut R, s: f64, scale: f64) -> CurvatureBlocks {
    let mut blocks = random_blocks(rng, scale);
    blocks.a = Matrix3::identity() * (s / 12.0);
    let w = blocks.c - Matrix3::identity() * (blocks.c.trace() / 3.0);
    blocks.c = w + Matrix3::identity() * (s / 12.0);
    blocks
}
