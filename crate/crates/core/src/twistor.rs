//! Metric conditions on the twistor space expressed through the curvature
//! coefficients `λ` of `ρ(Ω)` in the complex co-frame.
//!
//! Complex forms here live on the co-basis `(φ1, φ2, φ3, φ̄1, φ̄2, φ̄3)`,
//! indices `0..6`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::curvature::FrameCurvature;
use crate::forms::{mask_indices, NumericForm};
use crate::lambda2::{random_blocks, CurvatureBlocks};
use crate::error::{Error, Result};

pub const P1: usize = 0;
pub const P2: usize = 1;
pub const P3: usize = 2;
pub const Q1: usize = 3;
pub const Q2: usize = 4;
pub const Q3: usize = 5;

const DIM: usize = 6;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Which almost complex structure decides the form types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Structure {
    /// `φ1, φ2, φ3` are (1,0).
    JPlus,
    /// `φ1, φ2, φ̄3` are (1,0).
    JMinus,
}

impl Structure {
    pub fn holomorphic_mask(self) -> usize {
        match self {
            Structure::JPlus => (1 << P1) | (1 << P2) | (1 << P3),
            Structure::JMinus => (1 << P1) | (1 << P2) | (1 << Q3),
        }
    }

    pub fn for_sign(sign: Sign) -> Self {
        match sign {
            Sign::Plus => Structure::JPlus,
            Sign::Minus => Structure::JMinus,
        }
    }
}

pub fn form_type(mask: usize, j: Structure) -> (usize, usize) {
    let p = (mask & j.holomorphic_mask()).count_ones() as usize;
    (p, mask.count_ones() as usize - p)
}

/// The `(p, q)` component of a form on the φ co-basis.
pub fn type_component(form: &NumericForm, j: Structure, p: usize, q: usize) -> NumericForm {
    form.filter(|m| form_type(m, j) == (p, q))
}

/// Curvature coefficients of `ρ(Ω)` and their derived combinations at
/// metric parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaSet {
    pub t: f64,
    pub l12: f64,
    pub l1b2b: Complex64,
    pub l11b: Complex64,
    pub l22b: Complex64,
    pub l1b2: Complex64,
    pub l12b: Complex64,
    pub big_lambda1: f64,
    pub big_lambda2: Complex64,
    pub big_lambda3: Complex64,
}

/// Entry names recovered by [`LambdaSet::reconstruct`], 1-based.
pub const RECONSTRUCTED: [&str; 11] = [
    "A12", "A13", "A22", "A23", "A33", "B12", "B13", "B22", "B23", "B32", "B33",
];

impl LambdaSet {
    /// `|λ11̄|² + |λ22̄|² + |λ1̄2|² + |λ12̄|²`.
    pub fn mixed_norm_sq(&self) -> f64 {
        self.l11b.norm_sqr() + self.l22b.norm_sqr() + self.l1b2.norm_sqr() + self.l12b.norm_sqr()
    }

    pub fn with_t(&self, t: f64) -> Self {
        let mut out = *self;
        out.t = t;
        let t2 = t * t;
        out.big_lambda1 = self.l12 * (1.0 - 2.0 * t2 * self.l12) - 2.0 * t2 * self.mixed_norm_sq();
        let old = self.t * self.t;
        if old != 0.0 {
            out.big_lambda2 = self.big_lambda2 * (t2 / old);
            out.big_lambda3 = self.big_lambda3 * (t2 / old);
        }
        out
    }

    /// Recover the block entries listed in [`RECONSTRUCTED`].
    pub fn reconstruct(&self) -> [f64; 11] {
        let sum = self.l11b + self.l22b;
        let diff = self.l11b - self.l22b;
        let a12 = 2.0 * sum.im;
        let a13 = -2.0 * sum.re;
        let a22_minus_a33 = 4.0 * self.l1b2b.re;
        let a22_plus_a33 = 4.0 * self.l12;
        let a23 = 2.0 * self.l1b2b.im;
        let b12 = 2.0 * diff.im;
        let b13 = -2.0 * diff.re;
        let b22 = 2.0 * (self.l1b2.re + self.l12b.re);
        let b33 = 2.0 * (self.l1b2.re - self.l12b.re);
        let b23 = 2.0 * (self.l1b2.im + self.l12b.im);
        let b32 = 2.0 * (self.l12b.im - self.l1b2.im);
        [
            a12,
            a13,
            0.5 * (a22_plus_a33 + a22_minus_a33),
            a23,
            0.5 * (a22_plus_a33 - a22_minus_a33),
            b12,
            b13,
            b22,
            b23,
            b32,
            b33,
        ]
    }

    /// Random coefficients from a random algebraic curvature operator.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, t: f64) -> Self {
        lambda_from_blocks(&random_blocks(rng, 1.0), t)
    }
}

pub fn block_entries(blocks: &CurvatureBlocks) -> [f64; 11] {
    let (a, b) = (&blocks.a, &blocks.b);
    [
        a[(0, 1)],
        a[(0, 2)],
        a[(1, 1)],
        a[(1, 2)],
        a[(2, 2)],
        b[(0, 1)],
        b[(0, 2)],
        b[(1, 1)],
        b[(1, 2)],
        b[(2, 1)],
        b[(2, 2)],
    ]
}

pub fn lambda_from_blocks(blocks: &CurvatureBlocks, t: f64) -> LambdaSet {
    // 0-based views of the 1-based entries
    let a = |i: usize, j: usize| blocks.a[(i - 1, j - 1)];
    let b = |i: usize, j: usize| blocks.b[(i - 1, j - 1)];
    let t2 = t * t;
    let l12 = 0.25 * (a(2, 2) + a(3, 3));
    let l1b2b = Complex64::new(a(2, 2) - a(3, 3), 2.0 * a(2, 3)) * 0.25;
    let l11b = Complex64::new(-a(1, 3) - b(1, 3), a(1, 2) + b(1, 2)) * 0.25;
    let l22b = Complex64::new(-a(1, 3) + b(1, 3), a(1, 2) - b(1, 2)) * 0.25;
    let l1b2 = Complex64::new(b(2, 2) + b(3, 3), b(2, 3) - b(3, 2)) * 0.25;
    let l12b = Complex64::new(b(2, 2) - b(3, 3), b(2, 3) + b(3, 2)) * 0.25;
    let mut set = LambdaSet {
        t,
        l12,
        l1b2b,
        l11b,
        l22b,
        l1b2,
        l12b,
        big_lambda1: 0.0,
        big_lambda2: Complex64::new(b(2, 1), b(3, 1)) * t2,
        big_lambda3: Complex64::new(a(1, 2), -a(1, 3)) * t2,
    };
    set.big_lambda1 = l12 * (1.0 - 2.0 * t2 * l12) - 2.0 * t2 * set.mixed_norm_sq();
    set
}

/// `Λ2` read directly off the frame curvature components.
pub fn big_lambda2_from_curvature(r: &FrameCurvature, t: f64) -> Complex64 {
    let f = |c: usize, d: usize| r.get(0, 1, c - 1, d - 1) + r.get(2, 3, c - 1, d - 1);
    Complex64::new(f(1, 3) + f(2, 4), f(1, 4) - f(2, 3)) * (0.5 * t * t)
}

/// `Λ3` read directly off the frame curvature components.
pub fn big_lambda3_from_curvature(r: &FrameCurvature, t: f64) -> Complex64 {
    let f = |c: usize, d: usize| r.get(0, 1, c - 1, d - 1) + r.get(2, 3, c - 1, d - 1);
    Complex64::new(f(1, 3) - f(2, 4), -(f(1, 4) + f(2, 3))) * (0.5 * t * t)
}

/// `|λ11̄ + λ22̄|`.
pub fn balanced_defect(l: &LambdaSet) -> f64 {
    (l.l11b + l.l22b).norm()
}

fn mono(indices: &[usize], c: Complex64) -> NumericForm {
    NumericForm::monomial(DIM, indices, c)
}

/// `ρ(Ω)` on the φ co-basis.
pub fn rho_form(l: &LambdaSet) -> NumericForm {
    mono(&[P1, P2], re(l.l12))
        + mono(&[Q1, Q2], l.l1b2b)
        + mono(&[P1, Q1], l.l11b)
        + mono(&[P2, Q2], l.l22b)
        + mono(&[Q1, P2], l.l1b2)
        + mono(&[P1, Q2], l.l12b)
}

/// `𝕂±(t) = (i/2)(φ1∧φ̄1 + φ2∧φ̄2 ± 4t² φ3∧φ̄3)`.
pub fn kform(sign: Sign, t: f64) -> NumericForm {
    (mono(&[P1, Q1], re(1.0)) + mono(&[P2, Q2], re(1.0))
        + mono(&[P3, Q3], re(4.0 * sign.value() * t * t)))
        * (I * 0.5)
}

/// `d𝕂±(t)` on the φ co-basis.
pub fn dk_coefficients(l: &LambdaSet, sign: Sign) -> NumericForm {
    let t2 = l.t * l.t;
    let sg = sign.value();
    let c = re(-1.0 + sg * 2.0 * t2 * l.l12);
    let lam = &rho_form(l) - &mono(&[P1, P2], re(l.l12));
    let lam_bar = lam.conjugate_paired();
    let phi3 = mono(&[P3], re(1.0));
    let phi3b = mono(&[Q3], re(1.0));
    let left = mono(&[Q1, Q2], c) + lam_bar * re(sg * 2.0 * t2);
    let right = mono(&[P1, P2], c) + lam * re(sg * 2.0 * t2);
    phi3.wedge(&left) * (-I) + phi3b.wedge(&right) * I
}

/// `𝕂± ∧ d𝕂±`.
pub fn k_wedge_dk(l: &LambdaSet, sign: Sign) -> NumericForm {
    kform(sign, l.t).wedge(&dk_coefficients(l, sign))
}

/// Index lists of the two 5-forms spanning `𝕂 ∧ d𝕂`.
pub const BALANCED_BASIS: [[usize; 5]; 2] = [[P1, Q1, Q2, P2, P3], [P1, Q1, Q2, P2, Q3]];

/// Coefficients of `𝕂± ∧ d𝕂±` on [`BALANCED_BASIS`].
pub fn balanced_coefficients(l: &LambdaSet, sign: Sign) -> [Complex64; 2] {
    let f = k_wedge_dk(l, sign);
    BALANCED_BASIS.map(|idx| f.get(&idx))
}

pub fn kahler_defect(l: &LambdaSet, sign: Sign) -> f64 {
    let lead = (1.0 - sign.value() * 2.0 * l.t * l.t * l.l12).abs();
    [l.l1b2b, l.l11b, l.l22b, l.l1b2, l.l12b]
        .iter()
        .map(|z| z.norm())
        .fold(lead, f64::max)
}

/// First-Gauduchon obstruction for `𝕁₊`; meaningful for anti-self-dual
/// metrics of constant scalar curvature.
pub fn gauduchon1_plus(blocks: &CurvatureBlocks, l: &LambdaSet) -> f64 {
    let t2 = l.t * l.t;
    2.0 - 8.0 * t2 * l.l12 + 2.0 * t2 * blocks.a[(0, 0)] - 4.0 * t2 * l.big_lambda1
}

/// First-Gauduchon obstruction for `𝕁₋`; same validity range as the plus case.
pub fn gauduchon1_minus(blocks: &CurvatureBlocks, l: &LambdaSet) -> f64 {
    let t2 = l.t * l.t;
    -4.0 * t2 * l.l12 + 2.0 * t2 * blocks.a[(0, 0)] - 8.0 * t2 * t2 * l.mixed_norm_sq()
}

/// Pointwise part of the Gauduchon hypotheses: anti-self-duality.
pub fn gauduchon_applicable(blocks: &CurvatureBlocks) -> bool {
    blocks.is_asd()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    /// `d^{2,-1}`
    TwoMinusOne,
    /// `d^{-1,2}`
    MinusOneTwo,
}

/// Image of a co-frame generator under a type-shifting part of `d`.
fn shift_generator(g: usize, l: &LambdaSet, j: Structure, shift: Shift) -> Option<NumericForm> {
    let one = re(1.0);
    match (j, shift, g) {
        (Structure::JPlus, Shift::TwoMinusOne, Q3) => Some(mono(&[P1, P2], l.l1b2b.conj())),
        (Structure::JPlus, Shift::MinusOneTwo, P3) => Some(mono(&[Q1, Q2], l.l1b2b)),
        (Structure::JMinus, Shift::TwoMinusOne, Q1) => Some(mono(&[P2, Q3], one)),
        (Structure::JMinus, Shift::TwoMinusOne, Q2) => Some(mono(&[Q3, P1], one)),
        (Structure::JMinus, Shift::TwoMinusOne, P3) => Some(mono(&[P1, P2], re(l.l12))),
        (Structure::JMinus, Shift::MinusOneTwo, P1) => Some(mono(&[Q2, P3], one)),
        (Structure::JMinus, Shift::MinusOneTwo, P2) => Some(mono(&[P3, Q1], one)),
        (Structure::JMinus, Shift::MinusOneTwo, Q3) => Some(mono(&[Q1, Q2], re(l.l12))),
        _ => None,
    }
}

/// Apply `d^{2,-1}` or `d^{-1,2}`; both are function-linear derivations.
pub fn apply_shift(form: &NumericForm, l: &LambdaSet, j: Structure, shift: Shift) -> NumericForm {
    let mut out = NumericForm::zero(DIM, (form.degree() + 1).min(DIM));
    if form.degree() == DIM {
        return out;
    }
    for m in form.masks() {
        let c = form.get_mask(m);
        if c == re(0.0) {
            continue;
        }
        let idx = mask_indices(m);
        for (pos, &g) in idx.iter().enumerate() {
            let Some(image) = shift_generator(g, l, j, shift) else {
                continue;
            };
            let left = mono(&idx[..pos], re(1.0));
            let right = mono(&idx[pos + 1..], re(1.0));
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            out = out + left.wedge(&image).wedge(&right) * (c * sign);
        }
    }
    out
}

/// The four type-decomposition 4-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeDecomposition {
    /// `d^{2,-1} ∂̄ 𝕂₊`
    pub plus_dbar: NumericForm,
    /// `d^{2,-1} d^{-1,2} 𝕂₊`
    pub plus_shift: NumericForm,
    /// `d^{2,-1} ∂̄ 𝕂₋`
    pub minus_dbar: NumericForm,
    /// `d^{2,-1} d^{-1,2} 𝕂₋`
    pub minus_shift: NumericForm,
}

impl TypeDecomposition {
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.plus_dbar
            .max_diff(&other.plus_dbar)
            .max(self.plus_shift.max_diff(&other.plus_shift))
            .max(self.minus_dbar.max_diff(&other.minus_dbar))
            .max(self.minus_shift.max_diff(&other.minus_shift))
    }
}

/// Closed-form coefficient table.
pub fn type_decomposition_coeffs(l: &LambdaSet) -> TypeDecomposition {
    let t2 = l.t * l.t;
    let zero = NumericForm::zero(DIM, 4);
    let plus_shift = mono(&[P1, P2, Q1, Q2], I * (2.0 * t2 * l.l1b2b.norm_sqr()));
    let minus_dbar = mono(&[P1, P2, Q3, P3], I * (l.l11b + l.l22b).conj() * (2.0 * t2));
    let f = I * (1.0 + 2.0 * t2 * l.l12);
    let minus_shift = (mono(&[Q1, P1, P2, Q2], re(l.l12))
        + mono(&[Q2, P2, Q3, P3], re(1.0))
        + mono(&[P3, Q3, P1, Q1], re(1.0)))
        * f;
    TypeDecomposition {
        plus_dbar: zero,
        plus_shift,
        minus_dbar,
        minus_shift,
    }
}

/// The same table assembled from `d𝕂±` and the type-shift operators.
pub fn type_decomposition_from_algebra(l: &LambdaSet) -> TypeDecomposition {
    let sides = |sign: Sign| {
        let j = Structure::for_sign(sign);
        let k = kform(sign, l.t);
        let dbar = type_component(&dk_coefficients(l, sign), j, 1, 2);
        let dbar_term = apply_shift(&dbar, l, j, Shift::TwoMinusOne);
        let inner = apply_shift(&k, l, j, Shift::MinusOneTwo);
        let shift_term = apply_shift(&inner, l, j, Shift::TwoMinusOne);
        (dbar_term, shift_term)
    };
    let (plus_dbar, plus_shift) = sides(Sign::Plus);
    let (minus_dbar, minus_shift) = sides(Sign::Minus);
    TypeDecomposition {
        plus_dbar,
        plus_shift,
        minus_dbar,
        minus_shift,
    }
}

/// `∂∂̄𝕂₊` for anti-self-dual metrics of constant scalar curvature, in the
/// general-λ form.
pub fn ddbar_kplus(blocks: &CurvatureBlocks, l: &LambdaSet) -> NumericForm {
    let t2 = l.t * l.t;
    let f12 = blocks.a[(0, 0)] + blocks.b[(0, 0)];
    let f34 = blocks.a[(0, 0)] - blocks.b[(0, 0)];
    let base = 1.0 - 4.0 * t2 * l.l12;
    mono(&[P2, Q2, P3, Q3], I * (base + t2 * f34))
        + mono(&[P1, Q1, P3, Q3], I * (base + t2 * f12))
        + mono(&[P1, P2, Q1, Q2], I * l.big_lambda1)
        + mono(&[P1, Q2, P3, Q3], l.big_lambda2)
        + mono(&[Q1, P2, P3, Q3], l.big_lambda2.conj())
}

/// Closed form of `∂∂̄𝕂₊` for anti-self-dual Einstein metrics.
pub fn ddbar_kplus_asd_einstein(s: f64, t: f64) -> NumericForm {
    let f = 1.0 - s * t * t / 12.0;
    (mono(&[P2, Q2, P3, Q3], re(1.0)) + mono(&[P3, Q3, P1, Q1], re(1.0))
        + mono(&[P1, Q1, P2, Q2], re(-s / 24.0)))
        * (I * f)
}

/// Closed form of `d^{-1,2} d^{2,-1} 𝕂₋` for anti-self-dual Einstein metrics.
pub fn shift_kminus_asd_einstein(s: f64, t: f64) -> NumericForm {
    let f = 1.0 + s * t * t / 12.0;
    (mono(&[P2, Q2, Q3, P3], re(1.0)) + mono(&[Q3, P3, P1, Q1], re(1.0))
        + mono(&[P1, Q1, P2, Q2], re(s / 24.0)))
        * (I * f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsdEinsteinPattern {
    pub s: f64,
    pub t: f64,
    /// `1 − s t² / 12`, the coefficient (over `i`) of both mixed 4-forms.
    pub mixed_coeff: f64,
    /// `−(s/24)(1 − s t²/12)`, the coefficient (over `i`) of `φ1φ̄1φ2φ̄2`.
    pub horizontal_coeff: f64,
    /// `1 + s t² / 12`.
    pub minus_shift_factor: f64,
    pub dbar_kminus_max: f64,
    pub d_kminus_max: f64,
    /// General-λ `∂∂̄𝕂₊` against the closed form.
    pub ddbar_plus_residual: f64,
    /// Algebraic `d^{-1,2} d^{2,-1} 𝕂₋` against the closed form.
    pub minus_shift_residual: f64,
}

impl AsdEinsteinPattern {
    pub fn consistent(&self, tol: f64) -> bool {
        [
            self.dbar_kminus_max,
            self.d_kminus_max,
            self.ddbar_plus_residual,
            self.minus_shift_residual,
        ]
        .iter()
        .all(|v| *v < tol)
    }
}

pub fn asd_einstein_pattern(blocks: &CurvatureBlocks, t: f64) -> Result<AsdEinsteinPattern> {
    if !(blocks.is_asd() && blocks.is_einstein()) {
        return Err(Error::NotApplicable(format!(
            "needs anti-self-dual Einstein curvature (|W+| = {:.3e}, |B| = {:.3e})",
            blocks.asd_defect(),
            blocks.einstein_defect()
        )));
    }
    let s = blocks.scalar();
    let l = lambda_from_blocks(blocks, t);
    let dk_minus = dk_coefficients(&l, Sign::Minus);
    let jm = Structure::JMinus;
    let mixed = 1.0 - s * t * t / 12.0;
    let shift = apply_shift(
        &apply_shift(&kform(Sign::Minus, t), &l, jm, Shift::TwoMinusOne),
        &l,
        jm,
        Shift::MinusOneTwo,
    );
    Ok(AsdEinsteinPattern {
        s,
        t,
        mixed_coeff: mixed,
        horizontal_coeff: -s / 24.0 * mixed,
        minus_shift_factor: 1.0 + s * t * t / 12.0,
        dbar_kminus_max: type_component(&dk_minus, jm, 1, 2).max_abs(),
        d_kminus_max: type_component(&dk_minus, jm, 2, 1).max_abs(),
        ddbar_plus_residual: ddbar_kplus(blocks, &l).max_diff(&ddbar_kplus_asd_einstein(s, t)),
        minus_shift_residual: shift.max_diff(&shift_kminus_asd_einstein(s, t)),
    })
}

/// The metric parameter at which `𝕁₊` can be Kähler: `√(12/s)` for `s > 0`.
pub fn t_star(blocks: &CurvatureBlocks) -> Option<f64> {
    let s = blocks.scalar();
    (s > blocks.zero_tolerance()).then(|| (12.0 / s).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symplectic12 {
    PlusAndMinus,
    MinusOnly,
    Neither,
}

pub fn classify_12_symplectic(blocks: &CurvatureBlocks, t: f64) -> Symplectic12 {
    if !(blocks.is_asd() && blocks.is_einstein()) {
        return Symplectic12::Neither;
    }
    match t_star(blocks) {
        Some(ts) if (t * t - ts * ts).abs() < 1e-8 * (t * t).max(1.0) => Symplectic12::PlusAndMinus,
        _ => Symplectic12::MinusOnly,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwistorDefects {
    pub t: f64,
    pub balanced_defect: f64,
    pub kahler_plus_defect: f64,
    pub kahler_minus_defect: f64,
    pub gauduchon1_plus: f64,
    pub gauduchon1_minus: f64,
    pub gauduchon_applicable: bool,
    pub symplectic12_class: Symplectic12,
}

pub fn twistor_defects(blocks: &CurvatureBlocks, t: f64) -> TwistorDefects {
    let l = lambda_from_blocks(blocks, t);
    TwistorDefects {
        t,
        balanced_defect: balanced_defect(&l),
        kahler_plus_defect: kahler_defect(&l, Sign::Plus),
        kahler_minus_defect: kahler_defect(&l, Sign::Minus),
        gauduchon1_plus: gauduchon1_plus(blocks, &l),
        gauduchon1_minus: gauduchon1_minus(blocks, &l),
        gauduchon_applicable: gauduchon_applicable(blocks),
        symplectic12_class: classify_12_symplectic(blocks, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda2::{frame_curvature_from_blocks, random_asd_blocks};
    use nalgebra::Matrix3;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sphere() -> CurvatureBlocks {
        CurvatureBlocks::new(Matrix3::identity(), Matrix3::zeros(), Matrix3::identity())
    }

    fn synthetic(b: f64) -> CurvatureBlocks {
        let mut blocks = sphere();
        blocks.b[(1, 1)] = b;
        blocks
    }

    #[test]
    fn lambda_examples() {
        let z = lambda_from_blocks(&CurvatureBlocks::zero(), 1.0);
        assert_eq!(z.l12, 0.0);
        assert_eq!(z.mixed_norm_sq() + z.l1b2b.norm(), 0.0);
        let s = lambda_from_blocks(&sphere(), 1.0);
        assert_eq!(s.l12, 0.5);
        assert_eq!(s.l1b2b.norm() + s.mixed_norm_sq(), 0.0);
        let y = lambda_from_blocks(&synthetic(0.2), 1.0);
        assert!((y.l1b2 - re(0.05)).norm() < 1e-16 && (y.l12b - re(0.05)).norm() < 1e-16);
        assert_eq!(y.l11b.norm() + y.l22b.norm(), 0.0);
    }

    #[test]
    fn reconstruction_inverts_the_dictionary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let blocks = random_blocks(&mut rng, 2.0);
            let l = lambda_from_blocks(&blocks, 0.7);
            let back = l.reconstruct();
            let want = block_entries(&blocks);
            for (x, y) in back.iter().zip(want.iter()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn big_lambdas_match_component_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let blocks = random_blocks(&mut rng, 1.0);
            let r = frame_curvature_from_blocks(&blocks);
            let l = lambda_from_blocks(&blocks, 1.3);
            assert!((l.big_lambda2 - big_lambda2_from_curvature(&r, 1.3)).norm() < 1e-12);
            assert!((l.big_lambda3 - big_lambda3_from_curvature(&r, 1.3)).norm() < 1e-12);
        }
    }

    #[test]
    fn balanced_examples() {
        assert_eq!(balanced_defect(&lambda_from_blocks(&CurvatureBlocks::zero(), 1.0)), 0.0);
        let mut blocks = sphere();
        blocks.a[(0, 1)] = 0.4;
        blocks.a[(1, 0)] = 0.4;
        blocks.a[(0, 2)] = 0.3;
        blocks.a[(2, 0)] = 0.3;
        let d = balanced_defect(&lambda_from_blocks(&blocks, 1.0));
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dk_examples() {
        for sign in [Sign::Plus, Sign::Minus] {
            let f = dk_coefficients(&lambda_from_blocks(&CurvatureBlocks::zero(), 0.8), sign);
            assert_eq!(f.get(&[P3, Q1, Q2]), I);
            assert_eq!(f.get(&[Q3, P1, P2]), -I);
            assert_eq!(f.terms().len(), 2);
        }
        let s1 = lambda_from_blocks(&sphere(), 1.0);
        assert!(dk_coefficients(&s1, Sign::Plus).max_abs() < 1e-15);
        let m = dk_coefficients(&s1, Sign::Minus);
        assert!((m.get(&[P3, Q1, Q2]).norm() - 2.0).abs() < 1e-15);
        assert_eq!(m.terms().len(), 2);
    }

    #[test]
    fn kahler_examples() {
        let s1 = lambda_from_blocks(&sphere(), 1.0);
        assert_eq!(kahler_defect(&s1, Sign::Plus), 0.0);
        assert_eq!(kahler_defect(&s1, Sign::Minus), 2.0);
        let z = lambda_from_blocks(&CurvatureBlocks::zero(), 3.0);
        assert_eq!(kahler_defect(&z, Sign::Plus), 1.0);
        assert_eq!(kahler_defect(&z, Sign::Minus), 1.0);
    }

    #[test]
    fn gauduchon_examples() {
        let s = sphere();
        for t in [0.3, 1.0, 2f64.sqrt(), 1.7] {
            let l = lambda_from_blocks(&s, t);
            let want = 2.0 * (1.0 - t * t).powi(2);
            assert!((gauduchon1_plus(&s, &l) - want).abs() < 1e-13);
            assert!(gauduchon1_minus(&s, &l).abs() < 1e-13);
            let z = CurvatureBlocks::zero();
            let lz = lambda_from_blocks(&z, t);
            assert_eq!(gauduchon1_plus(&z, &lz), 2.0);
            assert_eq!(gauduchon1_minus(&z, &lz), 0.0);
            let y = synthetic(0.2);
            let ly = lambda_from_blocks(&y, t);
            assert!((gauduchon1_minus(&y, &ly) + t.powi(4) * 0.04).abs() < 1e-14);
        }
    }

    #[test]
    fn kahler_wedge_antisymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let t = rng.random_range(0.1..3.0);
            let l = LambdaSet::random(&mut rng, t);
            let p = k_wedge_dk(&l, Sign::Plus);
            let m = k_wedge_dk(&l, Sign::Minus);
            assert!((&p + &m).max_abs() < 1e-12);
            // only the two balanced monomials carry weight
            let [c1, c2] = balanced_coefficients(&l, Sign::Plus);
            let t2 = l.t * l.t;
            assert!((c1 - (l.l11b + l.l22b).conj() * t2).norm() < 1e-12);
            assert!((c2 - (l.l11b + l.l22b) * t2).norm() < 1e-12);
            assert_eq!(p.terms().len(), 2);
        }
    }

    #[test]
    fn type_examples() {
        let k = kform(Sign::Plus, 1.0);
        assert_eq!(type_component(&k, Structure::JPlus, 1, 1), k);
        let f = mono(&[P1, P2, Q3], re(1.0));
        assert_eq!(type_component(&f, Structure::JPlus, 2, 1), f);
        assert_eq!(type_component(&f, Structure::JMinus, 3, 0), f);
    }

    #[test]
    fn type_decomposition_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let t = rng.random_range(0.1..3.0);
            let l = LambdaSet::random(&mut rng, t);
            let d = type_decomposition_from_algebra(&l).max_diff(&type_decomposition_coeffs(&l));
            assert!(d < 1e-12, "{d}");
        }
        let z = type_decomposition_coeffs(&lambda_from_blocks(&CurvatureBlocks::zero(), 1.0));
        assert_eq!(z.plus_shift.max_abs() + z.minus_dbar.max_abs() + z.plus_dbar.max_abs(), 0.0);
        assert_eq!(z.minus_shift.terms().len(), 2);
    }

    #[test]
    fn quartic_coefficient_on_synthetic_a() {
        let mut blocks = CurvatureBlocks::zero();
        blocks.a[(1, 1)] = 1.0;
        blocks.c[(0, 0)] = 1.0;
        let t = 1.1;
        let l = lambda_from_blocks(&blocks, t);
        let c = type_decomposition_coeffs(&l).plus_shift.get(&[P1, P2, Q1, Q2]);
        assert!((c - I * (2.0 * t * t / 16.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let asd = random_asd_blocks(&mut rng, 5.0, 1.0);
        let q = type_decomposition_coeffs(&lambda_from_blocks(&asd, t)).plus_shift;
        assert!(q.max_abs() < 1e-15);
    }

    #[test]
    fn asd_einstein_pattern_examples() {
        let r1 = asd_einstein_pattern(&sphere(), 1.0).unwrap();
        assert!(r1.mixed_coeff.abs() < 1e-15 && r1.horizontal_coeff.abs() < 1e-15);
        assert!(r1.consistent(1e-12), "{r1:?}");
        let r2 = asd_einstein_pattern(&sphere(), 2f64.sqrt()).unwrap();
        assert!((r2.mixed_coeff + 1.0).abs() < 1e-14);
        assert!((r2.horizontal_coeff - 0.5).abs() < 1e-14);
        assert!(r2.consistent(1e-12), "{r2:?}");
        let mut prod = CurvatureBlocks::zero();
        prod.a[(0, 0)] = 1.25 / 2.0;
        prod.c[(0, 0)] = 1.25 / 2.0;
        prod.b[(0, 0)] = 0.75 / 2.0;
        assert!(matches!(asd_einstein_pattern(&prod, 1.0), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn asd_einstein_pattern_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for s in [-6.0, 3.0, 12.0] {
            let mut blocks = random_asd_blocks(&mut rng, s, 1.0);
            blocks.b = Matrix3::zeros();
            for t in [0.1, 0.5, 1.0, 2.0, 10.0] {
                let r = asd_einstein_pattern(&blocks, t).unwrap();
                assert!(r.consistent(1e-9 * (1.0 + t.powi(4)) * s.abs()), "{r:?}");
            }
        }
    }

    #[test]
    fn t_star_and_classification() {
        assert_eq!(t_star(&sphere()), Some(1.0));
        let quarter = CurvatureBlocks::new(
            Matrix3::identity() * 0.25,
            Matrix3::zeros(),
            Matrix3::identity() * 0.25,
        );
        assert_eq!(t_star(&quarter), Some(2.0));
        assert_eq!(t_star(&CurvatureBlocks::zero()), None);
        assert_eq!(classify_12_symplectic(&sphere(), 1.0), Symplectic12::PlusAndMinus);
        assert_eq!(classify_12_symplectic(&sphere(), 2.0), Symplectic12::MinusOnly);
        let mut prod = CurvatureBlocks::zero();
        prod.a[(0, 0)] = 0.625;
        prod.c[(0, 0)] = 0.625;
        prod.b[(0, 0)] = 0.375;
        assert_eq!(classify_12_symplectic(&prod, 1.0), Symplectic12::Neither);
    }
}
