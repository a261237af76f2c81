//! Six-dimensional charts of the twistor space and numerical exterior
//! calculus on them, used to check the moving-frame formulas.
//!
//! Chart coordinates are `z = (x1, x2, x3, x4, y1, y2)`: base coordinates
//! followed by stereographic coordinates of the fiber sphere in `Λ⁺`.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, Matrix4, Matrix6};
use num_complex::Complex64;
use serde::Serialize;

use crate::curvature::{christoffel, frame_curvature, gram_schmidt, orient, riemann_coord, FrameCurvature};
use crate::dsl::{eval_jet2, jet_values, Jet2, MetricSpec};
use crate::error::{Error, Result};
use crate::forms::NumericForm;
use crate::lambda2::{basis, blocks_from_frame_curvature, plane_rotation, CurvatureBlocks};
use crate::twistor::{
    dk_coefficients, lambda_from_blocks, ddbar_kplus_asd_einstein, type_component, Sign, Structure,
};

const DIM: usize = 6;

/// Chart points with `x` in the central half of the domain box and
/// `y ∈ [−1, 1]²`, leaving room for difference stencils.
pub fn sample_chart_points<R: rand::Rng + ?Sized>(spec: &MetricSpec, n: usize, rng: &mut R) -> Vec<TwistorChartPoint> {
    spec.sample_scaled(n, 0.5, rng)
        .into_iter()
        .map(|x| TwistorChartPoint::new(x, [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]))
        .collect()
}

/// Which stereographic chart of the fiber sphere is in use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberChart {
    /// Excludes `n = −E1⁺`.
    #[default]
    North,
    /// Excludes `n = +E1⁺`.
    South,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistorChartPoint {
    pub x: [f64; 4],
    pub y: [f64; 2],
}

impl TwistorChartPoint {
    pub fn new(x: [f64; 4], y: [f64; 2]) -> Self {
        Self { x, y }
    }

    pub fn coords(&self) -> [f64; 6] {
        [self.x[0], self.x[1], self.x[2], self.x[3], self.y[0], self.y[1]]
    }

    pub fn from_coords(z: &[f64; 6]) -> Self {
        Self {
            x: [z[0], z[1], z[2], z[3]],
            y: [z[4], z[5]],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OracleOptions {
    pub chart: FiberChart,
    /// Twist the base frame by `Rot12(c·x1)` without tracking its derivative.
    /// Only useful as a negative control.
    pub corrupt: Option<f64>,
}

/// Inverse stereographic image of `y` on the unit sphere.
pub fn fiber_point(chart: FiberChart, y: [f64; 2]) -> [f64; 3] {
    let r2 = y[0] * y[0] + y[1] * y[1];
    let d = 1.0 + r2;
    let first = (1.0 - r2) / d;
    [
        match chart {
            FiberChart::North => first,
            FiberChart::South => -first,
        },
        2.0 * y[0] / d,
        2.0 * y[1] / d,
    ]
}

fn fiber_point_derivs(chart: FiberChart, y: [f64; 2]) -> [[f64; 3]; 2] {
    let r2 = y[0] * y[0] + y[1] * y[1];
    let d = 1.0 + r2;
    let s = match chart {
        FiberChart::North => 1.0,
        FiberChart::South => -1.0,
    };
    std::array::from_fn(|k| {
        let yk = y[k];
        // ∂((1−r²)/d) = −4 y_k / d²
        let first = s * (-4.0 * yk / (d * d));
        let mut out = [first, 0.0, 0.0];
        for (m, slot) in out.iter_mut().enumerate().skip(1) {
            let ym = y[m - 1];
            let delta = if m - 1 == k { 1.0 } else { 0.0 };
            *slot = 2.0 * delta / d - 4.0 * ym * yk / (d * d);
        }
        out
    })
}

/// Unit quaternions act on the left through `S_m = √2 E_m⁺`.
fn quaternion_matrix(q: [f64; 4]) -> Matrix4<f64> {
    let e = basis();
    Matrix4::identity() * q[0]
        + e.plus[0] * (SQRT_2 * q[1])
        + e.plus[1] * (SQRT_2 * q[2])
        + e.plus[2] * (SQRT_2 * q[3])
}

/// Half-angle lift of the rotation taking `E1⁺` to `n`.
pub fn quaternion_lift(n: [f64; 3]) -> Result<Matrix4<f64>> {
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (len - 1.0).abs() > 1e-9 {
        return Err(Error::FiberChart(format!("|n| = {len}, expected 1")));
    }
    if 1.0 + n[0] < 1e-12 {
        return Err(Error::FiberChart("n is the excluded antipode −E1⁺".into()));
    }
    let v = [1.0 + n[0], 0.0, n[2], -n[1]];
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok(quaternion_matrix(v.map(|c| c / norm)))
}

/// `a(y)` and `∂a/∂y_k` for the north chart.
fn north_lift(y: [f64; 2]) -> (Matrix4<f64>, [Matrix4<f64>; 2]) {
    let r2 = 1.0 + y[0] * y[0] + y[1] * y[1];
    let r = r2.sqrt();
    let v = [1.0, 0.0, y[1], -y[0]];
    let dv = [[0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]];
    let a = quaternion_matrix(v.map(|c| c / r));
    let da = std::array::from_fn(|k| {
        let dq: [f64; 4] = std::array::from_fn(|i| dv[k][i] / r - v[i] * y[k] / (r2 * r));
        quaternion_matrix(dq)
    });
    (a, da)
}

pub fn fiber_lift(chart: FiberChart, y: [f64; 2]) -> (Matrix4<f64>, [Matrix4<f64>; 2]) {
    match chart {
        FiberChart::North => north_lift(y),
        FiberChart::South => {
            let s3 = basis().plus[2] * SQRT_2;
            let (a, da) = north_lift([-y[0], y[1]]);
            (s3 * a, [-(s3 * da[0]), s3 * da[1]])
        }
    }
}

/// Section of the frame bundle over a chart point with every pulled-back
/// 1-form evaluated on the six coordinate directions.
#[derive(Clone, Debug)]
pub struct SectionFrame {
    pub point: TwistorChartPoint,
    pub t: f64,
    /// Base metric at `x`.
    pub g: Matrix4<f64>,
    /// Frame `E = F·a(y)`, columns in the coordinate basis.
    pub e: Matrix4<f64>,
    /// `∂E/∂z_j`.
    pub de: [Matrix4<f64>; 6],
    /// `ω(∂_j)` as a matrix with entries `ω^α_β`.
    pub omega: [Matrix4<f64>; 6],
    /// `theta[α][j] = θ^{α+1}(∂_j)` for `θ1 … θ6`.
    pub theta: [[f64; 6]; 6],
    /// Curvature components in the frame `E`.
    pub curvature: FrameCurvature,
    /// Unit fiber point.
    pub n: [f64; 3],
    /// Covariant derivative of the unit self-dual form `N` along `∂_j`,
    /// covariant coordinate components.
    pub nabla_n: [Matrix4<f64>; 6],
    /// `E_m⁺` of the base frame `F` in covariant coordinate components.
    pub base_plus: [Matrix4<f64>; 3],
}

pub fn section_frame(
    spec: &MetricSpec,
    p: TwistorChartPoint,
    t: f64,
    opts: OracleOptions,
) -> Result<SectionFrame> {
    if !spec.contains(&p.x) {
        return Err(Error::OutsideDomain {
            point: p.coords().to_vec(),
        });
    }
    if !p.y.iter().all(|v| v.is_finite()) {
        return Err(Error::FiberChart("non-finite fiber coordinate".into()));
    }
    let jets = eval_jet2(spec, &p.x)?;
    let g = jet_values(&jets);
    let cols = orient(gram_schmidt::<Jet2>(&jets)?, spec.orientation());
    let mut f = Matrix4::from_fn(|i, a| cols[a][i].value);
    let df: [Matrix4<f64>; 4] = std::array::from_fn(|m| Matrix4::from_fn(|i, a| cols[a][i].grad[m]));
    if let Some(c) = opts.corrupt {
        f *= plane_rotation(0, 1, c * p.x[0]);
    }
    let (a, da) = fiber_lift(opts.chart, p.y);
    let e = f * a;
    let de: [Matrix4<f64>; 6] = std::array::from_fn(|j| if j < 4 { df[j] * a } else { f * da[j - 4] });
    let einv = e.transpose() * g;

    let ch = christoffel(&jets)?;
    let omega: [Matrix4<f64>; 6] = std::array::from_fn(|j| {
        if j < 4 {
            let gam = Matrix4::from_fn(|i, k| ch.gamma[i][j][k]);
            einv * (de[j] + gam * e)
        } else {
            einv * de[j]
        }
    });
    let mut theta = [[0.0; 6]; 6];
    for al in 0..4 {
        for j in 0..4 {
            theta[al][j] = einv[(al, j)];
        }
    }
    for j in 0..6 {
        let w = &omega[j];
        theta[4][j] = 0.5 * (w[(0, 2)] - w[(1, 3)]);
        theta[5][j] = 0.5 * (w[(0, 3)] + w[(1, 2)]);
    }
    let riemann = riemann_coord(&ch, &g);
    let curvature = frame_curvature(&riemann, &crate::curvature::OrthonormalFrame { e });

    // N = Σ n_m E_m⁺(F), built from coordinate expressions so that its
    // covariant derivative is independent of the connection forms above.
    let n = fiber_point(opts.chart, p.y);
    let dn = fiber_point_derivs(opts.chart, p.y);
    let theta_f: [[Jet2; 4]; 4] = std::array::from_fn(|al| {
        std::array::from_fn(|i| {
            let mut acc = Jet2::constant(0.0);
            for k in 0..4 {
                acc = acc + cols[al][k] * jets[k][i];
            }
            acc
        })
    });
    let plus = basis().plus;
    let coord_forms: [[[Jet2; 4]; 4]; 3] = std::array::from_fn(|m| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = Jet2::constant(0.0);
                for al in 0..4 {
                    for be in 0..4 {
                        let c = plus[m][(al, be)];
                        if c != 0.0 {
                            acc = acc + theta_f[al][i] * theta_f[be][j] * Jet2::constant(c);
                        }
                    }
                }
                acc
            })
        })
    });
    let base_plus: [Matrix4<f64>; 3] =
        std::array::from_fn(|m| Matrix4::from_fn(|i, j| coord_forms[m][i][j].value));
    let n_mat = Matrix4::from_fn(|i, j| (0..3).map(|m| n[m] * coord_forms[m][i][j].value).sum::<f64>());
    let nabla_n: [Matrix4<f64>; 6] = std::array::from_fn(|k| {
        if k < 4 {
            Matrix4::from_fn(|i, j| {
                let mut v: f64 = (0..3).map(|m| n[m] * coord_forms[m][i][j].grad[k]).sum();
                for l in 0..4 {
                    v -= ch.gamma[l][k][i] * n_mat[(l, j)] + ch.gamma[l][k][j] * n_mat[(i, l)];
                }
                v
            })
        } else {
            Matrix4::from_fn(|i, j| (0..3).map(|m| dn[k - 4][m] * coord_forms[m][i][j].value).sum())
        }
    });

    Ok(SectionFrame {
        point: p,
        t,
        g,
        e,
        de,
        omega,
        theta,
        curvature,
        n,
        nabla_n,
        base_plus,
    })
}

fn cplx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl SectionFrame {
    /// `θ^{α+1}` as a chart 1-form.
    pub fn theta_form(&self, alpha: usize) -> NumericForm {
        NumericForm::one_form(&self.theta[alpha].map(cplx))
    }

    /// `ω^α_β` as a chart 1-form.
    pub fn omega_form(&self, a: usize, b: usize) -> NumericForm {
        let c: [Complex64; 6] = std::array::from_fn(|j| cplx(self.omega[j][(a, b)]));
        NumericForm::one_form(&c)
    }

    /// `ψ3 = ½(ω^1_3 + ω^2_4 + i(ω^2_3 − ω^1_4))`.
    pub fn psi3(&self) -> NumericForm {
        let c: [Complex64; 6] = std::array::from_fn(|j| {
            let w = &self.omega[j];
            Complex64::new(w[(0, 2)] + w[(1, 3)], w[(1, 2)] - w[(0, 3)]) * 0.5
        });
        NumericForm::one_form(&c)
    }

    /// Rows `φ1, φ2, φ3, φ̄1, φ̄2, φ̄3` as chart covectors.
    pub fn phi_matrix(&self) -> DMatrix<Complex64> {
        let th = &self.theta;
        DMatrix::from_fn(6, 6, |row, j| {
            let k = row % 3;
            let im = if row < 3 { 1.0 } else { -1.0 };
            Complex64::new(th[2 * k][j], im * th[2 * k + 1][j])
        })
    }

    pub fn coframe(&self) -> PhiCoframe {
        let c = self.phi_matrix();
        let inv = c.clone().try_inverse();
        PhiCoframe { c, inv }
    }

    /// `𝕂±(t) = (i/2)(φ1∧φ̄1 + φ2∧φ̄2 ± 4t² φ3∧φ̄3)` in chart components.
    pub fn kform(&self, sign: Sign) -> NumericForm {
        let c = self.phi_matrix();
        let row = |r: usize| {
            let v: Vec<Complex64> = (0..6).map(|j| c[(r, j)]).collect();
            NumericForm::one_form(&v)
        };
        let pair = |a: usize| row(a).wedge(&row(a + 3));
        let k = pair(0) + pair(1) + pair(2) * (4.0 * sign.value() * self.t * self.t);
        k * Complex64::new(0.0, 0.5)
    }

    pub fn blocks(&self) -> Result<CurvatureBlocks> {
        blocks_from_frame_curvature(&self.curvature)
    }

    /// `Ω^α_β = ½ R_αβγδ θ^γ∧θ^δ` in chart components.
    pub fn curvature_form(&self, a: usize, b: usize) -> NumericForm {
        let mut out = NumericForm::zero(DIM, 2);
        for c in 0..4 {
            for d in 0..4 {
                let r = self.curvature.get(a, b, c, d);
                if r != 0.0 {
                    out = out + self.theta_form(c).wedge(&self.theta_form(d)) * (0.5 * r);
                }
            }
        }
        out
    }

    /// `ρ(Ω) = ½(Ω^1_3 − Ω^2_4 + i(Ω^2_3 + Ω^1_4))`.
    pub fn rho_form(&self) -> NumericForm {
        let real = self.curvature_form(0, 2) - self.curvature_form(1, 3);
        let imag = self.curvature_form(1, 2) + self.curvature_form(0, 3);
        (real + imag * Complex64::new(0.0, 1.0)) * 0.5
    }

    fn two_form_inner(&self, ginv: &Matrix4<f64>, v: &Matrix4<f64>, w: &Matrix4<f64>) -> f64 {
        0.5 * (ginv * v * ginv).component_mul(w).sum()
    }

    /// `g_t(∂_i, ∂_j) = g(π∂_i, π∂_j) + t² ⟨∇_i N, ∇_j N⟩`.
    pub fn twistor_metric(&self) -> Matrix6<f64> {
        let ginv = self.g.try_inverse().unwrap_or_else(Matrix4::zeros);
        let t2 = self.t * self.t;
        Matrix6::from_fn(|i, j| {
            let base = if i < 4 && j < 4 { self.g[(i, j)] } else { 0.0 };
            base + t2 * self.two_form_inner(&ginv, &self.nabla_n[i], &self.nabla_n[j])
        })
    }

    /// Largest entry of `Gram(θ1..θ4, 2tθ5, 2tθ6) − Id` under [`Self::twistor_metric`].
    pub fn gram_defect(&self) -> f64 {
        let gt = self.twistor_metric();
        let Some(gt_inv) = gt.try_inverse() else {
            return f64::INFINITY;
        };
        let scale = [1.0, 1.0, 1.0, 1.0, 2.0 * self.t, 2.0 * self.t];
        let co = Matrix6::from_fn(|a, j| scale[a] * self.theta[a][j]);
        (co * gt_inv * co.transpose() - Matrix6::identity()).amax()
    }

    /// Fundamental form of `(g_t, 𝕁±)` from `N` and `∇N`:
    /// `√2 N(πX, πY) ± t² n·(c(X) × c(Y))` where `c(X)` are the `E⁺(F)`
    /// components of `∇_X N`.
    pub fn hermitian_form(&self, sign: Sign) -> NumericForm {
        let ginv = self.g.try_inverse().unwrap_or_else(Matrix4::zeros);
        let n_mat: Matrix4<f64> = (0..3).map(|m| self.base_plus[m] * self.n[m]).sum();
        let c: [[f64; 3]; 6] = std::array::from_fn(|j| {
            std::array::from_fn(|m| self.two_form_inner(&ginv, &self.base_plus[m], &self.nabla_n[j]))
        });
        let mut out = NumericForm::zero(DIM, 2);
        for i in 0..6 {
            for j in i + 1..6 {
                let horizontal = if j < 4 { SQRT_2 * n_mat[(i, j)] } else { 0.0 };
                let (u, v) = (c[i], c[j]);
                let cross = [
                    u[1] * v[2] - u[2] * v[1],
                    u[2] * v[0] - u[0] * v[2],
                    u[0] * v[1] - u[1] * v[0],
                ];
                let vertical: f64 = (0..3).map(|m| self.n[m] * cross[m]).sum();
                let val = horizontal + sign.value() * self.t * self.t * vertical;
                out.add_term(&[i, j], cplx(val));
            }
        }
        out
    }
}

/// The complex co-frame at a point and its inverse.
#[derive(Clone, Debug)]
pub struct PhiCoframe {
    c: DMatrix<Complex64>,
    inv: Option<DMatrix<Complex64>>,
}

impl PhiCoframe {
    pub fn to_phi(&self, chart_form: &NumericForm) -> Result<NumericForm> {
        let inv = self
            .inv
            .as_ref()
            .ok_or_else(|| Error::FiberChart("degenerate co-frame".into()))?;
        Ok(chart_form.change_basis(inv))
    }

    pub fn to_chart(&self, phi_form: &NumericForm) -> NumericForm {
        phi_form.change_basis(&self.c)
    }
}

/// The `(p, q)` component of a chart form relative to `𝕁`.
pub fn type_project(
    form: &NumericForm,
    frame: &SectionFrame,
    j: Structure,
    p: usize,
    q: usize,
) -> Result<NumericForm> {
    let co = frame.coframe();
    let phi = co.to_phi(form)?;
    Ok(co.to_chart(&type_component(&phi, j, p, q)))
}

/// Central-difference exterior derivative of a form field at `z`.
pub fn numerical_d<F>(field: F, z: &[f64; 6], h: f64) -> Result<NumericForm>
where
    F: Fn(&[f64; 6]) -> Result<NumericForm>,
{
    let mut out: Option<NumericForm> = None;
    for j in 0..6 {
        let mut zp = *z;
        let mut zm = *z;
        zp[j] += h;
        zm[j] -= h;
        let fp = field(&zp)?;
        let fm = field(&zm)?;
        let deriv = (fp - fm) * (1.0 / (2.0 * h));
        let mut e = [cplx(0.0); 6];
        e[j] = cplx(1.0);
        let term = NumericForm::one_form(&e).wedge(&deriv);
        out = Some(match out {
            None => term,
            Some(acc) => acc + term,
        });
    }
    Ok(out.expect("six directions"))
}

/// A residual measured at `h` and `h/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Convergence {
    pub h: f64,
    pub residual: f64,
    pub residual_half: f64,
    pub ratio: f64,
}

impl Convergence {
    fn measure(h: f64, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let residual = f(h)?;
        let residual_half = f(h / 2.0)?;
        Ok(Self {
            h,
            residual,
            residual_half,
            ratio: residual / residual_half,
        })
    }

    /// `residual < 10 h²`.
    pub fn within(&self) -> bool {
        self.residual < 10.0 * self.h * self.h
    }

    pub fn second_order(&self) -> bool {
        (3.5..=4.5).contains(&self.ratio)
    }
}

fn frame_at(spec: &MetricSpec, z: &[f64; 6], t: f64, opts: OracleOptions) -> Result<SectionFrame> {
    section_frame(spec, TwistorChartPoint::from_coords(z), t, opts)
}

/// Numerical `d𝕂±` against the closed form from the curvature coefficients.
pub fn compare_dk(
    spec: &MetricSpec,
    p: TwistorChartPoint,
    t: f64,
    sign: Sign,
    h: f64,
    opts: OracleOptions,
) -> Result<Convergence> {
    let z = p.coords();
    let centre = section_frame(spec, p, t, opts)?;
    let l = lambda_from_blocks(&centre.blocks()?, t);
    let predicted = centre.coframe().to_chart(&dk_coefficients(&l, sign));
    Convergence::measure(h, |hh| {
        let num = numerical_d(|w| Ok(frame_at(spec, w, t, opts)?.kform(sign)), &z, hh)?;
        Ok(num.max_diff(&predicted))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    /// `dθ^α + ω^α_β ∧ θ^β`.
    pub first: Convergence,
    /// `dφ3 − i(ω^1_2 + ω^3_4) ∧ φ3 − ρ(Ω)`.
    pub phi3: Convergence,
    /// `d(ω^1_2 + ω^3_4) − (4 θ5∧θ6 + Ω^1_2 + Ω^3_4)`, the Chern-form trace.
    pub chern_trace: Convergence,
}

impl StructureReport {
    pub fn within(&self) -> bool {
        self.first.within() && self.phi3.within() && self.chern_trace.within()
    }

    pub fn second_order(&self) -> bool {
        self.first.second_order() && self.phi3.second_order() && self.chern_trace.second_order()
    }
}

pub fn verify_structure_equations(
    spec: &MetricSpec,
    p: TwistorChartPoint,
    t: f64,
    h: f64,
    opts: OracleOptions,
) -> Result<StructureReport> {
    let z = p.coords();
    let c = section_frame(spec, p, t, opts)?;
    let i = Complex64::new(0.0, 1.0);

    let first_rhs: Vec<NumericForm> = (0..4)
        .map(|a| {
            let mut acc = NumericForm::zero(DIM, 2);
            for b in 0..4 {
                acc = acc - c.omega_form(a, b).wedge(&c.theta_form(b));
            }
            acc
        })
        .collect();
    let first = Convergence::measure(h, |hh| {
        let mut worst: f64 = 0.0;
        for (a, rhs) in first_rhs.iter().enumerate() {
            let d = numerical_d(|w| Ok(frame_at(spec, w, t, opts)?.theta_form(a)), &z, hh)?;
            worst = worst.max(d.max_diff(rhs));
        }
        Ok(worst)
    })?;

    let phi3 = |f: &SectionFrame| f.theta_form(4) + f.theta_form(5) * i;
    let conn = c.omega_form(0, 1) + c.omega_form(2, 3);
    let phi3_rhs = (conn.clone() * i).wedge(&phi3(&c)) + c.rho_form();
    let phi3_conv = Convergence::measure(h, |hh| {
        let d = numerical_d(|w| Ok(phi3(&frame_at(spec, w, t, opts)?)), &z, hh)?;
        Ok(d.max_diff(&phi3_rhs))
    })?;

    let trace_rhs = c.theta_form(4).wedge(&c.theta_form(5)) * 4.0 + c.curvature_form(0, 1) + c.curvature_form(2, 3);
    let chern_trace = Convergence::measure(h, |hh| {
        let d = numerical_d(
            |w| {
                let f = frame_at(spec, w, t, opts)?;
                Ok(f.omega_form(0, 1) + f.omega_form(2, 3))
            },
            &z,
            hh,
        )?;
        Ok(d.max_diff(&trace_rhs))
    })?;

    Ok(StructureReport {
        first,
        phi3: phi3_conv,
        chern_trace,
    })
}

/// `𝕂±` from the co-frame against the form assembled from `N` and `∇N`.
pub fn kahler_compatibility_defect(frame: &SectionFrame, sign: Sign) -> f64 {
    frame.kform(sign).max_diff(&frame.hermitian_form(sign))
}

/// Numerical `∂∂̄𝕂₊` at `p` on the φ co-basis.
pub fn ddbar_kplus_numeric(
    spec: &MetricSpec,
    p: TwistorChartPoint,
    t: f64,
    h: f64,
    opts: OracleOptions,
) -> Result<NumericForm> {
    let jp = Structure::JPlus;
    let dbar = |w: &[f64; 6]| -> Result<NumericForm> {
        let f = frame_at(spec, w, t, opts)?;
        let dk = numerical_d(|u| Ok(frame_at(spec, u, t, opts)?.kform(Sign::Plus)), w, h)?;
        type_project(&dk, &f, jp, 1, 2)
    };
    let z = p.coords();
    let outer = numerical_d(dbar, &z, h)?;
    let c = section_frame(spec, p, t, opts)?;
    let phi = c.coframe().to_phi(&outer)?;
    Ok(type_component(&phi, jp, 2, 2))
}

/// Numerical `∂∂̄𝕂₊` against the anti-self-dual Einstein closed form.
pub fn compare_ddbar_kplus(
    spec: &MetricSpec,
    p: TwistorChartPoint,
    t: f64,
    h: f64,
    opts: OracleOptions,
) -> Result<Convergence> {
    let c = section_frame(spec, p, t, opts)?;
    let s = c.blocks()?.scalar();
    let predicted = ddbar_kplus_asd_einstein(s, t);
    Convergence::measure(h, |hh| Ok(ddbar_kplus_numeric(spec, p, t, hh, opts)?.max_diff(&predicted)))
}
