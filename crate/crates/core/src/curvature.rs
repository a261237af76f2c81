//! Levi-Civita connection, Riemann tensor and oriented orthonormal frames.
//!
//! Sign convention: `R_ijkl = g(R(∂k, ∂l)∂j, ∂i)`, so a round sphere has
//! `R_1212 > 0` and positive scalar curvature.

use nalgebra::Matrix4;

use crate::dsl::{eval_jet2, jet_values, MetricJets, MetricSpec, Orientation, Real};
use crate::error::{Error, Result};

pub type Tensor3 = [[[f64; 4]; 4]; 4];
pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

const ZERO4: Tensor4 = [[[[0.0; 4]; 4]; 4]; 4];

/// Christoffel symbols `gamma[k][i][j] = Γ^k_ij` and their derivatives
/// `dgamma[k][i][j][l] = ∂_l Γ^k_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    pub gamma: Tensor3,
    pub dgamma: Tensor4,
}

pub fn christoffel(jets: &MetricJets) -> Result<Christoffel> {
    let g = jet_values(jets);
    let ginv = g.try_inverse().ok_or(Error::NotPositiveDefinite {
        min_eigenvalue: 0.0,
    })?;
    let dg = |i: usize, j: usize, k: usize| jets[i][j].grad[k];
    let ddg = |i: usize, j: usize, k: usize, l: usize| jets[i][j].hess(k, l);

    // ∂_l g^{km} = -g^{ka} ∂_l g_ab g^{bm}
    let mut dginv = [[[0.0; 4]; 4]; 4];
    for (l, dl) in dginv.iter_mut().enumerate() {
        let mut dgl = Matrix4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                dgl[(a, b)] = dg(a, b, l);
            }
        }
        let m = -(ginv * dgl * ginv);
        for k in 0..4 {
            for n in 0..4 {
                dl[k][n] = m[(k, n)];
            }
        }
    }

    // first kind: [ij, m] = ½(∂_i g_jm + ∂_j g_im − ∂_m g_ij) and its derivative
    let mut first = [[[0.0; 4]; 4]; 4];
    let mut dfirst = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            for m in 0..4 {
                first[i][j][m] = 0.5 * (dg(j, m, i) + dg(i, m, j) - dg(i, j, m));
                for l in 0..4 {
                    dfirst[i][j][m][l] =
                        0.5 * (ddg(j, m, i, l) + ddg(i, m, j, l) - ddg(i, j, m, l));
                }
            }
        }
    }

    let mut gamma = [[[0.0; 4]; 4]; 4];
    let mut dgamma = ZERO4;
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut v = 0.0;
                for m in 0..4 {
                    v += ginv[(k, m)] * first[i][j][m];
                }
                gamma[k][i][j] = v;
                for l in 0..4 {
                    let mut d = 0.0;
                    for m in 0..4 {
                        d += dginv[l][k][m] * first[i][j][m] + ginv[(k, m)] * dfirst[i][j][m][l];
                    }
                    dgamma[k][i][j][l] = d;
                }
            }
        }
    }
    Ok(Christoffel { gamma, dgamma })
}

/// Fully covariant Riemann tensor `R_ijkl`.
pub fn riemann_coord(ch: &Christoffel, g: &Matrix4<f64>) -> Tensor4 {
    let (gm, dgm) = (&ch.gamma, &ch.dgamma);
    // R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ^i_km Γ^m_lj − Γ^i_lm Γ^m_kj
    let mut up = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut v = dgm[i][l][j][k] - dgm[i][k][j][l];
                    for m in 0..4 {
                        v += gm[i][k][m] * gm[m][l][j] - gm[i][l][m] * gm[m][k][j];
                    }
                    up[i][j][k][l] = v;
                }
            }
        }
    }
    let mut out = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[i][j][k][l] = (0..4).map(|m| g[(i, m)] * up[m][j][k][l]).sum();
                }
            }
        }
    }
    out
}

/// `s = g^ik g^jl R_ijkl`.
pub fn scalar_curvature(riemann: &Tensor4, ginv: &Matrix4<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s += ginv[(i, k)] * ginv[(j, l)] * riemann[i][j][k][l];
                }
            }
        }
    }
    s
}

/// Frame vectors as columns in the coordinate basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthonormalFrame {
    pub e: Matrix4<f64>,
}

impl OrthonormalFrame {
    /// Right action of a 4x4 rotation: `e ↦ e·a`.
    pub fn rotated(&self, a: &Matrix4<f64>) -> Self {
        Self { e: self.e * a }
    }

    /// Largest entry of `eᵀ g e − Id`.
    pub fn orthonormality_defect(&self, g: &Matrix4<f64>) -> f64 {
        (self.e.transpose() * g * self.e - Matrix4::identity()).amax()
    }
}

/// Gram–Schmidt of the coordinate basis in index order, generic over the
/// scalar so that jets carry frame derivatives. Returns columns `e[α][i]`.
pub fn gram_schmidt<T: Real>(g: &[[T; 4]; 4]) -> Result<[[T; 4]; 4]> {
    let inner = |u: &[T; 4], v: &[T; 4]| {
        let mut acc = T::from_f64(0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc = acc + u[i] * g[i][j] * v[j];
            }
        }
        acc
    };
    let mut cols = [[T::from_f64(0.0); 4]; 4];
    for a in 0..4 {
        let mut v = [T::from_f64(0.0); 4];
        v[a] = T::from_f64(1.0);
        for b in 0..a {
            let c = inner(&v, &cols[b]);
            for i in 0..4 {
                v[i] = v[i] - c * cols[b][i];
            }
        }
        let n2 = inner(&v, &v);
        if !(n2.value() > 0.0) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: n2.value(),
            });
        }
        let inv = T::from_f64(1.0) / n2.sqrt();
        for i in 0..4 {
            v[i] = v[i] * inv;
        }
        cols[a] = v;
    }
    Ok(cols)
}

/// Apply the orientation rule to Gram–Schmidt columns: negate the fourth
/// vector when the determinant sign disagrees with `orientation`.
pub fn orient<T: Real>(mut cols: [[T; 4]; 4], orientation: Orientation) -> [[T; 4]; 4] {
    let det = Matrix4::from_fn(|i, a| cols[a][i].value()).determinant();
    let flip = match orientation {
        Orientation::Standard => det < 0.0,
        Orientation::Reversed => det > 0.0,
    };
    if flip {
        for v in cols[3].iter_mut() {
            *v = -*v;
        }
    }
    cols
}

pub fn build_frame(g: &Matrix4<f64>, orientation: Orientation) -> Result<OrthonormalFrame> {
    let rows: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| g[(i, j)]));
    let cols = orient(gram_schmidt(&rows)?, orientation);
    Ok(OrthonormalFrame {
        e: Matrix4::from_fn(|i, a| cols[a][i]),
    })
}

/// Orthonormal-frame curvature components `R_αβγδ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCurvature {
    pub r: Tensor4,
}

impl FrameCurvature {
    pub fn zero() -> Self {
        Self { r: ZERO4 }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut r = ZERO4;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        r[a][b][c][d] = f(a, b, c, d);
                    }
                }
            }
        }
        Self { r }
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.r[a][b][c][d]
    }

    /// Frobenius norm over all four indices.
    pub fn norm(&self) -> f64 {
        self.r.iter().flatten().flatten().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `Σ_{α<β} 2 R_αβαβ`.
    pub fn scalar(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in a + 1..4 {
                s += 2.0 * self.r[a][b][a][b];
            }
        }
        s
    }

    /// Largest violation of the pair antisymmetries and pair exchange.
    pub fn symmetry_defect(&self) -> f64 {
        let r = &self.r;
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = r[a][b][c][d];
                        worst = worst
                            .max((v + r[b][a][c][d]).abs())
                            .max((v + r[a][b][d][c]).abs())
                            .max((v - r[c][d][a][b]).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn bianchi_defect(&self) -> f64 {
        let r = &self.r;
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        worst = worst.max((r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Components in the rotated frame `e·a`.
    pub fn rotated(&self, a: &Matrix4<f64>) -> Self {
        transform(&self.r, a)
    }
}

fn transform(t: &Tensor4, e: &Matrix4<f64>) -> FrameCurvature {
    // contract one index at a time
    let mut cur = *t;
    for slot in 0..4 {
        let mut next = ZERO4;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut v = 0.0;
                        for m in 0..4 {
                            let mut src = idx;
                            src[slot] = m;
                            v += cur[src[0]][src[1]][src[2]][src[3]] * e[(m, idx[slot])];
                        }
                        next[a][b][c][d] = v;
                    }
                }
            }
        }
        cur = next;
    }
    FrameCurvature { r: cur }
}

/// `R_αβγδ = R_ijkl e^i_α e^j_β e^k_γ e^l_δ`.
pub fn frame_curvature(riemann: &Tensor4, frame: &OrthonormalFrame) -> FrameCurvature {
    transform(riemann, &frame.e)
}

/// Metric data at one chart point.
#[derive(Clone, Debug)]
pub struct ChartPoint {
    pub coords: [f64; 4],
    pub metric: MetricJets,
    pub orientation: Orientation,
}

impl ChartPoint {
    pub fn new(spec: &MetricSpec, coords: [f64; 4]) -> Result<Self> {
        if !spec.contains(&coords) {
            return Err(Error::OutsideDomain {
                point: coords.to_vec(),
            });
        }
        Ok(Self {
            coords,
            metric: eval_jet2(spec, &coords)?,
            orientation: spec.orientation(),
        })
    }

    pub fn geometry(&self) -> Result<PointGeometry> {
        let g = jet_values(&self.metric);
        let ginv = g.try_inverse().ok_or(Error::NotPositiveDefinite {
            min_eigenvalue: 0.0,
        })?;
        let ch = christoffel(&self.metric)?;
        let riemann = riemann_coord(&ch, &g);
        let frame = build_frame(&g, self.orientation)?;
        let curvature = frame_curvature(&riemann, &frame);
        Ok(PointGeometry {
            coords: self.coords,
            g,
            scalar: scalar_curvature(&riemann, &ginv),
            christoffel: ch,
            riemann,
            frame,
            curvature,
        })
    }
}

/// Everything the curvature engine derives at a point.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub coords: [f64; 4],
    pub g: Matrix4<f64>,
    pub christoffel: Christoffel,
    pub riemann: Tensor4,
    /// Coordinate-contraction scalar curvature.
    pub scalar: f64,
    pub frame: OrthonormalFrame,
    pub curvature: FrameCurvature,
}

pub fn analyze_point(spec: &MetricSpec, coords: [f64; 4]) -> Result<PointGeometry> {
    ChartPoint::new(spec, coords)?.geometry()
}
