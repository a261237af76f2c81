//! Second-order forward jets in four variables.

use std::ops::{Add, Div, Mul, Neg, Sub};

const fn tri(i: usize, j: usize) -> usize {
    // row-major upper triangle of a 4x4 matrix
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * 4 - i * (i + 1) / 2 + j
}

/// Value, gradient and Hessian of a scalar function of the four chart
/// coordinates. The Hessian is stored as its upper triangle, so it is
/// symmetric by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 4],
    hess: [f64; 10],
}

impl Jet2 {
    pub const fn constant(value: f64) -> Self {
        Self {
            value,
            grad: [0.0; 4],
            hess: [0.0; 10],
        }
    }

    /// The coordinate function `x_{index+1}` evaluated at `value`.
    pub fn variable(index: usize, value: f64) -> Self {
        let mut jet = Self::constant(value);
        jet.grad[index] = 1.0;
        jet
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[tri(i, j)]
    }

    pub fn hessian(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.hess(i, j);
            }
        }
        out
    }

    /// Compose with a scalar function given its value and first two derivatives.
    pub fn chain(&self, f: f64, df: f64, d2f: f64) -> Self {
        let mut out = Self::constant(f);
        for i in 0..4 {
            out.grad[i] = df * self.grad[i];
        }
        for i in 0..4 {
            for j in i..4 {
                let k = tri(i, j);
                out.hess[k] = df * self.hess[k] + d2f * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    pub fn recip(&self) -> Self {
        let v = self.value;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn powi(&self, n: u32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => *self,
            _ => {
                let v = self.value;
                let nf = n as f64;
                self.chain(
                    v.powi(n as i32),
                    nf * v.powi(n as i32 - 1),
                    nf * (nf - 1.0) * v.powi(n as i32 - 2),
                )
            }
        }
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(&self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Self {
        let v = self.value;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn sqrt(&self) -> Self {
        let r = self.value.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: Jet2) -> Jet2 {
        self.value += rhs.value;
        for i in 0..4 {
            self.grad[i] += rhs.grad[i];
        }
        for k in 0..10 {
            self.hess[k] += rhs.hess[k];
        }
        self
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(mut self) -> Jet2 {
        self.value = -self.value;
        for g in &mut self.grad {
            *g = -*g;
        }
        for h in &mut self.hess {
            *h = -*h;
        }
        self
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let (a, b) = (self, rhs);
        let mut out = Jet2::constant(a.value * b.value);
        for i in 0..4 {
            out.grad[i] = a.value * b.grad[i] + b.value * a.grad[i];
        }
        for i in 0..4 {
            for j in i..4 {
                let k = tri(i, j);
                out.hess[k] = a.value * b.hess[k]
                    + b.value * a.hess[k]
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i];
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

/// Scalar arithmetic shared by plain floats and jets, so expression
/// evaluation and Gram–Schmidt can run over either.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn value(&self) -> f64;
    fn variable(index: usize, value: f64) -> Self;
    fn powi(self, n: u32) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn variable(_index: usize, value: f64) -> Self {
        value
    }
    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
}

impl Real for Jet2 {
    fn from_f64(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn variable(index: usize, value: f64) -> Self {
        Jet2::variable(index, value)
    }
    fn powi(self, n: u32) -> Self {
        Jet2::powi(&self, n)
    }
    fn sin(self) -> Self {
        Jet2::sin(&self)
    }
    fn cos(self) -> Self {
        Jet2::cos(&self)
    }
    fn tan(self) -> Self {
        Jet2::tan(&self)
    }
    fn exp(self) -> Self {
        Jet2::exp(&self)
    }
    fn ln(self) -> Self {
        Jet2::ln(&self)
    }
    fn sqrt(self) -> Self {
        Jet2::sqrt(&self)
    }
    fn sinh(self) -> Self {
        Jet2::sinh(&self)
    }
    fn cosh(self) -> Self {
        Jet2::cosh(&self)
    }
}
