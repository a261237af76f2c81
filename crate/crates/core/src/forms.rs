//! Constant-coefficient exterior algebra over a small co-basis.
//!
//! A basis monomial `e^{i1} ∧ … ∧ e^{ik}` with `i1 < … < ik` is stored at
//! the bitmask `Σ 2^{ij}`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<Complex64>,
}

/// Sort `indices` into increasing order, returning the mask and permutation
/// sign, or `None` on a repeated index.
pub fn canonical(indices: &[usize]) -> Option<(usize, f64)> {
    let mut mask = 0usize;
    let mut sign = 1.0;
    for (pos, &i) in indices.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        // inversions with earlier entries that are larger
        let larger_before = indices[..pos].iter().filter(|&&j| j > i).count();
        if larger_before % 2 == 1 {
            sign = -sign;
        }
        mask |= 1 << i;
    }
    Some((mask, sign))
}

pub fn mask_indices(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `e^A ∧ e^B` relative to the sorted monomial of `A ∪ B`.
fn merge_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn det(mut m: Vec<Complex64>, n: usize) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x * n + col].norm().total_cmp(&m[y * n + col].norm()))
            .unwrap_or(col);
        if m[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            d = -d;
        }
        let p = m[col * n + col];
        d *= p;
        for row in col + 1..n {
            let f = m[row * n + col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[row * n + k] -= f * v;
            }
        }
    }
    d
}

impl NumericForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM && degree <= dim, "form dimension out of range");
        Self {
            dim,
            degree,
            coeffs: vec![Complex64::new(0.0, 0.0); 1 << dim],
        }
    }

    /// `c · e^{i1} ∧ … ∧ e^{ik}` with indices in any order.
    pub fn monomial(dim: usize, indices: &[usize], c: Complex64) -> Self {
        let mut f = Self::zero(dim, indices.len());
        f.add_term(indices, c);
        f
    }

    /// The scalar `c` as a 0-form.
    pub fn scalar(dim: usize, c: Complex64) -> Self {
        Self::monomial(dim, &[], c)
    }

    /// `Σ c_i e^i`.
    pub fn one_form(coeffs: &[Complex64]) -> Self {
        let mut f = Self::zero(coeffs.len(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.coeffs[1 << i] = *c;
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add_term(&mut self, indices: &[usize], c: Complex64) {
        assert_eq!(indices.len(), self.degree, "degree mismatch");
        assert!(indices.iter().all(|&i| i < self.dim), "index out of range");
        if let Some((mask, sign)) = canonical(indices) {
            self.coeffs[mask] += c * sign;
        }
    }

    /// Coefficient of `e^{i1} ∧ … ∧ e^{ik}` in the given index order.
    pub fn get(&self, indices: &[usize]) -> Complex64 {
        match canonical(indices) {
            Some((mask, sign)) if indices.len() == self.degree => self.coeffs[mask] * sign,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn get_mask(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn set_mask(&mut self, mask: usize, c: Complex64) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        self.coeffs[mask] = c;
    }

    /// Masks of all basis monomials of this degree, ascending.
    pub fn masks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..1usize << self.dim).filter(move |m| m.count_ones() as usize == self.degree)
    }

    /// Nonzero terms in lexicographic order of the index lists.
    pub fn terms(&self) -> Vec<(Vec<usize>, Complex64)> {
        let mut out: Vec<_> = self
            .masks()
            .filter(|&m| self.coeffs[m] != Complex64::new(0.0, 0.0))
            .map(|m| (mask_indices(m), self.coeffs[m]))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zero(self.dim, (self.degree + other.degree).min(self.dim));
        if self.degree + other.degree > self.dim {
            return out;
        }
        for a in self.masks() {
            let x = self.coeffs[a];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in other.masks() {
                if a & b != 0 {
                    continue;
                }
                let y = other.coeffs[b];
                if y == Complex64::new(0.0, 0.0) {
                    continue;
                }
                out.coeffs[a | b] += x * y * merge_sign(a, b);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|v| f(*v)).collect(),
        }
    }

    /// Keep only the monomials accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = self.clone();
        for m in 0..out.coeffs.len() {
            if !keep(m) {
                out.coeffs[m] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Complex conjugate when the co-basis is `(f^1..f^n, f̄^1..f̄^n)`:
    /// conjugates coefficients and swaps each generator with its partner.
    pub fn conjugate_paired(&self) -> Self {
        assert!(self.dim.is_multiple_of(2), "paired conjugation needs an even dimension");
        let half = self.dim / 2;
        let mut out = Self::zero(self.dim, self.degree);
        for m in self.masks() {
            let c = self.coeffs[m];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let swapped: Vec<usize> = mask_indices(m)
                .into_iter()
                .map(|i| if i < half { i + half } else { i - half })
                .collect();
            out.add_term(&swapped, c.conj());
        }
        out
    }

    /// Rewrite in a new co-basis given `e^i = Σ_a m[(i, a)] f^a`.
    pub fn change_basis(&self, m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), self.dim, "basis change rows");
        let new_dim = m.ncols();
        let k = self.degree;
        let mut out = Self::zero(new_dim, k);
        let targets: Vec<usize> = out.masks().collect();
        for i_mask in self.masks() {
            let c = self.coeffs[i_mask];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let rows = mask_indices(i_mask);
            for &j_mask in &targets {
                let cols = mask_indices(j_mask);
                let sub: Vec<Complex64> = rows
                    .iter()
                    .flat_map(|&r| cols.iter().map(move |&q| m[(r, q)]))
                    .collect();
                out.coeffs[j_mask] += c * det(sub, k);
            }
        }
        out
    }

    /// Evaluate on `k` vectors given by their components in the dual basis.
    pub fn evaluate(&self, vectors: &[Vec<Complex64>]) -> Complex64 {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut acc = Complex64::new(0.0, 0.0);
        for m in self.masks() {
            let c = self.coeffs[m];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let idx = mask_indices(m);
            let sub: Vec<Complex64> = vectors
                .iter()
                .flat_map(|v| idx.iter().map(move |&i| v[i]))
                .collect();
            acc += c * det(sub, self.degree);
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "shape mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part of any coefficient.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

impl Add for &NumericForm {
    type Output = NumericForm;
    fn add(self, rhs: &NumericForm) -> NumericForm {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree), "shape mismatch");
        NumericForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &NumericForm {
    type Output = NumericForm;
    fn sub(self, rhs: &NumericForm) -> NumericForm {
        self + &(-rhs)
    }
}

impl Neg for &NumericForm {
    type Output = NumericForm;
    fn neg(self) -> NumericForm {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Add for NumericForm {
    type Output = NumericForm;
    fn add(self, rhs: NumericForm) -> NumericForm {
        &self + &rhs
    }
}

impl Sub for NumericForm {
    type Output = NumericForm;
    fn sub(self, rhs: NumericForm) -> NumericForm {
        &self - &rhs
    }
}

impl Mul<Complex64> for NumericForm {
    type Output = NumericForm;
    fn mul(self, rhs: Complex64) -> NumericForm {
        self.scale(rhs)
    }
}

impl Mul<f64> for NumericForm {
    type Output = NumericForm;
    fn mul(self, rhs: f64) -> NumericForm {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
