//! Symmetric tensors stored by exponent multi-indices.
//!
//! A tensor of order `d` on `n` variables has one coordinate `t_a` per
//! exponent vector `a` with `|a| = d`. The coordinate is the tensor entry,
//! so the associated polynomial is `sum_a multinomial(d; a) * t_a * x^a`.
//! Exponent vectors are ordered lexicographically, descending in the first
//! variable: `(d,0,..,0)` comes first and `(0,..,0,d)` last.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{FradecoError, Result};

pub type Exponent = Vec<u32>;

/// `binom(n, k)` in 128-bit integers. Callers stay far below overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of exponent vectors of length `n` summing to `d`.
pub fn basis_len(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial(n + d - 1, d) as usize
}

/// `d! / prod(a_i!)`.
pub fn multinomial(a: &[u32]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &ai in a {
        total += ai as usize;
        acc *= binomial(total, ai as usize);
    }
    acc
}

/// All exponent vectors of length `n` and total degree `d`, in the crate's
/// lexicographic order.
pub fn index_basis(n: usize, d: usize) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(basis_len(n, d));
    let mut current = vec![0u32; n];
    fill_basis(0, d as u32, &mut current, &mut out);
    out
}

fn fill_basis(pos: usize, rem: u32, current: &mut Exponent, out: &mut Vec<Exponent>) {
    let n = current.len();
    if n == 0 {
        if rem == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == n - 1 {
        current[pos] = rem;
        out.push(current.clone());
        return;
    }
    for v in (0..=rem).rev() {
        current[pos] = v;
        fill_basis(pos + 1, rem - v, current, out);
    }
    current[pos] = 0;
}

/// Position of `a` in [`index_basis`]`(a.len(), |a|)`.
pub fn exponent_rank(a: &[u32]) -> usize {
    let n = a.len();
    let mut rem: u32 = a.iter().sum();
    let mut rank = 0usize;
    for (i, &ai) in a.iter().enumerate() {
        let tail = n - i - 1;
        for v in (ai + 1)..=rem {
            rank += basis_len(tail, (rem - v) as usize);
        }
        rem -= ai;
    }
    rank
}

/// Shared per-(n, d) index data.
#[derive(Debug, PartialEq)]
pub struct Basis {
    pub n: usize,
    pub d: usize,
    pub exponents: Vec<Exponent>,
    pub multinomials: Vec<f64>,
}

impl Basis {
    pub fn new(n: usize, d: usize) -> Self {
        let exponents = index_basis(n, d);
        let multinomials = exponents.iter().map(|a| multinomial(a) as f64).collect();
        Basis {
            n,
            d,
            exponents,
            multinomials,
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// `powers[i][k] = x_i^k` for `k = 0..=d`.
fn power_table(x: &[f64], d: usize) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xi| {
            let mut p = Vec::with_capacity(d + 1);
            let mut acc = 1.0;
            for _ in 0..=d {
                p.push(acc);
                acc *= xi;
            }
            p
        })
        .collect()
}

/// A symmetric tensor of order `d` on `n` variables.
#[derive(Debug, Clone)]
pub struct SymTensor {
    basis: Arc<Basis>,
    coords: Vec<f64>,
}

impl PartialEq for SymTensor {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.d() == other.d() && self.coords == other.coords
    }
}

impl SymTensor {
    pub fn new(n: usize, d: usize, coords: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(FradecoError::InvalidArgument(format!(
                "tensor needs n >= 1 and d >= 1, got n = {n}, d = {d}"
            )));
        }
        let basis = Basis::new(n, d);
        if coords.len() != basis.len() {
            return Err(FradecoError::ShapeMismatch(format!(
                "expected {} coordinates for n = {n}, d = {d}, got {}",
                basis.len(),
                coords.len()
            )));
        }
        Ok(SymTensor {
            basis: Arc::new(basis),
            coords,
        })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        SymTensor::new(n, d, vec![0.0; basis_len(n, d)])
    }

    fn with_basis(basis: Arc<Basis>, coords: Vec<f64>) -> Self {
        SymTensor { basis, coords }
    }

    /// Binary tensor from `t_0..t_d`, where `t_i` is the coordinate of the
    /// exponent `(i, d - i)`.
    pub fn from_binary(t: &[f64]) -> Result<Self> {
        if t.len() < 2 {
            return Err(FradecoError::InvalidArgument(
                "binary coordinates need d >= 1".into(),
            ));
        }
        let d = t.len() - 1;
        let coords = (0..=d).map(|k| t[d - k]).collect();
        SymTensor::new(2, d, coords)
    }

    /// `t_0..t_d` for a binary tensor, `t_i` being the coordinate of `(i, d - i)`.
    pub fn binary_coords(&self) -> Result<Vec<f64>> {
        if self.n() != 2 {
            return Err(FradecoError::ShapeMismatch(format!(
                "binary coordinates need n = 2, got n = {}",
                self.n()
            )));
        }
        let d = self.d();
        Ok((0..=d).map(|i| self.coords[d - i]).collect())
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn d(&self) -> usize {
        self.basis.d
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.basis.exponents
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn get(&self, a: &[u32]) -> f64 {
        self.coords[exponent_rank(a)]
    }

    pub fn scaled(&self, c: f64) -> SymTensor {
        SymTensor::with_basis(
            self.basis.clone(),
            self.coords.iter().map(|t| c * t).collect(),
        )
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|t| t * t).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    /// Max-norm distance between coordinate vectors.
    pub fn max_diff(&self, other: &SymTensor) -> Result<f64> {
        if self.n() != other.n() || self.d() != other.d() {
            return Err(FradecoError::ShapeMismatch(format!(
                "tensor shapes (n={}, d={}) and (n={}, d={})",
                self.n(),
                self.d(),
                other.n(),
                other.d()
            )));
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Polynomial value `sum_a multinomial(d; a) t_a x^a`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n(), "point dimension must equal n");
        let pw = power_table(x, self.d());
        self.basis
            .exponents
            .iter()
            .zip(&self.basis.multinomials)
            .zip(&self.coords)
            .map(|((a, m), t)| {
                let mono: f64 = a.iter().enumerate().map(|(i, &e)| pw[i][e as usize]).product();
                m * t * mono
            })
            .sum()
    }

    /// Exact partial derivatives of [`SymTensor::evaluate`].
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n, "point dimension must equal n");
        let pw = power_table(x, self.d());
        let mut g = vec![0.0; n];
        for ((a, m), t) in self
            .basis
            .exponents
            .iter()
            .zip(&self.basis.multinomials)
            .zip(&self.coords)
        {
            if *t == 0.0 {
                continue;
            }
            let c = m * t;
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                let mut mono = a[i] as f64;
                for (k, &e) in a.iter().enumerate() {
                    let e = if k == i { e - 1 } else { e };
                    mono *= pw[k][e as usize];
                }
                g[i] += c * mono;
            }
        }
        g
    }

    /// Catalecticant (flattening) with rows indexed by degree-`k` exponents
    /// and columns by degree-`(d-k)` exponents; the entry is `t_{b+c}`.
    pub fn catalecticant(&self, k: usize) -> Result<DMatrix<f64>> {
        let d = self.d();
        if k == 0 || k >= d {
            return Err(FradecoError::InvalidArgument(format!(
                "catalecticant split k = {k} must satisfy 1 <= k <= d - 1 = {}",
                d.saturating_sub(1)
            )));
        }
        let n = self.n();
        let rows = index_basis(n, k);
        let cols = index_basis(n, d - k);
        let mut sum = vec![0u32; n];
        Ok(DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            for (s, (b, c)) in sum.iter_mut().zip(rows[i].iter().zip(&cols[j])) {
                *s = b + c;
            }
            self.coords[exponent_rank(&sum)]
        }))
    }
}

/// `t_a = sum_j weights_j * prod_i V_ij^{a_i}` for the columns of `v`.
pub fn synthesize(v: &DMatrix<f64>, weights: &[f64], d: usize) -> Result<SymTensor> {
    let n = v.nrows();
    let r = v.ncols();
    if weights.len() != r {
        return Err(FradecoError::ShapeMismatch(format!(
            "{} weights for {r} frame vectors",
            weights.len()
        )));
    }
    if n == 0 || d == 0 {
        return Err(FradecoError::InvalidArgument(format!(
            "synthesis needs n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    let basis = Arc::new(Basis::new(n, d));
    let mut coords = vec![0.0; basis.len()];
    for j in 0..r {
        let col: Vec<f64> = v.column(j).iter().copied().collect();
        let pw = power_table(&col, d);
        let w = weights[j];
        for (c, a) in coords.iter_mut().zip(&basis.exponents) {
            let mono: f64 = a.iter().enumerate().map(|(i, &e)| pw[i][e as usize]).product();
            *c += w * mono;
        }
    }
    Ok(SymTensor::with_basis(basis, coords))
}

/// Derivative of [`synthesize`] with respect to `(vec(V), weights)`.
///
/// Columns are ordered column-major in `V` (entry `(i, j)` at `j * n + i`)
/// followed by the `r` weights; rows follow the coordinate order.
pub fn synthesize_jacobian(v: &DMatrix<f64>, weights: &[f64], d: usize) -> DMatrix<f64> {
    let n = v.nrows();
    let r = v.ncols();
    let basis = index_basis(n, d);
    let mut jac = DMatrix::zeros(basis.len(), n * r + r);
    for j in 0..r {
        let col: Vec<f64> = v.column(j).iter().copied().collect();
        let pw = power_table(&col, d);
        for (row, a) in basis.iter().enumerate() {
            let mono: f64 = a.iter().enumerate().map(|(i, &e)| pw[i][e as usize]).product();
            jac[(row, n * r + j)] = mono;
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                let mut dm = weights[j] * a[i] as f64;
                for (k, &e) in a.iter().enumerate() {
                    let e = if k == i { e - 1 } else { e };
                    dm *= pw[k][e as usize];
                }
                jac[(row, j * n + i)] = dm;
            }
        }
    }
    jac
}
