//! Chebyshev series on [-1, 1] and their tensor products.
//!
//! Besides plain evaluation, every series can evaluate increments
//! `p(z + dz) - p(z)` through a recurrence on `T_k(z + dz) - T_k(z)`, which keeps
//! full relative accuracy when `dz` is tiny. The Hénon renormalization relies on
//! this to carry perturbations far below machine epsilon of the leading part.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// First-kind Chebyshev nodes `cos(pi (j + 1/2) / n)`, in decreasing order.
pub fn nodes(n: usize) -> Vec<f64> {
    (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect()
}

/// Interpolation coefficients from values sampled at [`nodes`]`(n)`.
pub fn fit(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut c = vec![0.0; n];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, v) in values.iter().enumerate() {
            s += v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos();
        }
        *ck = 2.0 * s / n as f64;
    }
    if n > 0 {
        c[0] *= 0.5;
    }
    c
}

/// Clenshaw evaluation of `sum c_k T_k(z)`.
pub fn eval(c: &[f64], z: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * z * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    match c.first() {
        Some(&c0) => z * b1 - b2 + c0,
        None => 0.0,
    }
}

/// Coefficients of the derivative series.
pub fn derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n];
    for k in (1..n).rev() {
        let next = if k + 1 < n { d[k + 1] } else { 0.0 };
        d[k - 1] = next + 2.0 * k as f64 * c[k];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

/// `p(z + dz) - p(z)` with relative accuracy in `dz`.
pub fn eval_increment(c: &[f64], z: f64, dz: f64) -> f64 {
    if c.len() < 2 || dz == 0.0 {
        return 0.0;
    }
    let zb = z + dz;
    // t_prev = T_{k-1}(z), t_cur = T_k(z); d_prev, d_cur the matching increments
    let mut t_prev = 1.0;
    let mut t_cur = z;
    let mut d_prev = 0.0;
    let mut d_cur = dz;
    let mut acc = c[1] * d_cur;
    for &ck in &c[2..] {
        let d_next = 2.0 * zb * d_cur + 2.0 * dz * t_cur - d_prev;
        let t_next = 2.0 * z * t_cur - t_prev;
        acc += ck * d_next;
        d_prev = d_cur;
        d_cur = d_next;
        t_prev = t_cur;
        t_cur = t_next;
    }
    acc
}

/// Values `T_0(z), ..., T_{n-1}(z)`.
pub fn basis_values(n: usize, z: f64) -> Vec<f64> {
    let mut t = vec![0.0; n];
    if n > 0 {
        t[0] = 1.0;
    }
    if n > 1 {
        t[1] = z;
    }
    for k in 2..n {
        t[k] = 2.0 * z * t[k - 1] - t[k - 2];
    }
    t
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Cheb2Data {
    nx: usize,
    ny: usize,
    half_width: f64,
    coeffs: Vec<f64>,
}

impl From<Cheb2Data> for Cheb2 {
    fn from(d: Cheb2Data) -> Self {
        Cheb2::from_coeffs(d.nx, d.ny, d.half_width, d.coeffs)
    }
}

impl From<Cheb2> for Cheb2Data {
    fn from(c: Cheb2) -> Self {
        Cheb2Data { nx: c.nx, ny: c.ny, half_width: c.half_width, coeffs: c.coeffs }
    }
}

/// Tensor Chebyshev series on the box `[-w, w]^2`, `sum c_ij T_i(x/w) T_j(y/w)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(from = "Cheb2Data", into = "Cheb2Data")]
pub struct Cheb2 {
    pub nx: usize,
    pub ny: usize,
    pub half_width: f64,
    /// Row-major coefficients, `c[i * ny + j]`.
    pub coeffs: Vec<f64>,
    dx: Vec<f64>,
    dy: Vec<f64>,
    vanishing: bool,
    // rows and columns past these are zero
    ex: usize,
    ey: usize,
}

impl Cheb2 {
    pub fn from_coeffs(nx: usize, ny: usize, half_width: f64, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), nx * ny, "coefficient table has wrong size");
        let mut s =
            Cheb2 { nx, ny, half_width, coeffs, dx: Vec::new(), dy: Vec::new(), vanishing: true, ex: nx, ey: ny };
        s.rebuild();
        s
    }

    pub fn zero(nx: usize, ny: usize, half_width: f64) -> Self {
        Self::from_coeffs(nx, ny, half_width, vec![0.0; nx * ny])
    }

    /// Interpolates `g` on the tensor grid of first-kind nodes.
    pub fn from_fn(nx: usize, ny: usize, half_width: f64, g: impl Fn(f64, f64) -> f64) -> Self {
        let xs = nodes(nx);
        let ys = nodes(ny);
        let mut vals = vec![0.0; nx * ny];
        for (a, &x) in xs.iter().enumerate() {
            for (b, &y) in ys.iter().enumerate() {
                vals[a * ny + b] = g(x * half_width, y * half_width);
            }
        }
        Self::from_grid_values(nx, ny, half_width, &vals)
    }

    /// Coefficients from values at `(nodes(nx)[a], nodes(ny)[b])`, row-major in `a`.
    pub fn from_grid_values(nx: usize, ny: usize, half_width: f64, vals: &[f64]) -> Self {
        let mut rows = vec![0.0; nx * ny];
        for a in 0..nx {
            let c = fit(&vals[a * ny..(a + 1) * ny]);
            rows[a * ny..(a + 1) * ny].copy_from_slice(&c);
        }
        let mut coeffs = vec![0.0; nx * ny];
        let mut col = vec![0.0; nx];
        for b in 0..ny {
            for a in 0..nx {
                col[a] = rows[a * ny + b];
            }
            let c = fit(&col);
            for i in 0..nx {
                coeffs[i * ny + b] = c[i];
            }
        }
        Self::from_coeffs(nx, ny, half_width, coeffs)
    }

    fn rebuild(&mut self) {
        let (nx, ny) = (self.nx, self.ny);
        let mut dx = vec![0.0; nx * ny];
        let mut col = vec![0.0; nx];
        for j in 0..ny {
            for i in 0..nx {
                col[i] = self.coeffs[i * ny + j];
            }
            let d = derivative(&col);
            for (i, v) in d.iter().enumerate() {
                dx[i * ny + j] = v / self.half_width;
            }
        }
        let mut dy = vec![0.0; nx * ny];
        for i in 0..nx {
            let d = derivative(&self.coeffs[i * ny..(i + 1) * ny]);
            for (j, v) in d.iter().enumerate() {
                dy[i * ny + j] = v / self.half_width;
            }
        }
        self.dx = dx;
        self.dy = dy;
        self.vanishing = self.coeffs.iter().all(|&c| c == 0.0);
        // the x-derivative of the last row and y-derivative of the last column vanish, so
        // the value table bounds the support of all three
        self.ex =
            (0..nx).rev().find(|&i| self.coeffs[i * ny..(i + 1) * ny].iter().any(|&c| c != 0.0)).map_or(0, |i| i + 1);
        self.ey = (0..ny).rev().find(|&j| (0..nx).any(|i| self.coeffs[i * ny + j] != 0.0)).map_or(0, |j| j + 1);
    }

    /// Drops coefficients below `rel` times the largest one.
    pub fn chop(&mut self, rel: f64) {
        let floor = rel * self.max_abs_coeff();
        for c in self.coeffs.iter_mut() {
            if c.abs() < floor {
                *c = 0.0;
            }
        }
        self.rebuild();
    }

    pub fn is_zero(&self) -> bool {
        self.vanishing
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn contract(&self, table: &[f64], tx: &[f64], ty: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, t) in tx.iter().enumerate() {
            let row = &table[i * self.ny..i * self.ny + self.ey];
            let r: f64 = row.iter().zip(ty).map(|(c, t)| c * t).sum();
            acc += t * r;
        }
        acc
    }

    fn bases(&self, x: f64, y: f64) -> (Vec<f64>, Vec<f64>) {
        (basis_values(self.ex, x / self.half_width), basis_values(self.ey, y / self.half_width))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (tx, ty) = self.bases(x, y);
        self.contract(&self.coeffs, &tx, &ty)
    }

    /// `(value, d/dx, d/dy)` at one point.
    pub fn eval_with_grad(&self, x: f64, y: f64) -> (f64, f64, f64) {
        if self.is_zero() {
            return (0.0, 0.0, 0.0);
        }
        let (tx, ty) = self.bases(x, y);
        (self.contract(&self.coeffs, &tx, &ty), self.contract(&self.dx, &tx, &ty), self.contract(&self.dy, &tx, &ty))
    }

    pub fn eval_dx(&self, x: f64, y: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (tx, ty) = self.bases(x, y);
        self.contract(&self.dx, &tx, &ty)
    }

    pub fn eval_dy(&self, x: f64, y: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (tx, ty) = self.bases(x, y);
        self.contract(&self.dy, &tx, &ty)
    }

    /// `e(x + dx, y) - e(x, y)`.
    pub fn increment_x(&self, x: f64, dx: f64, y: f64) -> f64 {
        if self.is_zero() || dx == 0.0 {
            return 0.0;
        }
        let w = self.half_width;
        let ty = basis_values(self.ey, y / w);
        let rows: Vec<f64> = (0..self.ex)
            .map(|i| self.coeffs[i * self.ny..i * self.ny + self.ey].iter().zip(&ty).map(|(c, t)| c * t).sum())
            .collect();
        eval_increment(&rows, x / w, dx / w)
    }

    /// `e(x, y + dy) - e(x, y)`.
    pub fn increment_y(&self, x: f64, y: f64, dy: f64) -> f64 {
        if self.is_zero() || dy == 0.0 {
            return 0.0;
        }
        let w = self.half_width;
        let tx = basis_values(self.ex, x / w);
        let cols: Vec<f64> =
            (0..self.ey).map(|j| (0..self.ex).map(|i| self.coeffs[i * self.ny + j] * tx[i]).sum()).collect();
        eval_increment(&cols, y / w, dy / w)
    }

    /// Sup of `|d/dy|` over a uniform `m x m` grid of `[-r, r]^2`.
    pub fn sup_dy(&self, r: f64, m: usize) -> f64 {
        let mut best: f64 = 0.0;
        for a in 0..m {
            let x = -r + 2.0 * r * a as f64 / (m - 1) as f64;
            for b in 0..m {
                let y = -r + 2.0 * r * b as f64 / (m - 1) as f64;
                best = best.max(self.eval_dy(x, y).abs());
            }
        }
        best
    }

    /// Sup of `|e|` over a uniform `m x m` grid of `[-r, r]^2`.
    pub fn sup_abs(&self, r: f64, m: usize) -> f64 {
        let mut best: f64 = 0.0;
        for a in 0..m {
            let x = -r + 2.0 * r * a as f64 / (m - 1) as f64;
            for b in 0..m {
                let y = -r + 2.0 * r * b as f64 / (m - 1) as f64;
                best = best.max(self.eval(x, y).abs());
            }
        }
        best
    }

    /// Zeroes coefficients whose magnitude is below `floor`, returning whether
    /// the whole table vanished.
    pub fn flush_below(&mut self, floor: f64) -> bool {
        for c in self.coeffs.iter_mut() {
            if c.abs() < floor {
                *c = 0.0;
            }
        }
        self.rebuild();
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_reproduces_polynomial() {
        let n = 12;
        let vals: Vec<f64> = nodes(n).iter().map(|&z| 3.0 * z * z * z - z + 0.5).collect();
        let c = fit(&vals);
        for z in [-1.0, -0.3, 0.2, 0.9] {
            let p = 3.0 * z * z * z - z + 0.5;
            assert!((eval(&c, z) - p).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_closed_form() {
        let c = vec![0.3, -0.2, 0.7, 0.1, -0.05];
        let d = derivative(&c);
        let h = 1e-6;
        for z in [-0.8, 0.0, 0.45] {
            let fd = (eval(&c, z + h) - eval(&c, z - h)) / (2.0 * h);
            assert!((eval(&d, z) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn increment_keeps_relative_accuracy() {
        let c: Vec<f64> = (0..30).map(|k| 0.8f64.powi(k)).collect();
        let z = 0.37;
        let dz = 1e-40;
        let d = derivative(&c);
        let inc = eval_increment(&c, z, dz);
        let lin = eval(&d, z) * dz;
        assert!(((inc - lin) / lin).abs() < 1e-12);
        let dz = 0.2;
        let direct = eval(&c, z + dz) - eval(&c, z);
        assert!((eval_increment(&c, z, dz) - direct).abs() < 1e-13);
    }

    #[test]
    fn tensor_fit_and_increments() {
        let g = |x: f64, y: f64| 0.05 * y * (1.0 + 0.3 * x) + 0.01 * x * x;
        let e = Cheb2::from_fn(8, 6, 1.1, g);
        assert!((e.eval(0.3, -0.7) - g(0.3, -0.7)).abs() < 1e-15);
        assert!((e.eval_dy(0.3, -0.7) - 0.05 * 1.09).abs() < 1e-14);
        let inc = e.increment_y(0.3, -0.7, 1e-30);
        assert!((inc / 1e-30 - 0.05 * 1.09).abs() < 1e-13);
        let incx = e.increment_x(0.3, 1e-30, -0.7);
        assert!((incx / 1e-30 - (0.05 * -0.7 * 0.3 + 0.02 * 0.3)).abs() < 1e-13);
    }
}
