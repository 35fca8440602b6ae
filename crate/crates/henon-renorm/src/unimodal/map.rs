use serde::{Deserialize, Serialize};

use super::UnimodalError;
use crate::cheb;

/// Spectral basis of a [`UnimodalMap`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `sum a_k T_k(2u - 1)` with `u = ((x - c) / s)^2`; even about `c` by construction.
    Even,
    /// `sum a_k T_k(x / s)`, a general series on `[-s, s]`.
    Full,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MapData {
    basis: Basis,
    coefficients: Vec<f64>,
    critical_point: Option<f64>,
    scale: f64,
    half_width: f64,
}

/// A unimodal interval map stored as a Chebyshev series.
///
/// `half_width` is the half length of the working domain `[-L, L]`; the usual
/// dynamical interval is `[-1, 1]` and Hénon levels carry a small margin.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "MapData", into = "MapData")]
pub struct UnimodalMap {
    basis: Basis,
    coefficients: Vec<f64>,
    critical_point: Option<f64>,
    scale: f64,
    half_width: f64,
    deriv: Vec<f64>,
}

impl From<MapData> for UnimodalMap {
    fn from(d: MapData) -> Self {
        let mut m = UnimodalMap {
            basis: d.basis,
            coefficients: d.coefficients,
            critical_point: d.critical_point,
            scale: d.scale,
            half_width: d.half_width,
            deriv: Vec::new(),
        };
        m.deriv = cheb::derivative(&m.coefficients);
        m
    }
}

impl From<UnimodalMap> for MapData {
    fn from(m: UnimodalMap) -> Self {
        MapData {
            basis: m.basis,
            coefficients: m.coefficients,
            critical_point: m.critical_point,
            scale: m.scale,
            half_width: m.half_width,
        }
    }
}

impl UnimodalMap {
    /// Even series about `c` with scale `s`.
    pub fn even(coefficients: Vec<f64>, c: f64, s: f64, half_width: f64) -> Self {
        MapData { basis: Basis::Even, coefficients, critical_point: Some(c), scale: s, half_width }.into()
    }

    /// General series on `[-L, L]`; the critical point is searched near `c_guess`
    /// (or over the whole domain when no guess is given).
    pub fn full(coefficients: Vec<f64>, half_width: f64, c_guess: Option<f64>) -> Self {
        let mut m: UnimodalMap =
            MapData { basis: Basis::Full, coefficients, critical_point: None, scale: half_width, half_width }.into();
        m.critical_point = m.locate_critical_point(c_guess);
        m
    }

    /// Interpolates `g` on `[-L, L]` with `n` Chebyshev coefficients.
    pub fn full_from_fn(n: usize, half_width: f64, c_guess: Option<f64>, g: impl Fn(f64) -> f64) -> Self {
        let vals: Vec<f64> = cheb::nodes(n).iter().map(|&z| g(z * half_width)).collect();
        Self::full(cheb::fit(&vals), half_width, c_guess)
    }

    /// Even interpolant of `g` about `c`; `g` is sampled on the side of `c`
    /// facing the longer half of `[-L, L]`, so samples stay inside the domain.
    pub fn even_from_fn(n: usize, c: f64, half_width: f64, g: impl Fn(f64) -> f64) -> Self {
        let s = half_width + c.abs();
        let side = if c <= 0.0 { 1.0 } else { -1.0 };
        let vals: Vec<f64> = cheb::nodes(n)
            .iter()
            .map(|&z| {
                let u = 0.5 * (z + 1.0);
                g(c + side * s * u.sqrt())
            })
            .collect();
        Self::even(cheb::fit(&vals), c, s, half_width)
    }

    /// Member `1 - (lambda^2 / 2)(x - c)^2`, `c = 1 - 2/lambda`, of the quadratic family
    /// written in the normalization `f(c) = 1`, `f(1) = -1`.
    pub fn quadratic(lambda: f64, degree: usize) -> Self {
        let c = 1.0 - 2.0 / lambda;
        let s = 1.0 - c;
        let n = degree / 2 + 1;
        let mut a = vec![0.0; n.max(2)];
        a[1] = -1.0;
        Self::even(a, c, s, 1.0)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn critical_point(&self) -> Option<f64> {
        self.critical_point
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Polynomial degree in `x`.
    pub fn degree(&self) -> usize {
        match self.basis {
            Basis::Even => 2 * (self.coefficients.len() - 1),
            Basis::Full => self.coefficients.len() - 1,
        }
    }

    fn even_z(&self, x: f64) -> (f64, f64) {
        let c = self.critical_point.unwrap_or(0.0);
        let t = (x - c) / self.scale;
        (2.0 * t * t - 1.0, t)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Even => cheb::eval(&self.coefficients, self.even_z(x).0),
            Basis::Full => cheb::eval(&self.coefficients, x / self.scale),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Even => {
                let (z, t) = self.even_z(x);
                cheb::eval(&self.deriv, z) * 4.0 * t / self.scale
            }
            Basis::Full => cheb::eval(&self.deriv, x / self.scale) / self.scale,
        }
    }

    /// `f(x + dx) - f(x)`, accurate relative to `dx`.
    pub fn increment(&self, x: f64, dx: f64) -> f64 {
        match self.basis {
            Basis::Even => {
                let c = self.critical_point.unwrap_or(0.0);
                let s2 = self.scale * self.scale;
                let z = 2.0 * (x - c) * (x - c) / s2 - 1.0;
                let dz = 2.0 * dx * (2.0 * (x - c) + dx) / s2;
                cheb::eval_increment(&self.coefficients, z, dz)
            }
            Basis::Full => cheb::eval_increment(&self.coefficients, x / self.scale, dx / self.scale),
        }
    }

    /// Second derivative at the critical point (finite differences for the full basis).
    pub fn second_derivative_at_critical(&self) -> Option<f64> {
        let c = self.critical_point?;
        Some(match self.basis {
            Basis::Even => cheb::eval(&self.deriv, -1.0) * 4.0 / (self.scale * self.scale),
            Basis::Full => {
                let h = 1e-5;
                (self.deriv(c + h) - self.deriv(c - h)) / (2.0 * h)
            }
        })
    }

    pub fn iterate(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |acc, _| self.eval(acc))
    }

    fn locate_critical_point(&self, guess: Option<f64>) -> Option<f64> {
        let l = self.half_width;
        let m = 400;
        let grid: Vec<f64> = (0..=m).map(|i| -l + 2.0 * l * i as f64 / m as f64).collect();
        let mut brackets = Vec::new();
        for w in grid.windows(2) {
            let (a, b) = (self.deriv(w[0]), self.deriv(w[1]));
            if a > 0.0 && b <= 0.0 {
                brackets.push((w[0], w[1]));
            }
        }
        let target = guess.unwrap_or(0.0);
        let &(mut lo, mut hi) = brackets.iter().min_by(|p, q| (p.0 - target).abs().total_cmp(&(q.0 - target).abs()))?;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.deriv(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// `max(|f(c) - 1|, |f^2(c) + 1|)`.
    pub fn normalization_error(&self) -> Option<f64> {
        let c = self.critical_point?;
        let v = self.eval(c);
        Some((v - 1.0).abs().max((self.eval(v) + 1.0).abs()))
    }

    /// Checks the structural invariants: non-degenerate maximum and `[-1,1]` mapped
    /// into itself on a grid (tolerance `tol`).
    pub fn validate(&self, tol: f64) -> Result<(), UnimodalError> {
        let d2 = self.second_derivative_at_critical().ok_or(UnimodalError::NoCriticalPoint)?;
        if !(d2 < 0.0) {
            return Err(UnimodalError::DegenerateCriticalPoint(d2));
        }
        for i in 0..=512 {
            let x = -1.0 + 2.0 * i as f64 / 512.0;
            let y = self.eval(x);
            if !(y.abs() <= 1.0 + tol) {
                return Err(UnimodalError::LeavesInterval { x, y });
            }
        }
        Ok(())
    }

    /// Sup distance to `other` on a uniform grid of `[-1, 1]`.
    pub fn sup_distance(&self, other: &UnimodalMap, points: usize) -> f64 {
        (0..points)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
                (self.eval(x) - other.eval(x)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Re-expresses the map in the full basis on `[-L, L]` with `n` coefficients.
    pub fn to_full(&self, n: usize, half_width: f64) -> UnimodalMap {
        Self::full_from_fn(n, half_width, self.critical_point, |x| self.eval(x))
    }

    /// Adds a constant to the map.
    pub fn shifted(&self, mu: f64) -> UnimodalMap {
        let mut a = self.coefficients.clone();
        a[0] += mu;
        let mut m = self.clone();
        m.coefficients = a;
        m
    }
}
