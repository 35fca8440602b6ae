use serde::{Deserialize, Serialize};

use super::HenonError;
use crate::cheb::Cheb2;
use crate::unimodal::UnimodalMap;

/// Sizes of the spectral representation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenonGrid {
    /// Coefficients of the one-dimensional part.
    pub nf: usize,
    pub nx: usize,
    pub ny: usize,
    /// Half width of the working box; the dynamics live in `[-1, 1]^2`.
    pub half_width: f64,
}

impl Default for HenonGrid {
    fn default() -> Self {
        HenonGrid { nf: 48, nx: 48, ny: 24, half_width: 1.1 }
    }
}

/// Closed forms and tables accepted by [`make_henon`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsSpec {
    Zero,
    /// `b y`
    LinearY {
        b: f64,
    },
    /// `b y (1 + a1 x)`
    Bilinear {
        b: f64,
        a1: f64,
    },
    /// `b y + c y^2`
    Quadratic {
        b: f64,
        c: f64,
    },
    Coefficients(Cheb2),
}

impl EpsSpec {
    pub fn to_cheb(&self, grid: &HenonGrid) -> Cheb2 {
        let (nx, ny, w) = (grid.nx, grid.ny, grid.half_width);
        match *self {
            EpsSpec::Zero => Cheb2::zero(nx, ny, w),
            EpsSpec::LinearY { b } => Cheb2::from_fn(nx, ny, w, |_, y| b * y),
            EpsSpec::Bilinear { b, a1 } => Cheb2::from_fn(nx, ny, w, |x, y| b * y * (1.0 + a1 * x)),
            EpsSpec::Quadratic { b, c } => Cheb2::from_fn(nx, ny, w, |_, y| b * y + c * y * y),
            EpsSpec::Coefficients(ref c) => {
                if c.nx == nx && c.ny == ny && c.half_width == w {
                    c.clone()
                } else {
                    Cheb2::from_fn(nx, ny, w, |x, y| c.eval(x, y))
                }
            }
        }
    }
}

/// `F(x, y) = (f(x) - eps(x, y), x)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HenonLikeMap {
    pub f: UnimodalMap,
    pub eps: Cheb2,
    /// `sup |eps|` on `[-1, 1]^2`.
    pub eps_norm: f64,
}

/// Default bound on `sup |eps|`.
pub const EPS_BAR: f64 = 0.25;

pub fn make_henon(f: &UnimodalMap, eps: &EpsSpec, eps_bar: f64) -> Result<HenonLikeMap, HenonError> {
    make_henon_on(f, eps, eps_bar, &HenonGrid::default())
}

pub fn make_henon_on(
    f: &UnimodalMap,
    eps: &EpsSpec,
    eps_bar: f64,
    grid: &HenonGrid,
) -> Result<HenonLikeMap, HenonError> {
    let mut e = eps.to_cheb(grid);
    e.chop(super::renorm::COEFF_CHOP);
    let norm = e.sup_abs(1.0, 65);
    if !(norm <= eps_bar) {
        return Err(HenonError::EpsTooLarge { norm, bound: eps_bar });
    }
    let f = if f.basis() == crate::unimodal::Basis::Full
        && f.half_width() == grid.half_width
        && f.coefficients().len() == grid.nf
    {
        f.clone()
    } else {
        f.to_full(grid.nf, grid.half_width)
    };
    Ok(HenonLikeMap { f, eps: e, eps_norm: norm })
}

impl HenonLikeMap {
    pub fn from_parts(f: UnimodalMap, eps: Cheb2) -> Self {
        let eps_norm = eps.sup_abs(1.0, 65);
        HenonLikeMap { f, eps, eps_norm }
    }

    pub fn grid(&self) -> HenonGrid {
        HenonGrid { nf: self.f.coefficients().len(), nx: self.eps.nx, ny: self.eps.ny, half_width: self.f.half_width() }
    }

    pub fn is_degenerate(&self) -> bool {
        self.eps.is_zero()
    }

    /// First component `f(x) - eps(x, y)`.
    pub fn f1(&self, x: f64, y: f64) -> f64 {
        self.f.eval(x) - self.eps.eval(x, y)
    }

    pub fn eval(&self, z: (f64, f64)) -> (f64, f64) {
        (self.f1(z.0, z.1), z.0)
    }

    pub fn iterate(&self, z: (f64, f64), n: usize) -> (f64, f64) {
        (0..n).fold(z, |p, _| self.eval(p))
    }

    /// `(d f1/dx, d f1/dy)`.
    pub fn grad_f1(&self, x: f64, y: f64) -> (f64, f64) {
        let (_, ex, ey) = self.eps.eval_with_grad(x, y);
        (self.f.deriv(x) - ex, -ey)
    }

    /// `DF = [[f' - eps_x, -eps_y], [1, 0]]`.
    pub fn jacobian(&self, z: (f64, f64)) -> [[f64; 2]; 2] {
        let (a, b) = self.grad_f1(z.0, z.1);
        [[a, b], [1.0, 0.0]]
    }

    /// `det DF = eps_y`.
    pub fn det_jacobian(&self, z: (f64, f64)) -> f64 {
        self.eps.eval_dy(z.0, z.1)
    }

    /// `sup |d eps / dy|` on `[-1, 1]^2`.
    pub fn vertical_norm(&self) -> f64 {
        self.eps.sup_dy(1.0, 33)
    }

    /// Solves `f(x) - eps(x, y) = u` for `x` on the decreasing branch right of `x_lo`.
    pub fn hinv(&self, u: f64, y: f64, x_lo: f64) -> Result<f64, HenonError> {
        let mut lo = x_lo;
        let mut hi = self.f.half_width();
        let g = |x: f64| self.f1(x, y) - u;
        let (glo, ghi) = (g(lo), g(hi));
        if !(glo >= 0.0 && ghi <= 0.0) {
            return Err(HenonError::InversionFailure { u, y });
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let gx = g(x);
            if gx == 0.0 {
                return Ok(x);
            }
            if gx > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.grad_f1(x, y).0;
            let mut next = x - gx / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) || hi - lo <= 4.0 * f64::EPSILON {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}
