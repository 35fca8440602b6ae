use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::HenonGrid;
use super::{HenonError, HenonLikeMap, Mat2};
use crate::cheb::{self, Cheb2};
use crate::unimodal::UnimodalMap;

/// Half width of the working box of every renormalized level.
pub const CHILD_HALF_WIDTH: f64 = 1.1;

/// Coefficients smaller than this are flushed to zero after each step.
pub const UNDERFLOW_FLOOR: f64 = 1e-290;
/// Relative size below which refit coefficients are treated as rounding noise.
pub const COEFF_CHOP: f64 = 1e-14;

/// Everything needed to evaluate the coordinate change of one renormalization step.
///
/// `lambda(t) = 1 + scale (t - value)` is the orientation-reversing affine rescaling, and
/// `psi_v = (Lambda o H)^{-1}` with `H(x, y) = (f(x) - eps(x, y), y)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RenormStep {
    pub y_ref: f64,
    /// Critical point of `g(u) = G_1(u, y_ref)`.
    pub critical: f64,
    /// `g(critical)`.
    pub value: f64,
    /// `2 / (g(c) - g^2(c))`, negative.
    pub scale: f64,
    /// Left end of the inverted branch.
    pub branch_lo: f64,
    /// `U = lambda^{-1}([-1, 1])`.
    pub strip: (f64, f64),
    /// Sup distance between the refit one-dimensional part and pointwise evaluation.
    pub projection_residual: f64,
    /// Same for the perturbation, relative to its size.
    pub eps_relative_residual: f64,
    /// The perturbation was nonzero but fell below the floating-point floor.
    pub underflow: bool,
}

impl RenormStep {
    pub fn lambda(&self, t: f64) -> f64 {
        1.0 + self.scale * (t - self.value)
    }

    pub fn lambda_inv(&self, x: f64) -> f64 {
        self.value + (x - 1.0) / self.scale
    }

    /// `psi_v(X, Y) = (H^{-1}(lambda^{-1} X, lambda^{-1} Y), lambda^{-1} Y)` into the parent chart.
    pub fn psi_v(&self, parent: &HenonLikeMap, z: (f64, f64)) -> Result<(f64, f64), HenonError> {
        let u = self.lambda_inv(z.0);
        let y = self.lambda_inv(z.1);
        Ok((parent.hinv(u, y, self.branch_lo)?, y))
    }

    /// `psi_v^{-1} = Lambda o H`, in closed form.
    pub fn psi_v_inv(&self, parent: &HenonLikeMap, p: (f64, f64)) -> (f64, f64) {
        (self.lambda(parent.f1(p.0, p.1)), self.lambda(p.1))
    }

    /// `psi_c = F o psi_v`.
    pub fn psi_c(&self, parent: &HenonLikeMap, z: (f64, f64)) -> Result<(f64, f64), HenonError> {
        Ok(parent.eval(self.psi_v(parent, z)?))
    }

    /// Analytic `D psi_v` at `z`, together with the image point.
    pub fn psi_v_jacobian(&self, parent: &HenonLikeMap, z: (f64, f64)) -> Result<((f64, f64), Mat2), HenonError> {
        let p = self.psi_v(parent, z)?;
        let (fx, fy) = parent.grad_f1(p.0, p.1);
        let s = self.scale;
        Ok((p, [[1.0 / (s * fx), -fy / (s * fx)], [0.0, 1.0 / s]]))
    }
}

/// `G(u, y) = H o F^2 o H^{-1}(u, y)`: first component and the inverted point.
fn g1(parent: &HenonLikeMap, u: f64, y: f64, lo: f64) -> Result<f64, HenonError> {
    let x = parent.hinv(u, y, lo)?;
    let p = parent.f1(u, x);
    Ok(parent.f1(p, u))
}

fn g1_du(parent: &HenonLikeMap, u: f64, y: f64, lo: f64) -> Result<f64, HenonError> {
    let x = parent.hinv(u, y, lo)?;
    let dxdu = 1.0 / parent.grad_f1(x, y).0;
    let p = parent.f1(u, x);
    let (ax, ay) = parent.grad_f1(u, x);
    let dp = ax + ay * dxdu;
    let (bx, by) = parent.grad_f1(p, u);
    Ok(bx * dp + by)
}

/// `G_1(u, y) - G_1(u, y_ref)` through increments, relative to the size of `eps`.
struct DeltaG<'a> {
    parent: &'a HenonLikeMap,
    y_ref: f64,
    x_r: f64,
    p_r: f64,
    u: f64,
}

impl<'a> DeltaG<'a> {
    fn new(parent: &'a HenonLikeMap, u: f64, y_ref: f64, lo: f64) -> Result<Self, HenonError> {
        let x_r = parent.hinv(u, y_ref, lo)?;
        let p_r = parent.f1(u, x_r);
        Ok(DeltaG { parent, y_ref, x_r, p_r, u })
    }

    fn at(&self, y: f64) -> f64 {
        let (f, e) = (&self.parent.f, &self.parent.eps);
        let x_r = self.x_r;
        // d = x - x_r solves f(x_r + d) - f(x_r) - [eps(x_r + d, y) - eps(x_r, y)] = eps(x_r, y) - eps(x_r, y_r)
        let rhs = e.increment_y(x_r, self.y_ref, y - self.y_ref);
        if rhs == 0.0 {
            return 0.0;
        }
        let slope = |d: f64| f.deriv(x_r + d) - e.eval_dx(x_r + d, y);
        let mut d = rhs / slope(0.0);
        for _ in 0..8 {
            let phi = f.increment(x_r, d) - e.increment_x(x_r, d, y) - rhs;
            let step = phi / slope(d);
            d -= step;
            if step.abs() <= 1e-16 * d.abs() {
                break;
            }
        }
        let dp = -e.increment_y(self.u, x_r, d);
        f.increment(self.p_r, dp) - e.increment_x(self.p_r, dp, self.u)
    }
}

// Local minimum of u -> G_1(u, y_ref) nearest c_f, searched first near `hint`.
fn return_critical_point(
    parent: &HenonLikeMap,
    y_ref: f64,
    lo: f64,
    c_f: f64,
    hint: Option<f64>,
) -> Result<f64, HenonError> {
    let dg = |u: f64| g1_du(parent, u, y_ref, lo);
    let near = hint.and_then(|h| {
        let (a, b) = (h - 0.02, h + 0.02);
        match (dg(a), dg(b)) {
            (Ok(da), Ok(db)) if da < 0.0 && db >= 0.0 => Some((a, b)),
            _ => None,
        }
    });
    let (mut lo_c, mut hi_c) = match near {
        Some(br) => br,
        None => {
            let (a, b) = (c_f - 0.4, c_f + 0.4);
            let m = 80;
            let mut bracket: Option<(f64, f64)> = None;
            let mut prev: Option<(f64, f64)> = None;
            for i in 0..=m {
                let u = a + (b - a) * i as f64 / m as f64;
                let Ok(d) = dg(u) else {
                    prev = None;
                    continue;
                };
                if let Some((pu, pd)) = prev {
                    if pd < 0.0 && d >= 0.0 && bracket.is_none_or(|(p, _)| (pu - c_f).abs() < (p - c_f).abs()) {
                        bracket = Some((pu, u));
                    }
                }
                prev = Some((u, d));
            }
            bracket.ok_or_else(|| HenonError::NotRenormalizable("return map has no interior minimum".into()))?
        }
    };
    while hi_c - lo_c > 1e-15 {
        let mid = 0.5 * (lo_c + hi_c);
        if mid <= lo_c || mid >= hi_c {
            break;
        }
        if dg(mid)? < 0.0 {
            lo_c = mid;
        } else {
            hi_c = mid;
        }
    }
    Ok(0.5 * (lo_c + hi_c))
}

/// One period-doubling renormalization `RF = Lambda o G o Lambda^{-1}` with `G = H o F^2 o H^{-1}`.
pub fn renormalize_henon(parent: &HenonLikeMap) -> Result<(HenonLikeMap, RenormStep), HenonError> {
    let f = &parent.f;
    let c_f = f.critical_point().ok_or_else(|| HenonError::NotRenormalizable("no critical point".into()))?;
    let lo = c_f;
    // y_ref settles at the middle of U
    let mut y_ref = c_f;
    let (mut critical, mut value, mut value2) = (c_f, 0.0, 0.0);
    for i in 0..3 {
        critical = return_critical_point(parent, y_ref, lo, c_f, (i > 0).then_some(critical))?;
        value = g1(parent, critical, y_ref, lo)?;
        value2 = g1(parent, value, y_ref, lo)?;
        if !(value2 > value) {
            return Err(HenonError::NotRenormalizable(format!("g^2(c) = {value2} is not above g(c) = {value}")));
        }
        y_ref = 0.5 * (value + value2);
    }
    let scale = 2.0 / (value - value2);
    let strip = (value, value2);
    if critical < strip.0 || critical > strip.1 {
        return Err(HenonError::NotRenormalizable(format!("critical point {critical} outside {strip:?}")));
    }

    // the strip A = H^{-1}(U x U) must be disjoint from its image and mapped into itself by F^2
    let tol = 10.0 * parent.eps_norm + 1e-9;
    let k = 16;
    let mut min_x = f64::INFINITY;
    for i in 0..=k {
        let u = strip.0 + (strip.1 - strip.0) * i as f64 / k as f64;
        for j in 0..=k {
            let y = strip.0 + (strip.1 - strip.0) * j as f64 / k as f64;
            let x = parent.hinv(u, y, lo).map_err(|_| {
                HenonError::NotRenormalizable(format!("({u}, {y}) has no preimage on the right branch"))
            })?;
            min_x = min_x.min(x);
            let p = parent.f1(u, x);
            let g = parent.f1(p, u);
            if p <= lo || g < strip.0 - tol || g > strip.1 + tol {
                return Err(HenonError::NotRenormalizable(format!("F^2(A) leaves A at ({u}, {y})")));
            }
        }
    }
    if !(min_x > strip.1) {
        return Err(HenonError::NotRenormalizable("F(A) meets A".into()));
    }

    let mut step = RenormStep {
        y_ref,
        critical,
        value,
        scale,
        branch_lo: lo,
        strip,
        projection_residual: 0.0,
        eps_relative_residual: 0.0,
        underflow: false,
    };

    let grid = HenonGrid { half_width: CHILD_HALF_WIDTH, ..parent.grid() };
    let w = grid.half_width;
    let one_d = |x: f64| -> Result<f64, HenonError> {
        let u = step.lambda_inv(x);
        Ok(step.lambda(g1(parent, u, y_ref, lo)?))
    };
    let f_vals = cheb::nodes(grid.nf).par_iter().map(|&z| one_d(z * w)).collect::<Result<Vec<f64>, _>>()?;
    let f_new = UnimodalMap::full(cheb::fit(&f_vals), w, Some(step.lambda(critical)));
    let probes = cheb::nodes(2 * grid.nf + 1);
    let mut residual: f64 = 0.0;
    for &z in &probes {
        residual = residual.max((f_new.eval(z * w) - one_d(z * w)?).abs());
    }
    step.projection_residual = residual;
    if !(residual <= 1e-8) {
        return Err(HenonError::ProjectionLoss { residual, tol: 1e-8 });
    }

    let mut eps_new = if parent.eps.is_zero() {
        Cheb2::zero(grid.nx, grid.ny, w)
    } else {
        let ys: Vec<f64> = cheb::nodes(grid.ny).iter().map(|&z| step.lambda_inv(z * w)).collect();
        let rows = cheb::nodes(grid.nx)
            .par_iter()
            .map(|&zx| -> Result<Vec<f64>, HenonError> {
                let dg = DeltaG::new(parent, step.lambda_inv(zx * w), y_ref, lo)?;
                Ok(ys.iter().map(|&y| -scale * dg.at(y)).collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let vals: Vec<f64> = rows.concat();
        let mut e = Cheb2::from_grid_values(grid.nx, grid.ny, w, &vals);
        e.chop(COEFF_CHOP);
        let size = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if size > 0.0 {
            let mut worst: f64 = 0.0;
            for &zx in &cheb::nodes(7) {
                let dg = DeltaG::new(parent, step.lambda_inv(zx * 0.95 * w), y_ref, lo)?;
                for &zy in &cheb::nodes(5) {
                    let direct = -scale * dg.at(step.lambda_inv(zy * 0.95 * w));
                    worst = worst.max((e.eval(zx * 0.95 * w, zy * 0.95 * w) - direct).abs());
                }
            }
            step.eps_relative_residual = worst / size;
            if !(step.eps_relative_residual <= 1e-6) {
                return Err(HenonError::ProjectionLoss { residual: step.eps_relative_residual, tol: 1e-6 });
            }
        }
        e
    };
    if !eps_new.is_zero() && eps_new.flush_below(UNDERFLOW_FLOOR) {
        step.underflow = true;
    }
    Ok((HenonLikeMap::from_parts(f_new, eps_new), step))
}
