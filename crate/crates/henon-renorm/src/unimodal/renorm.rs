use super::{Basis, UnimodalError, UnimodalMap};
use crate::cheb;

#[derive(Clone, Copy, Debug)]
pub struct RenormOptions {
    /// Sup residual allowed between the refit and pointwise `f^2` at interleaved points.
    pub projection_tol: f64,
    /// Slack for the interval conditions.
    pub interval_tol: f64,
}

impl Default for RenormOptions {
    fn default() -> Self {
        RenormOptions { projection_tol: 1e-8, interval_tol: 1e-9 }
    }
}

/// `[f^2(c), f^4(c)]` after checking the period-doubling conditions.
pub fn renormalization_interval(f: &UnimodalMap, tol: f64) -> Result<(f64, f64), UnimodalError> {
    let c = f.critical_point().ok_or_else(|| UnimodalError::NotRenormalizable("no critical point".into()))?;
    let v2 = f.iterate(c, 2);
    let v4 = f.iterate(v2, 2);
    if !(v2 < v4) {
        return Err(UnimodalError::NotRenormalizable(format!("f^2(c) = {v2} is not left of f^4(c) = {v4}")));
    }
    if c < v2 - tol || c > v4 + tol {
        return Err(UnimodalError::NotRenormalizable(format!("c = {c} outside [{v2}, {v4}]")));
    }
    let low = f.eval(v2).min(f.eval(v4));
    if !(low > v4) {
        return Err(UnimodalError::NotRenormalizable(format!("f(J) reaches {low}, overlapping J = [{v2}, {v4}]")));
    }
    for i in 0..=64 {
        let x = v2 + (v4 - v2) * i as f64 / 64.0;
        let y = f.iterate(x, 2);
        if y < v2 - tol || y > v4 + tol {
            return Err(UnimodalError::NotRenormalizable(format!("f^2({x}) = {y} leaves J")));
        }
    }
    Ok((v2, v4))
}

pub fn renormalize_unimodal(f: &UnimodalMap) -> Result<UnimodalMap, UnimodalError> {
    renormalize_unimodal_with(f, RenormOptions::default())
}

/// Affine rescaling of `f^2` on `J = [f^2(c), f^4(c)]` back to `[-1, 1]`, in the same
/// basis and size as `f`. The rescaling reverses orientation so the result is normalized.
pub fn renormalize_unimodal_with(f: &UnimodalMap, opts: RenormOptions) -> Result<UnimodalMap, UnimodalError> {
    let (v2, v4) = renormalization_interval(f, opts.interval_tol)?;
    let c = f.critical_point().unwrap();
    let mid = 0.5 * (v2 + v4);
    let half = 0.5 * (v4 - v2);
    let h = |x: f64| (mid - x) / half;
    let h_inv = |x: f64| mid - half * x;
    let g = |x: f64| h(f.iterate(h_inv(x), 2));
    let n = f.coefficients().len();
    let lw = f.half_width();
    let out = match f.basis() {
        Basis::Even => UnimodalMap::even_from_fn(n, h(c), lw, g),
        Basis::Full => UnimodalMap::full_from_fn(n, lw, Some(h(c)), g),
    };
    let residual = projection_residual(&out, &g, n);
    if !(residual <= opts.projection_tol) {
        return Err(UnimodalError::ProjectionLoss { residual, tol: opts.projection_tol });
    }
    Ok(out)
}

// sup |fit - g| at points between the interpolation nodes
fn projection_residual(fit: &UnimodalMap, g: &impl Fn(f64) -> f64, n: usize) -> f64 {
    let probes = cheb::nodes(2 * n + 1);
    let lw = fit.half_width();
    probes
        .iter()
        .map(|&z| {
            let x = match fit.basis() {
                Basis::Full => z * lw,
                Basis::Even => {
                    let c = fit.critical_point().unwrap();
                    let side = if c <= 0.0 { 1.0 } else { -1.0 };
                    c + side * fit.scale() * (0.5 * (z + 1.0)).sqrt()
                }
            };
            (fit.eval(x) - g(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_map_is_rejected() {
        let f = UnimodalMap::full(vec![0.0, 0.5], 1.0, None);
        assert!(matches!(renormalize_unimodal(&f), Err(UnimodalError::NotRenormalizable(_))));
    }

    #[test]
    fn chaotic_quadratic_is_rejected() {
        let f = UnimodalMap::quadratic(1.9, 40);
        assert!(renormalize_unimodal(&f).is_err());
    }

    #[test]
    fn renormalized_quadratic_stays_normalized() {
        let f = UnimodalMap::quadratic(1.39, 40);
        let g = renormalize_unimodal(&f).unwrap();
        assert!(g.normalization_error().unwrap() < 1e-12);
        g.validate(1e-9).unwrap();
    }
}
