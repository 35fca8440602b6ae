use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{renormalization_interval, renormalize_unimodal, Basis, UnimodalError, UnimodalMap};
use crate::cheb;

// Radius of the even expansion in the critical-point chart.
const CHART_RADIUS: f64 = 1.2;

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub damping: f64,
    pub damped_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_iterations: 60, damping: 0.5, damped_steps: 3 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointSolution {
    pub f_star: UnimodalMap,
    /// `|[f^2(c), f^4(c)]| / 2`.
    pub sigma: f64,
    /// Sup of `|Rf - f|` on a 1001-point grid of `[-1, 1]`.
    pub residual: f64,
    /// Largest collocation residual of the final Newton iterate.
    pub collocation_residual: f64,
    pub iterations: usize,
}

/// On-disk form of a fixed point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FixedPointDocument {
    pub basis: String,
    pub degree: usize,
    pub critical_point: f64,
    pub scale: f64,
    pub coefficients: Vec<f64>,
    pub sigma: f64,
    pub residual: f64,
}

impl FixedPointSolution {
    pub fn critical_point(&self) -> f64 {
        self.f_star.critical_point().unwrap()
    }

    pub fn document(&self) -> FixedPointDocument {
        FixedPointDocument {
            basis: "even_chebyshev".into(),
            degree: self.f_star.degree(),
            critical_point: self.critical_point(),
            scale: self.f_star.scale(),
            coefficients: self.f_star.coefficients().to_vec(),
            sigma: self.sigma,
            residual: self.residual,
        }
    }
}

impl FixedPointDocument {
    pub fn to_map(&self) -> UnimodalMap {
        UnimodalMap::even(self.coefficients.clone(), self.critical_point, self.scale, 1.0)
    }
}

/// Quadratic seed near the accumulation of the period-doubling cascade.
pub fn default_seed() -> UnimodalMap {
    UnimodalMap::quadratic(1.4, 2)
}

pub fn solve_fixed_point(initial: &UnimodalMap, degree: usize, tol: f64) -> Result<FixedPointSolution, UnimodalError> {
    solve_fixed_point_with(initial, degree, tol, SolverOptions::default())
}

// g(x) = sum a_i T_i(2 x^2 / R^2 - 1), g(0) = 1, and the fixed point equation
// g(x) + alpha g(g(x / alpha)) = 0 with alpha = -1 / g(1).
struct Chart {
    a: Vec<f64>,
    d: Vec<f64>,
}

impl Chart {
    fn new(a: Vec<f64>) -> Self {
        let d = cheb::derivative(&a);
        Chart { a, d }
    }
    fn z(x: f64) -> f64 {
        2.0 * x * x / (CHART_RADIUS * CHART_RADIUS) - 1.0
    }
    fn g(&self, x: f64) -> f64 {
        cheb::eval(&self.a, Self::z(x))
    }
    fn dg(&self, x: f64) -> f64 {
        cheb::eval(&self.d, Self::z(x)) * 4.0 * x / (CHART_RADIUS * CHART_RADIUS)
    }
    fn phi(&self, x: f64) -> Vec<f64> {
        cheb::basis_values(self.a.len(), Self::z(x))
    }
}

pub fn solve_fixed_point_with(
    initial: &UnimodalMap,
    degree: usize,
    tol: f64,
    opts: SolverOptions,
) -> Result<FixedPointSolution, UnimodalError> {
    let c0 = initial.critical_point().ok_or(UnimodalError::NoCriticalPoint)?;
    let m = degree / 2 + 1;
    // collocation points x_j = R sqrt(u_j), u_j Chebyshev nodes on [0, 1]
    let xs: Vec<f64> = cheb::nodes(m - 1).iter().map(|&z| CHART_RADIUS * (0.5 * (z + 1.0)).sqrt()).collect();
    let k0 = 1.0 - c0;
    let seed: Vec<f64> = cheb::nodes(m)
        .iter()
        .map(|&z| {
            let t = CHART_RADIUS * (0.5 * (z + 1.0)).sqrt();
            (initial.eval(c0 + t * k0) - c0) / k0
        })
        .collect();
    let mut chart = Chart::new(cheb::fit(&seed));

    let residuals = |ch: &Chart| -> DVector<f64> {
        let alpha = -1.0 / ch.g(1.0);
        let mut r = DVector::zeros(m);
        for (j, &x) in xs.iter().enumerate() {
            r[j] = ch.g(x) + alpha * ch.g(ch.g(x / alpha));
        }
        r[m - 1] = ch.g(0.0) - 1.0;
        r
    };

    let mut r = residuals(&chart);
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        if r.amax() <= 0.01 * tol {
            break;
        }
        let alpha = -1.0 / chart.g(1.0);
        let phi1 = chart.phi(1.0);
        let mut jac = DMatrix::zeros(m, m);
        for (j, &x) in xs.iter().enumerate() {
            let y = x / alpha;
            let w = chart.g(y);
            let (gw, dgw, dgy) = (chart.g(w), chart.dg(w), chart.dg(y));
            let (px, py, pw) = (chart.phi(x), chart.phi(y), chart.phi(w));
            for i in 0..m {
                let da = alpha * alpha * phi1[i];
                let dy = -x * phi1[i];
                jac[(j, i)] = px[i] + da * gw + alpha * (pw[i] + dgw * (py[i] + dgy * dy));
            }
        }
        for (i, p) in chart.phi(0.0).into_iter().enumerate() {
            jac[(m - 1, i)] = p;
        }
        let step = jac
            .lu()
            .solve(&r)
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(UnimodalError::SingularJacobian(iterations))?;
        let damp = if iterations < opts.damped_steps { opts.damping } else { 1.0 };
        let a: Vec<f64> = chart.a.iter().zip(step.iter()).map(|(a, s)| a - damp * s).collect();
        chart = Chart::new(a);
        r = residuals(&chart);
        iterations += 1;
        if iterations >= opts.damped_steps && step.amax() <= 1e-3 * tol {
            break;
        }
    }
    let collocation_residual = r.amax();
    if !(collocation_residual <= tol) {
        return Err(UnimodalError::NoConvergence { iterations, residual: collocation_residual });
    }

    let alpha = -1.0 / chart.g(1.0);
    let c = -1.0 + 2.0 / (alpha + 1.0);
    let k = 1.0 - c;
    let mut coeffs: Vec<f64> = chart.a.iter().map(|a| k * a).collect();
    coeffs[0] += c;
    let f_star = UnimodalMap::even(coeffs, c, CHART_RADIUS * k, 1.0);
    debug_assert_eq!(f_star.basis(), Basis::Even);

    let (v2, v4) = renormalization_interval(&f_star, 1e-9)?;
    let sigma = 0.5 * (v4 - v2);
    let rf = renormalize_unimodal(&f_star)?;
    let residual = rf.sup_distance(&f_star, 1001);
    Ok(FixedPointSolution { f_star, sigma, residual, collocation_residual, iterations })
}
