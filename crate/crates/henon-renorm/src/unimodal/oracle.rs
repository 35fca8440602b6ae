use serde::{Deserialize, Serialize};

/// Superstable cascade of `q(x) = 1 - mu x^2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CascadeEstimate {
    /// `mu_n` with `0` of period `2^n`, starting at `n = 1`.
    pub parameters: Vec<f64>,
    /// `d_n = q^{2^{n-1}}(0)` at `mu_n`.
    pub distances: Vec<f64>,
    /// Successive `|d_{n+1} / d_n|`.
    pub sigma_estimates: Vec<f64>,
    pub sigma: f64,
    /// Last ratio `(mu_{n} - mu_{n-1}) / (mu_{n+1} - mu_n)`.
    pub delta: f64,
    /// Aitken-extrapolated accumulation parameter.
    pub mu_infinity: f64,
}

fn orbit_with_derivative(mu: f64, steps: usize) -> (f64, f64) {
    let (mut x, mut dx) = (0.0f64, 0.0f64);
    for _ in 0..steps {
        let nx = 1.0 - mu * x * x;
        dx = -x * x - 2.0 * mu * x * dx;
        x = nx;
    }
    (x, dx)
}

/// Newton for `q_mu^{2^n}(0) = 0` from `guess`.
pub fn superstable_parameter(n: usize, guess: f64) -> Option<f64> {
    let steps = 1usize << n;
    let mut mu = guess;
    for _ in 0..100 {
        let (x, dx) = orbit_with_derivative(mu, steps);
        if dx == 0.0 || !dx.is_finite() {
            return None;
        }
        let step = x / dx;
        mu -= step;
        if step.abs() < 1e-16 * mu.abs() {
            break;
        }
    }
    mu.is_finite().then_some(mu)
}

/// Runs the cascade up to period `2^levels` (levels >= 3).
pub fn cascade(levels: usize) -> CascadeEstimate {
    let mut mus = vec![1.0, superstable_parameter(2, 1.31).expect("period-4 parameter")];
    let mut delta = 4.669;
    for n in 3..=levels {
        let k = mus.len();
        let guess = mus[k - 1] + (mus[k - 1] - mus[k - 2]) / delta;
        let mu = superstable_parameter(n, guess).expect("cascade Newton");
        if k >= 2 {
            delta = (mus[k - 1] - mus[k - 2]) / (mu - mus[k - 1]);
        }
        mus.push(mu);
    }
    let distances: Vec<f64> = mus.iter().enumerate().map(|(i, &mu)| orbit_with_derivative(mu, 1usize << i).0).collect();
    let sigma_estimates: Vec<f64> = distances.windows(2).map(|w| (w[1] / w[0]).abs()).collect();
    let k = mus.len();
    let (m0, m1, m2) = (mus[k - 3], mus[k - 2], mus[k - 1]);
    let mu_infinity = m2 - (m2 - m1).powi(2) / ((m2 - m1) - (m1 - m0));
    CascadeEstimate {
        sigma: *sigma_estimates.last().unwrap(),
        parameters: mus,
        distances,
        sigma_estimates,
        delta,
        mu_infinity,
    }
}
