use super::{UnimodalError, UnimodalMap};

pub fn distortion(f: &UnimodalMap, interval: (f64, f64), t: usize) -> Result<f64, UnimodalError> {
    distortion_on_grid(f, interval, t, 257)
}

/// `max log|Df^t| - min log|Df^t|` over a uniform grid of `interval`.
pub fn distortion_on_grid(
    f: &UnimodalMap,
    interval: (f64, f64),
    t: usize,
    points: usize,
) -> Result<f64, UnimodalError> {
    let c = f.critical_point();
    let (a, b) = interval;
    let mut xs: Vec<f64> = (0..points).map(|i| a + (b - a) * i as f64 / (points - 1).max(1) as f64).collect();
    let mut logd = vec![0.0; points];
    let mut sign = vec![1.0f64; points];
    for step in 0..t {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if c.is_some_and(|c| c > lo && c < hi) {
            return Err(UnimodalError::CriticalPointInside { iterate: step });
        }
        for ((x, l), s) in xs.iter_mut().zip(logd.iter_mut()).zip(sign.iter_mut()) {
            let d = f.deriv(*x);
            if d == 0.0 {
                return Err(UnimodalError::CriticalPointInside { iterate: step });
            }
            *l += d.abs().ln();
            *s *= d.signum();
            *x = f.eval(*x);
        }
    }
    if sign.iter().any(|&s| s != sign[0]) {
        return Err(UnimodalError::CriticalPointInside { iterate: t });
    }
    let max = logd.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = logd.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(max - min)
}
