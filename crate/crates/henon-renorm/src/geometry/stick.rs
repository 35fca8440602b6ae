use serde::{Deserialize, Serialize};

use super::{GeometryError, Point};

/// Frame `A` of a piece: rotation to the stick direction plus rescaling to unit length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stick {
    /// Point of the parent cloud that projects to 0.
    pub origin: Point,
    /// Direction of the long side, radians in `(-pi/2, pi/2]`.
    pub angle: f64,
    pub length: f64,
    /// Transverse extent over length.
    pub rel_height: f64,
    /// Which child sits at the origin end.
    pub first_child: usize,
    /// Scaling factor of each child, in the order the children were given.
    pub sigma: [f64; 2],
    pub precision: f64,
}

fn wrap_angle(t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut a = t % pi;
    if a <= -pi / 2.0 {
        a += pi;
    } else if a > pi / 2.0 {
        a -= pi;
    }
    a
}

/// Direction of largest spread.
pub fn principal_axis(cloud: &[Point]) -> Result<f64, GeometryError> {
    if cloud.is_empty() {
        return Err(GeometryError::EmptyCloud);
    }
    let n = cloud.len() as f64;
    let (mx, my) = cloud.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (mx / n, my / n);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in cloud {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(wrap_angle(0.5 * (2.0 * sxy).atan2(sxx - syy)))
}

/// Stick in the frame with direction `angle`; `sigma_star[i]` belongs to `children[i]`.
pub fn stick_at_angle(
    parent: &[Point],
    children: [&[Point]; 2],
    sigma_star: [f64; 2],
    angle: f64,
) -> Result<Stick, GeometryError> {
    if parent.is_empty() || children.iter().any(|c| c.is_empty()) {
        return Err(GeometryError::EmptyCloud);
    }
    let (c, s) = (angle.cos(), angle.sin());
    let along = |p: &Point| p.0 * c + p.1 * s;
    let across = |p: &Point| -p.0 * s + p.1 * c;
    let (mut smin, mut smax, mut tmin, mut tmax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let mut origin = parent[0];
    for p in parent {
        let a = along(p);
        if a < smin {
            smin = a;
            origin = *p;
        }
        smax = smax.max(a);
        let t = across(p);
        tmin = tmin.min(t);
        tmax = tmax.max(t);
    }
    let length = smax - smin;
    if !(length > 0.0) {
        return Err(GeometryError::DegenerateRectangle);
    }
    let tol = 1e-9;
    let mut ranges = [(0.0, 0.0); 2];
    for (i, ch) in children.iter().enumerate() {
        let (lo, hi) = ch.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let a = (along(p) - smin) / length;
            (lo.min(a), hi.max(a))
        });
        if lo < -tol || hi > 1.0 + tol {
            return Err(GeometryError::ChildOutsideFrame);
        }
        ranges[i] = (lo, hi);
    }
    let first = if ranges[0].0 + ranges[0].1 <= ranges[1].0 + ranges[1].1 { 0 } else { 1 };
    let mut sigma = [0.0; 2];
    sigma[first] = ranges[first].1;
    sigma[1 - first] = 1.0 - ranges[1 - first].0;
    let rel_height = (tmax - tmin) / length;
    let precision = rel_height.max((sigma[0] - sigma_star[0]).abs()).max((sigma[1] - sigma_star[1]).abs());
    Ok(Stick { origin, angle: wrap_angle(angle), length, rel_height, first_child: first, sigma, precision })
}

/// Convex hull, counter-clockwise, without collinear points.
pub fn convex_hull(cloud: &[Point]) -> Vec<Point> {
    let mut pts = cloud.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let floor = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= floor + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Direction of the narrowest strip containing the cloud, and its width.
///
/// The optimal strip has one side flush with a hull edge.
pub fn min_width_direction(cloud: &[Point]) -> Result<(f64, f64), GeometryError> {
    let hull = convex_hull(cloud);
    match hull.len() {
        0 => return Err(GeometryError::EmptyCloud),
        1 => return Err(GeometryError::DegenerateRectangle),
        2 => return Ok((wrap_angle((hull[1].1 - hull[0].1).atan2(hull[1].0 - hull[0].0)), 0.0)),
        _ => {}
    }
    let m = hull.len();
    let mut best = (0.0, f64::INFINITY);
    for i in 0..m {
        let (a, b) = (hull[i], hull[(i + 1) % m]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len = dx.hypot(dy);
        let w = hull.iter().map(|p| ((p.0 - a.0) * dy - (p.1 - a.1) * dx).abs() / len).fold(0.0, f64::max);
        if w < best.1 {
            best = (dy.atan2(dx), w);
        }
    }
    Ok((wrap_angle(best.0), best.1))
}

const EPS_TIE: f64 = 1e-9;

/// Best of the principal-axis frame and the narrowest-strip frame, with
/// `eps = max(delta, |sigma_1 - sigma_1*|, |sigma_2 - sigma_2*|)`.
///
/// Both candidate directions move with the cloud under conformal maps, so the result is
/// frame independent up to rounding.
pub fn precision(
    parent: &[Point],
    children: [&[Point]; 2],
    sigma_star: [f64; 2],
) -> Result<(f64, Stick), GeometryError> {
    let axis = stick_at_angle(parent, children, sigma_star, principal_axis(parent)?);
    let strip = min_width_direction(parent).and_then(|(a, _)| stick_at_angle(parent, children, sigma_star, a));
    let best = match (axis, strip) {
        // near ties in eps go to the thinner stick
        (Ok(a), Ok(s)) => {
            let tie = (s.precision - a.precision).abs() <= EPS_TIE;
            if (tie && s.rel_height < a.rel_height) || (!tie && s.precision < a.precision) {
                s
            } else {
                a
            }
        }
        (Ok(a), Err(_)) => a,
        (Err(_), Ok(s)) => s,
        (Err(e), Err(_)) => return Err(e),
    };
    Ok((best.precision, best))
}

/// `z -> scale R(angle) z + shift`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conformal {
    pub scale: f64,
    pub angle: f64,
    pub shift: Point,
}

impl Conformal {
    pub fn apply(&self, p: Point) -> Point {
        let (c, s) = (self.angle.cos(), self.angle.sin());
        (self.scale * (c * p.0 - s * p.1) + self.shift.0, self.scale * (s * p.0 + c * p.1) + self.shift.1)
    }

    pub fn apply_all(&self, cloud: &[Point]) -> Vec<Point> {
        cloud.iter().map(|&p| self.apply(p)).collect()
    }
}
