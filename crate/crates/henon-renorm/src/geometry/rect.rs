use serde::{Deserialize, Serialize};

use super::GeometryError;

pub type Point = (f64, f64);

/// Axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn h(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn v(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.0 >= self.x_min - tol && p.0 <= self.x_max + tol && p.1 >= self.y_min - tol && p.1 <= self.y_max + tol
    }

    pub fn contains_rect(&self, other: &Rect, tol: f64) -> bool {
        self.contains((other.x_min, other.y_min), tol) && self.contains((other.x_max, other.y_max), tol)
    }

    /// `h / v`.
    pub fn modulus(&self) -> Result<f64, GeometryError> {
        if !(self.v() > 0.0) {
            return Err(GeometryError::DegenerateRectangle);
        }
        Ok(self.h() / self.v())
    }

    /// Diagonal affine map of the rectangle onto the unit square.
    pub fn normalize(&self, p: Point) -> Point {
        ((p.0 - self.x_min) / self.h(), (p.1 - self.y_min) / self.v())
    }
}

pub fn bounding_rectangle(cloud: &[Point]) -> Result<Rect, GeometryError> {
    let (&first, rest) = cloud.split_first().ok_or(GeometryError::EmptyCloud)?;
    let mut r = Rect { x_min: first.0, x_max: first.0, y_min: first.1, y_max: first.1 };
    for &(x, y) in rest {
        r.x_min = r.x_min.min(x);
        r.x_max = r.x_max.max(x);
        r.y_min = r.y_min.min(y);
        r.y_max = r.y_max.max(y);
    }
    Ok(r)
}

/// `1/C0 <= h/v <= C0`.
pub fn regularity(rect: &Rect, c0: f64) -> Result<bool, GeometryError> {
    let m = rect.modulus()?;
    Ok(m >= 1.0 / c0 && m <= c0)
}

/// `v / v_hat`.
pub fn scaling_number(child: &Rect, parent: &Rect) -> Result<f64, GeometryError> {
    if !(child.v() > 0.0 && parent.v() > 0.0) {
        return Err(GeometryError::DegenerateRectangle);
    }
    Ok(child.v() / parent.v())
}

/// Diagonal of the unit square the strip follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `|y + x - 1| <= delta/2`, the north-west diagonal.
    Plus,
    /// `|y - x| <= delta/2`, the north-east diagonal.
    Minus,
}

impl Orientation {
    pub fn sign(self) -> char {
        match self {
            Orientation::Plus => '+',
            Orientation::Minus => '-',
        }
    }
}

/// Relative thickness in the rectangle's unit square; `None` picks the thinner strip.
pub fn thickness(cloud: &[Point], orientation: Option<Orientation>) -> Result<(f64, Orientation), GeometryError> {
    let r = bounding_rectangle(cloud)?;
    if !(r.h() > 0.0 && r.v() > 0.0) {
        return Err(GeometryError::DegenerateRectangle);
    }
    let width = |o: Orientation| {
        cloud
            .iter()
            .map(|&p| {
                let (x, y) = r.normalize(p);
                match o {
                    Orientation::Minus => (y - x).abs(),
                    Orientation::Plus => (y + x - 1.0).abs(),
                }
            })
            .fold(0.0, f64::max)
            * 2.0
    };
    Ok(match orientation {
        Some(o) => (width(o), o),
        None => {
            let (p, m) = (width(Orientation::Plus), width(Orientation::Minus));
            if p < m {
                (p, Orientation::Plus)
            } else {
                (m, Orientation::Minus)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_of_two_points() {
        let r = bounding_rectangle(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
        assert_eq!((r.h(), r.v()), (1.0, 2.0));
        let p = bounding_rectangle(&[(0.3, 0.3)]).unwrap();
        assert_eq!((p.h(), p.v()), (0.0, 0.0));
        assert!(matches!(bounding_rectangle(&[]), Err(GeometryError::EmptyCloud)));
    }

    #[test]
    fn modulus_bounds() {
        let sq = bounding_rectangle(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(regularity(&sq, 3.0).unwrap());
        let wide = bounding_rectangle(&[(0.0, 0.0), (30.0, 1.0)]).unwrap();
        assert!(!regularity(&wide, 3.0).unwrap());
        let flat = bounding_rectangle(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert!(matches!(regularity(&flat, 3.0), Err(GeometryError::DegenerateRectangle)));
    }

    #[test]
    fn thickness_of_diagonal_and_corner_sets() {
        let diag = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)];
        assert_eq!(thickness(&diag, Some(Orientation::Minus)).unwrap().0, 0.0);
        let corner = [(0.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert_eq!(thickness(&corner, Some(Orientation::Minus)).unwrap().0, 2.0);
        assert_eq!(thickness(&corner, None).unwrap().0, 2.0);
        let anti = [(0.0, 2.0), (3.0, 0.0), (1.5, 1.0)];
        assert_eq!(thickness(&anti, None).unwrap(), (0.0, Orientation::Plus));
    }
}
