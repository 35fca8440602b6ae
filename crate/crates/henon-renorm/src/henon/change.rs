use serde::{Deserialize, Serialize};

use super::{HenonError, HenonLikeMap, RenormStep, RenormTower};
use crate::combinatorics::{Letter, Word};

pub type Mat2 = [[f64; 2]; 2];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Operator norm of a 2x2 matrix.
pub(crate) fn mat_norm(a: &Mat2) -> f64 {
    let (p, q, r, s) = (a[0][0], a[0][1], a[1][0], a[1][1]);
    let t = p * p + q * q + r * r + s * s;
    let d = p * s - q * r;
    (0.5 * (t + (t * t - 4.0 * d * d).max(0.0).sqrt())).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeKind {
    Identity,
    PsiV,
    PsiC,
    Composite,
}

/// One factor `psi^{k+1}_v` or `psi^{k+1}_c = F_k o psi^{k+1}_v` of a composite change.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Link {
    pub parent: HenonLikeMap,
    pub step: RenormStep,
    pub letter: Letter,
}

impl Link {
    pub fn apply(&self, z: (f64, f64)) -> Result<(f64, f64), HenonError> {
        let p = self.step.psi_v(&self.parent, z)?;
        Ok(match self.letter {
            Letter::V => p,
            Letter::C => self.parent.eval(p),
        })
    }

    pub fn apply_with_jacobian(&self, z: (f64, f64)) -> Result<((f64, f64), Mat2), HenonError> {
        let (p, d) = self.step.psi_v_jacobian(&self.parent, z)?;
        Ok(match self.letter {
            Letter::V => (p, d),
            Letter::C => (self.parent.eval(p), mat_mul(&self.parent.jacobian(p), &d)),
        })
    }
}

/// `z -> translation + matrix (z - base)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub base: (f64, f64),
    pub matrix: Mat2,
    pub translation: (f64, f64),
}

impl Affine {
    pub fn identity() -> Self {
        Affine { base: (0.0, 0.0), matrix: [[1.0, 0.0], [0.0, 1.0]], translation: (0.0, 0.0) }
    }

    pub fn apply(&self, z: (f64, f64)) -> (f64, f64) {
        let (dx, dy) = (z.0 - self.base.0, z.1 - self.base.1);
        let m = &self.matrix;
        (self.translation.0 + m[0][0] * dx + m[0][1] * dy, self.translation.1 + m[1][0] * dx + m[1][1] * dy)
    }
}

/// Composite `psi_{w_1} o ... o psi_{w_n}` with its affine part at a base point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoordChange {
    pub kind: ChangeKind,
    /// Outermost factor first.
    pub links: Vec<Link>,
    pub affine: Affine,
    /// `sup |psi - affine|` on a 9x9 grid of the unit box, relative to `|D|`.
    pub nonlinearity: f64,
}

impl CoordChange {
    pub fn identity() -> Self {
        CoordChange { kind: ChangeKind::Identity, links: Vec::new(), affine: Affine::identity(), nonlinearity: 0.0 }
    }

    pub fn from_links(links: Vec<Link>, base: (f64, f64)) -> Result<Self, HenonError> {
        let kind = match links.as_slice() {
            [] => return Ok(Self::identity()),
            [l] if l.letter == Letter::V => ChangeKind::PsiV,
            [_] => ChangeKind::PsiC,
            _ => ChangeKind::Composite,
        };
        let mut out = CoordChange { kind, links, affine: Affine::identity(), nonlinearity: 0.0 };
        let (t, m) = out.eval_with_jacobian(base)?;
        out.affine = Affine { base, matrix: m, translation: t };
        let norm = mat_norm(&m);
        let mut worst: f64 = 0.0;
        for i in 0..9 {
            for j in 0..9 {
                let z = (-1.0 + i as f64 / 4.0, -1.0 + j as f64 / 4.0);
                let p = out.eval(z)?;
                let q = out.affine.apply(z);
                worst = worst.max((p.0 - q.0).hypot(p.1 - q.1));
            }
        }
        out.nonlinearity = if norm > 0.0 { worst / norm } else { 0.0 };
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn word(&self) -> Word {
        Word::new(self.links.iter().map(|l| l.letter).collect())
    }

    pub fn eval(&self, z: (f64, f64)) -> Result<(f64, f64), HenonError> {
        self.links.iter().rev().try_fold(z, |p, l| l.apply(p))
    }

    pub fn eval_with_jacobian(&self, z: (f64, f64)) -> Result<((f64, f64), Mat2), HenonError> {
        let mut p = z;
        let mut d = [[1.0, 0.0], [0.0, 1.0]];
        for l in self.links.iter().rev() {
            let (q, dl) = l.apply_with_jacobian(p)?;
            d = mat_mul(&dl, &d);
            p = q;
        }
        Ok((p, d))
    }

    /// `det D psi` keeps one sign on an `m x m` grid of the unit box.
    pub fn is_fold_free(&self, m: usize) -> Result<bool, HenonError> {
        let mut sign = 0.0;
        for i in 0..m {
            for j in 0..m {
                let t = |k: usize| -1.0 + 2.0 * k as f64 / (m - 1).max(1) as f64;
                let (_, d) = self.eval_with_jacobian((t(i), t(j)))?;
                let det = d[0][0] * d[1][1] - d[0][1] * d[1][0];
                if det == 0.0 || (sign != 0.0 && det.signum() != sign) {
                    return Ok(false);
                }
                sign = det.signum();
            }
        }
        Ok(true)
    }
}

/// `psi^n_w = psi^1_{w_1} o ... o psi^n_{w_n}`, with the affine part taken at the level-`n` tip.
pub fn psi_word(tower: &RenormTower, word: &Word) -> Result<CoordChange, HenonError> {
    let n = word.len();
    if n > tower.depth() {
        return Err(HenonError::WordTooLong { len: n, depth: tower.depth() });
    }
    let links = word
        .letters()
        .iter()
        .enumerate()
        .map(|(k, &letter)| Link { parent: tower.levels[k].clone(), step: tower.steps[k].clone(), letter })
        .collect();
    CoordChange::from_links(links, tower.tip_estimates[n])
}
