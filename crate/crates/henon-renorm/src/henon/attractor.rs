use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HenonError, RenormTower};
use crate::combinatorics::Word;

/// Images of a base point under all `psi^m_w`, `|w| = m`, with every intermediate level kept.
///
/// `levels[k][i]` is the level-`k` point whose remaining word `w_{k+1} ... w_m` has index `i`
/// (bit `j` set when `w_{k+1+j} = c`). Level-0 points of the piece `B^n_omega` are those whose
/// index has low `n` bits equal to `omega.index()`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttractorSample {
    pub depth: usize,
    pub base: (f64, f64),
    pub levels: Vec<Vec<(f64, f64)>>,
}

impl AttractorSample {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.levels[0]
    }

    /// Level-0 cloud of the piece `B^n_omega`.
    pub fn cloud(&self, omega: &Word) -> Vec<(f64, f64)> {
        self.cloud_at(0, omega.len(), omega.index())
    }

    /// Cloud of a level-`k` piece of word length `n` (relative to level `k`) and index `j`.
    pub fn cloud_at(&self, k: usize, n: usize, j: u64) -> Vec<(f64, f64)> {
        if j >> n != 0 {
            return Vec::new();
        }
        let pts = &self.levels[k];
        (j as usize..pts.len()).step_by(1usize << n).map(|i| pts[i]).collect()
    }
}

/// Samples `{psi^{n+d}_{omega nu}(z_0)}` for all `omega` of length `n`, `nu` of length `d`.
pub fn sample_attractor(tower: &RenormTower, n: usize, d: usize) -> Result<AttractorSample, HenonError> {
    sample_attractor_from(tower, n + d, tower.tip_estimates.get(n + d).copied().unwrap_or((0.0, 0.0)))
}

pub fn sample_attractor_from(tower: &RenormTower, m: usize, base: (f64, f64)) -> Result<AttractorSample, HenonError> {
    if m > tower.depth() {
        return Err(HenonError::WordTooLong { len: m, depth: tower.depth() });
    }
    let mut levels = vec![Vec::new(); m + 1];
    levels[m] = vec![base];
    for k in (1..=m).rev() {
        let (parent, step) = (&tower.levels[k - 1], &tower.steps[k - 1]);
        let next = levels[k]
            .par_iter()
            .map(|&z| -> Result<[(f64, f64); 2], HenonError> {
                let v = step.psi_v(parent, z)?;
                Ok([v, parent.eval(v)])
            })
            .collect::<Result<Vec<_>, _>>()?;
        levels[k - 1] = next.concat();
    }
    Ok(AttractorSample { depth: m, base, levels })
}
