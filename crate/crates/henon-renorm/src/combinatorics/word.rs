use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CombinatoricsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    C,
    V,
}

/// A word `w_1 ... w_n` over `{c, v}`.
///
/// Words are indexed by the odometer: letter `w_{i+1}` is bit `i` of the index
/// (`c` = 1), so the map acts on indices as `+1 mod 2^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Depth of a word: the number of leading `v`s, or the tip word `v^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Depth {
    Finite(usize),
    Tip,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn tip(n: usize) -> Self {
        Word { letters: vec![Letter::V; n] }
    }

    pub fn from_index(index: u64, n: usize) -> Self {
        let letters = (0..n).map(|i| if (index >> i) & 1 == 1 { Letter::C } else { Letter::V }).collect();
        Word { letters }
    }

    pub fn index(&self) -> u64 {
        self.letters.iter().enumerate().filter(|(_, l)| **l == Letter::C).fold(0u64, |acc, (i, _)| acc | (1 << i))
    }

    /// Word with `c` exactly at the given 0-based positions.
    pub fn from_positions(n: usize, positions: &[usize]) -> Self {
        let mut letters = vec![Letter::V; n];
        for &p in positions {
            letters[p] = Letter::C;
        }
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word { letters: self.letters[..k].to_vec() }
    }

    pub fn suffix(&self, k: usize) -> Word {
        Word { letters: self.letters[k..].to_vec() }
    }

    pub fn push(&self, l: Letter) -> Word {
        let mut letters = self.letters.clone();
        letters.push(l);
        Word { letters }
    }

    /// 0-based positions of the letters `c`.
    pub fn c_positions(&self) -> Vec<usize> {
        self.letters.iter().enumerate().filter_map(|(i, l)| (*l == Letter::C).then_some(i)).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::C => "c",
                Letter::V => "v",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = CombinatoricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|ch| match ch {
                'c' => Ok(Letter::C),
                'v' => Ok(Letter::V),
                other => Err(CombinatoricsError::BadLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new)
    }
}

pub fn word_depth(w: &Word) -> Depth {
    match w.letters.iter().position(|l| *l == Letter::C) {
        Some(k) => Depth::Finite(k),
        None => Depth::Tip,
    }
}

/// Strictly increasing depths `k_0 < k_1 < ...`, optionally closed by the stopping depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthSequence {
    pub depths: Vec<usize>,
}

impl DepthSequence {
    pub fn new(depths: Vec<usize>) -> Result<Self, CombinatoricsError> {
        if depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CombinatoricsError::NotIncreasing(depths));
        }
        Ok(DepthSequence { depths })
    }

    pub fn jumps(&self) -> Vec<usize> {
        self.depths.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// The word of length `n` whose `c`s sit at the depths below `n`.
    pub fn to_word(&self, n: usize) -> Word {
        let pos: Vec<usize> = self.depths.iter().copied().filter(|&k| k < n).collect();
        Word::from_positions(n, &pos)
    }
}

/// Closest-approach depths of a word: the positions of its `c`s.
pub fn predecessors(w: &Word) -> DepthSequence {
    DepthSequence { depths: w.c_positions() }
}

/// The odometer successor `index + 1 mod 2^n`.
pub fn adding_machine_step(index: u64, n: usize) -> u64 {
    if n >= 64 {
        return index.wrapping_add(1);
    }
    (index + 1) & ((1u64 << n) - 1)
}

/// `G_k = F^{2^k}` on words: a word of depth `l > k` goes to the depth-`k` word with the
/// same letters beyond `k`.
pub fn push_up(w: &Word, k: usize) -> Result<Word, CombinatoricsError> {
    match word_depth(w) {
        Depth::Finite(l) if l <= k => Err(CombinatoricsError::NotInDomain { depth: l, k }),
        _ => {
            let mut letters = w.letters.clone();
            letters[k] = Letter::C;
            Ok(Word { letters })
        }
    }
}
