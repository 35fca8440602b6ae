use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::DepthSequence;

/// Number of fair-coin failures before the first success.
fn geometric<R: Rng + ?Sized>(rng: &mut R) -> usize {
    let mut total = 0;
    loop {
        let bits: u64 = rng.random();
        if bits != 0 {
            return total + bits.trailing_zeros() as usize;
        }
        total += 64;
    }
}

/// Initial depth with `P(k) = 2^{-(k+1)}`.
pub fn initial_depth<R: Rng + ?Sized>(rng: &mut R) -> usize {
    geometric(rng)
}

/// Jump with `P(j) = 2^{-j}`, `j >= 1`.
pub fn jump<R: Rng + ?Sized>(rng: &mut R) -> usize {
    geometric(rng) + 1
}

/// One walk stopped at depth `n`: depths below `n` followed by `n` itself.
pub fn walk_sample<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DepthSequence {
    let mut depths = Vec::new();
    let mut k = initial_depth(rng);
    while k < n {
        depths.push(k);
        k += jump(rng);
    }
    depths.push(n);
    DepthSequence { depths }
}

/// ChaCha8 generator for one stream of a seeded family.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Reduces `count` walks with `f`, splitting the work into fixed chunks with their own
/// streams; the result depends only on `(seed, count)`.
pub fn walk_fold<T, F>(seed: u64, count: usize, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&DepthSequence) -> T + Sync,
{
    const CHUNK: usize = 1 << 14;
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(|_| f(&walk_sample(&mut rng, n))).collect::<Vec<_>>()
        })
        .collect()
}

/// `count` independent stopped walks.
pub fn walk_samples(seed: u64, count: usize, n: usize) -> Vec<DepthSequence> {
    walk_fold(seed, count, n, |w| w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walks_end_at_the_stopping_depth() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..1000 {
            let w = walk_sample(&mut rng, 12);
            assert_eq!(*w.depths.last().unwrap(), 12);
            assert!(w.depths.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(walk_samples(3, 40_000, 9), walk_samples(3, 40_000, 9));
    }
}
