//! Seeded, order-preserving fan-out over work chunks.
//!
//! Each chunk owns a ChaCha8 stream derived from the master seed and its
//! index, and results come back in chunk order, so the output does not
//! depend on the number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Generator for chunk `stream` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Split `total` items into chunks of at most `chunk` items.
pub fn chunk_sizes(total: usize, chunk: usize) -> Vec<usize> {
    let chunk = chunk.max(1);
    let mut out = vec![chunk; total / chunk];
    if total % chunk != 0 {
        out.push(total % chunk);
    }
    out
}

/// Run `f(task, rng)` for every task and collect the results in task order.
///
/// `workers == 1` runs on the calling thread; `0` uses rayon's default pool.
pub fn run_seeded<O, F>(n_tasks: usize, workers: usize, seed: u64, f: F) -> Vec<O>
where
    O: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> O + Sync,
{
    let task = |i: usize| f(i, &mut chunk_rng(seed, i as u64));
    match workers {
        1 => (0..n_tasks).map(task).collect(),
        0 => (0..n_tasks).into_par_iter().map(task).collect(),
        w => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| (0..n_tasks).into_par_iter().map(task).collect()),
            Err(e) => {
                log::warn!("could not start a {w}-thread pool ({e}); running sequentially");
                (0..n_tasks).map(task).collect()
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_differ() {
        let a: u64 = chunk_rng(1, 0).random();
        let b: u64 = chunk_rng(1, 1).random();
        let c: u64 = chunk_rng(2, 0).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = |i: usize, rng: &mut ChaCha8Rng| (i, rng.random::<f64>());
        let one = run_seeded(37, 1, 9, f);
        let four = run_seeded(37, 4, 9, f);
        let dflt = run_seeded(37, 0, 9, f);
        assert_eq!(one, four);
        assert_eq!(one, dflt);
    }

    #[test]
    fn chunking() {
        assert_eq!(chunk_sizes(10, 4), vec![4, 4, 2]);
        assert_eq!(chunk_sizes(8, 4), vec![4, 4]);
        assert!(chunk_sizes(0, 4).is_empty());
    }
}
