//! Order-preserving parallel map over independent work items.

use std::num::NonZeroUsize;
use std::thread;

/// Worker count: `requested`, or the machine's available parallelism.
pub fn worker_count(requested: Option<usize>) -> usize {
    requested.filter(|&n| n > 0).unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

/// `items.iter().map(f).collect()`, computed on up to `workers` scoped
/// threads. Items are split into contiguous chunks and the chunk results are
/// concatenated in order, so the output never depends on scheduling.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    thread::scope(|scope| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|part| scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq: Vec<u64> = items.iter().map(|x| x * x + 1).collect();
        for workers in [1, 2, 3, 7, 64, 5000] {
            assert_eq!(par_map(&items, workers, |x| x * x + 1), seq);
        }
    }

    #[test]
    fn handles_empty_input() {
        let out: Vec<u8> = par_map(&[] as &[u8], 4, |x| *x);
        assert!(out.is_empty());
    }
}
