//! Chunked map over index ranges with results returned in chunk order.
//!
//! Every reduction in this crate is exact, so the chunking and the worker
//! count never change a result. With the `parallel` feature off, every
//! schedule runs on the calling thread.

use std::ops::Range;

/// How to run a chunked map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Sequential,
    /// `workers == 0` means one per available core.
    Parallel {
        workers: usize,
    },
}

impl Schedule {
    pub fn from_workers(workers: usize) -> Self {
        if workers == 1 {
            Schedule::Sequential
        } else {
            Schedule::Parallel { workers }
        }
    }

    pub fn workers(&self) -> usize {
        match *self {
            Schedule::Sequential => 1,
            Schedule::Parallel { workers: 0 } => available_workers(),
            Schedule::Parallel { workers } => workers,
        }
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Parallel { workers: 0 }
    }
}

fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Splits `0..total` into consecutive ranges of at most `chunk` indices.
pub fn chunk_ranges(total: u64, chunk: u64) -> Vec<Range<u64>> {
    let chunk = chunk.max(1);
    (0..total.div_ceil(chunk)).map(|i| i * chunk..((i + 1) * chunk).min(total)).collect()
}

/// A chunk size giving each worker several chunks to balance uneven work.
pub fn default_chunk(total: u64, schedule: Schedule) -> u64 {
    (total / (schedule.workers() as u64 * 16)).clamp(1, 1 << 16)
}

/// Applies `f` to each range and returns the results in range order.
pub fn map_ranges<T, F>(schedule: Schedule, ranges: Vec<Range<u64>>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    match schedule {
        Schedule::Sequential => ranges.into_iter().map(f).collect(),
        Schedule::Parallel { workers } => par_map(workers, ranges, f),
    }
}

/// Applies `f` to each item of a slice, results in slice order.
pub fn map_slice<I, T, F>(schedule: Schedule, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    let chunk = default_chunk(items.len() as u64, schedule) as usize;
    let ranges = chunk_ranges(items.len() as u64, chunk as u64);
    map_ranges(schedule, ranges, |r| items[r.start as usize..r.end as usize].iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(workers: usize, ranges: Vec<Range<u64>>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("failed to build worker pool");
    pool.install(|| ranges.into_par_iter().map(f).collect())
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(_workers: usize, ranges: Vec<Range<u64>>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    ranges.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_the_range() {
        assert_eq!(chunk_ranges(10, 4), vec![0..4, 4..8, 8..10]);
        assert_eq!(chunk_ranges(0, 4), Vec::<Range<u64>>::new());
        assert_eq!(chunk_ranges(3, 0), vec![0..1, 1..2, 2..3]);
    }

    #[test]
    fn results_keep_chunk_order() {
        let sum = |r: Range<u64>| r.map(|i| i * i).sum::<u64>();
        let seq = map_ranges(Schedule::Sequential, chunk_ranges(1000, 7), sum);
        for workers in [0, 2, 3] {
            let par = map_ranges(Schedule::Parallel { workers }, chunk_ranges(1000, 7), sum);
            assert_eq!(seq, par);
        }
        let items: Vec<u32> = (0..500).collect();
        assert_eq!(map_slice(Schedule::Parallel { workers: 4 }, &items, |x| x + 1), (1..501).collect::<Vec<_>>());
    }
}
