use rayon::prelude::*;
use tcct_core::sim::{Executor, Job};
use tcct_core::Result;

/// Spreads jobs over the rayon thread pool.
///
/// Each job owns its random stream and counts are summed, so the totals
/// match [`tcct_core::sim::Sequential`] exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct Parallel;

impl Executor for Parallel {
    fn accumulate(&self, jobs: u64, width: usize, job: &Job<'_>) -> Result<Vec<u64>> {
        (0..jobs)
            .into_par_iter()
            .try_fold(
                || vec![0u64; width],
                |mut acc, i| {
                    job(i, &mut acc)?;
                    Ok(acc)
                },
            )
            .try_reduce(
                || vec![0u64; width],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    Ok(a)
                },
            )
    }
}
