//! Repetition fan-out. With the `parallel` feature repetitions run on the
//! rayon pool; otherwise, or when [`Execution::Sequential`] is requested, they
//! run in order on the calling thread. Results always come back in
//! repetition order, so both paths produce identical output.

use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    /// Rayon pool when built with the `parallel` feature, sequential otherwise.
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// True when repetitions will actually run concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map_repetitions<T, F>(repetitions: usize, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return (0..repetitions).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..repetitions).map(f).collect()
}
