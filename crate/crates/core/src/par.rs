//! Data-parallel mapping over path batches, with a sequential fallback when
//! the `parallel` feature is off.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How batch evaluations over paths are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the ambient rayon pool. Identical to `Sequential` without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `items` in order. Each worker gets its own scratch state from `init`.
pub(crate) fn map_with_state<T, S, R, I, F>(exec: Execution, items: &[T], init: I, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map_init(init, f).collect(),
        _ => {
            let mut state = init();
            items.iter().map(|t| f(&mut state, t)).collect()
        }
    }
}
