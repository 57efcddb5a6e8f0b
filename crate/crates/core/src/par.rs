//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the heavy inner loops (branch-tree
//! exploration, sampling sweeps) run on rayon; without it every helper runs
//! sequentially. Results are deterministic either way: joins keep branch
//! order and searches return the lowest-index hit.

/// Runtime switch: callers may force sequential execution even when the
/// `parallel` feature is compiled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Strategy {
    /// The default strategy for this build.
    pub fn auto() -> Strategy {
        #[cfg(feature = "parallel")]
        {
            Strategy::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Strategy::Sequential
        }
    }

    pub fn is_parallel(self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self == Strategy::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }
}

/// Runs three closures, in parallel when requested, returning results in order.
pub fn join3<A, B, C>(
    strategy: Strategy,
    fa: impl FnOnce() -> A + Send,
    fb: impl FnOnce() -> B + Send,
    fc: impl FnOnce() -> C + Send,
) -> (A, B, C)
where
    A: Send,
    B: Send,
    C: Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        let ((a, b), c) = rayon::join(|| rayon::join(fa, fb), fc);
        return (a, b, c);
    }
    let _ = strategy;
    (fa(), fb(), fc())
}

/// First `Some` result over `0..n` by index order, propagating errors.
/// The parallel search may evaluate later indices, but the returned hit is
/// always the lowest-index one, so output is schedule-independent.
pub fn find_first_result<T, E>(
    n: usize,
    f: impl Fn(usize) -> Result<Option<T>, E> + Sync + Send,
) -> Result<Option<T>, E>
where
    T: Send,
    E: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let hit = (0..n)
            .into_par_iter()
            .map(|i| (i, f(i)))
            .find_map_first(|(i, r)| match r {
                Ok(Some(v)) => Some(Ok((i, v))),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            });
        return match hit {
            None => Ok(None),
            Some(Ok((_, v))) => Ok(Some(v)),
            Some(Err(e)) => Err(e),
        };
    }
    #[cfg(not(feature = "parallel"))]
    {
        for i in 0..n {
            if let Some(v) = f(i)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

/// Maps `0..n` collecting results in index order, propagating the first error.
pub fn try_map_indexed<T, E>(
    n: usize,
    f: impl Fn(usize) -> Result<T, E> + Sync + Send,
) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
