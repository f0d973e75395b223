//! Execution policy for the data-parallel kernels.
//!
//! Every hot loop in the crate (cost assembly, envelope evaluation, the
//! all-pairs shortest path sweep used for dual centering, Sinkhorn half
//! steps) goes through the helpers here. With the `parallel` feature
//! disabled, [`Exec::Parallel`] silently runs sequentially, so results never
//! depend on the feature set: each output element is computed by the same
//! scalar code in either mode.

/// How a kernel distributes its independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `true` when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Evaluates `f(i)` for `i in 0..n` and collects the results in order.
pub fn map_indices<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Calls `f(row, chunk)` on each `row_len`-sized chunk of `data`.
pub fn for_each_row<F>(exec: Exec, data: &mut [f64], row_len: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    if row_len == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(r, chunk)| f(r, chunk));
        return;
    }
    let _ = exec;
    for (r, chunk) in data.chunks_mut(row_len).enumerate() {
        f(r, chunk);
    }
}
