//! Scheduling of independent work items (grid points, trials).
//!
//! With the `parallel` feature, [`Execution::Parallel`] runs on the rayon
//! global pool; without it every call is sequential. Results always come
//! back in input order, so output never depends on scheduling.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
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

/// Number of work items that can run at once.
pub fn parallelism(exec: Execution) -> usize {
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => rayon::current_num_threads(),
        _ => 1,
    }
}

/// Applies `f` to `0..n`, returning results in index order.
pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Applies `f` to every item, returning results in input order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_range(exec, items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map(Execution::Sequential, &items, |x| x * x);
        let par = map(Execution::Parallel, &items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 999 * 999);
    }
}
