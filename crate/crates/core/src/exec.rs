//! Sequential or data-parallel execution of independent work items.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecMode {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, else runs sequentially.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Index of the first item (in order) where `f` returns `Some`, with its value.
pub fn find_first<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items
                .par_iter()
                .enumerate()
                .filter_map(|(i, x)| f(x).map(|r| (i, r)))
                .min_by_key(|(i, _)| *i)
        }
        _ => items.iter().enumerate().find_map(|(i, x)| f(x).map(|r| (i, r))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let v: Vec<u64> = (0..1000).collect();
        let a = map(ExecMode::Sequential, &v, |x| x * x);
        let b = map(ExecMode::Parallel, &v, |x| x * x);
        assert_eq!(a, b);
        let f = |x: &u64| (x % 97 == 96).then_some(*x);
        assert_eq!(find_first(ExecMode::Sequential, &v, f), Some((96, 96)));
        assert_eq!(find_first(ExecMode::Parallel, &v, f), Some((96, 96)));
    }
}
