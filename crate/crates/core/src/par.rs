//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the rayon pool unless the
//! process has switched to [`Exec::Sequential`]. Results never depend on the
//! mode: `find_first_map` always reports the lowest matching index.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    /// Parallel when compiled with the `parallel` feature.
    Auto,
    Sequential,
}

static MODE: AtomicU8 = AtomicU8::new(0);

pub fn set_exec(mode: Exec) {
    MODE.store(
        if mode == Exec::Sequential { 1 } else { 0 },
        Ordering::SeqCst,
    );
}

pub fn exec() -> Exec {
    if MODE.load(Ordering::SeqCst) == 1 {
        Exec::Sequential
    } else {
        Exec::Auto
    }
}

fn parallel() -> bool {
    cfg!(feature = "parallel") && exec() == Exec::Auto
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// First index (in slice order) for which `f` returns `Some`.
pub fn find_first_map<T, R, F>(items: &[T], f: F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel() {
        use rayon::prelude::*;
        return items
            .par_iter()
            .enumerate()
            .find_map_first(|(i, t)| f(t).map(|r| (i, r)));
    }
    items
        .iter()
        .enumerate()
        .find_map(|(i, t)| f(t).map(|r| (i, r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let v: Vec<u32> = (0..1000).collect();
        let a = find_first_map(&v, |&x| (x > 10 && x % 7 == 0).then_some(x * 2));
        set_exec(Exec::Sequential);
        let b = find_first_map(&v, |&x| (x > 10 && x % 7 == 0).then_some(x * 2));
        let m = map(&v, |x| x + 1);
        set_exec(Exec::Auto);
        assert_eq!(a, b);
        assert_eq!(a, Some((14, 28)));
        assert_eq!(m, map(&v, |x| x + 1));
    }
}
