//! Data-parallel helpers. With the `parallel` feature these run on the rayon
//! pool; without it they are plain sequential loops with identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `items.map(f).filter_map(..)` keeping input order.
pub fn filter_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().filter_map(f).collect()
    }
}

/// `items.map(f)` keeping input order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn any<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().any(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().any(f)
    }
}

/// First (by input position) item for which `f` returns `Some`.
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(f)
    }
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    !any(items, |t| !f(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let v: Vec<u32> = (0..1000).collect();
        let odd = filter_map(&v, |&x| (x % 2 == 1).then_some(x));
        assert_eq!(odd, (0..1000).filter(|x| x % 2 == 1).collect::<Vec<_>>());
        assert_eq!(find_map_first(&v, |&x| (x > 500 && x % 7 == 0).then_some(x)), Some(504));
        assert!(any(&v, |&x| x == 999));
        assert!(all(&v, |&x| x < 1000));
    }
}
