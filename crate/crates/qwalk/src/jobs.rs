use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// f over `items` on up to `jobs` threads; results keep the input order.
pub fn run_jobs<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(|r| r.expect("job finished")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_kept() {
        let v: Vec<u64> = (0..50).collect();
        let a = run_jobs(&v, 4, |x| x * x);
        assert_eq!(a, run_jobs(&v, 1, |x| x * x));
        assert_eq!(a[7], 49);
    }
}
