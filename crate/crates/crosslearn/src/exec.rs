//! Thread-backed executor for the per-task gradient fan-out.

use crosslearn_core::trainer::Executor;

/// Runs task closures on scoped threads, at most `threads` at a time. Every
/// task owns its environment and random stream, so results match
/// [`SerialExecutor`](crosslearn_core::trainer::SerialExecutor) exactly.
#[derive(Debug, Clone, Copy)]
pub struct ThreadedExecutor {
    threads: usize,
}

impl ThreadedExecutor {
    pub fn new(threads: usize) -> Self {
        Self { threads: threads.max(1) }
    }

    /// One thread per available core.
    pub fn available() -> Self {
        Self::new(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl Executor for ThreadedExecutor {
    fn map_mut<W, T, F>(&self, items: &mut [W], f: F) -> Vec<T>
    where
        W: Send,
        T: Send,
        F: Fn(usize, &mut W) -> T + Sync,
    {
        let n = items.len();
        if self.threads == 1 || n <= 1 {
            return items.iter_mut().enumerate().map(|(i, w)| f(i, w)).collect();
        }
        let chunk = n.div_ceil(self.threads);
        let f = &f;
        std::thread::scope(|scope| {
            let handles: Vec<_> = items
                .chunks_mut(chunk)
                .enumerate()
                .map(|(c, part)| {
                    scope.spawn(move || {
                        part.iter_mut().enumerate().map(|(k, w)| f(c * chunk + k, w)).collect::<Vec<T>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("task worker panicked")).collect()
        })
    }
}
