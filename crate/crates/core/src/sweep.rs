//! Anti-diagonal evaluation of recurrences over states `(n, a)`.
//!
//! Every recurrence in this crate expresses state `(n, a)` through
//! `(n, a - 1)` and `(n - k, a + k - 1)` for `1 <= k <= n`, all of which lie
//! on the anti-diagonal `n + a - 1`. Sweeping `s = n + a` upwards therefore
//! needs only the previous diagonal; older diagonals are dropped as soon
//! as the next one is complete.

use rayon::prelude::*;

/// Cells of one anti-diagonal `s`, indexed by `n` (`a = s - n`).
pub(crate) struct Diagonal<V> {
    pub s: u32,
    pub cells: Vec<V>,
}

impl<V> Diagonal<V> {
    /// Value at `(n, s - n)`.
    pub fn at(&self, n: u32) -> &V {
        &self.cells[n as usize]
    }
}

/// Evaluates all states with `n <= max_n` and `n + a <= max_sum`.
///
/// `cell(n, a, prev)` computes a state from the previous diagonal (`None`
/// on diagonal 0); `visit` sees each finished diagonal before the one
/// below it is dropped. Cells on one diagonal are computed in parallel on
/// the current rayon pool; results do not depend on the pool size.
pub(crate) fn sweep<V, C, F>(max_n: u32, max_sum: u32, cell: C, mut visit: F)
where
    V: Send + Sync,
    C: Fn(u32, u32, Option<&Diagonal<V>>) -> V + Sync,
    F: FnMut(&Diagonal<V>),
{
    let mut prev: Option<Diagonal<V>> = None;
    for s in 0..=max_sum {
        let width = max_n.min(s);
        let cells: Vec<V> = (0..=width)
            .into_par_iter()
            .map(|n| cell(n, s - n, prev.as_ref()))
            .collect();
        let diag = Diagonal { s, cells };
        visit(&diag);
        prev = Some(diag);
    }
}
