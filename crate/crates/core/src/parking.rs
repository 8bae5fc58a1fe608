//! Parking functions by definition: the sorted-vector criterion, the sum
//! and area statistics, and a brute-force area histogram that serves as
//! the independent oracle for the recurrence engines.

use rug::ops::Pow;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::Int;

/// Default cap on the number of preference vectors the enumerator visits.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A preference vector `(p_1, ..., p_n)` with every `p_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefVector(Vec<u32>);

impl PrefVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::InvalidArgument(
                "preferences must be positive".into(),
            ));
        }
        Ok(PrefVector(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn parks(v: &[u32], a: u32) -> bool {
    parks_with(v, a, &mut Vec::with_capacity(v.len()))
}

/// [`parks`] sorting into a caller-owned buffer.
fn parks_with(v: &[u32], a: u32, scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.extend_from_slice(v);
    scratch.sort_unstable();
    scratch
        .iter()
        .enumerate()
        .all(|(i, &p)| (p as u64) < a as u64 + i as u64 + 1)
}

/// True iff the sorted entries satisfy `p_(i) <= a + i - 1`.
pub fn is_a_parking(v: &PrefVector, a: u32) -> bool {
    parks(&v.0, a)
}

pub fn sum_stat(v: &PrefVector) -> u64 {
    v.0.iter().map(|&p| p as u64).sum()
}

/// `n(2a + n - 1)/2`, the sum of the all-maximal a-parking function.
pub fn sum_ceiling(n: u64, a: u64) -> u64 {
    n * (2 * a + n - 1) / 2
}

/// Largest possible area, `n(2a + n - 3)/2` (zero when there is no
/// a-parking function of length `n`, or only the empty one).
pub fn max_area(n: u64, a: u64) -> u64 {
    if n == 0 || a == 0 {
        0
    } else {
        n * (2 * a + n - 3) / 2
    }
}

/// `n(2a + n - 1)/2 - Sum(v)`; defined only on a-parking functions.
pub fn area_stat(v: &PrefVector, a: u32) -> Result<u64> {
    if !is_a_parking(v, a) {
        return Err(Error::NotParking {
            vector: v.0.clone(),
            a,
        });
    }
    Ok(sum_ceiling(v.len() as u64, a as u64) - sum_stat(v))
}

/// Number of a-parking functions of length `n` with each area value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaHistogram {
    pub n: u32,
    pub a: u32,
    pub counts: BTreeMap<u64, Int>,
}

impl AreaHistogram {
    pub fn total(&self) -> Int {
        Int::sum(self.counts.values()).into()
    }

    /// `area,count` rows with a header, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("area,count\n");
        for (m, c) in &self.counts {
            writeln!(out, "{m},{c}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> = self
            .counts
            .iter()
            .map(|(m, c)| (m.to_string(), json!(c.to_string())))
            .collect();
        json!({
            "n": self.n,
            "a": self.a,
            "total": self.total().to_string(),
            "counts": counts,
        })
    }
}

/// Number of vectors in `[1, n + a - 1]^n`.
pub fn superset_size(n: u32, a: u32) -> Int {
    Int::from(n + a - 1).pow(n)
}

/// Enumerates every vector in `[1, n + a - 1]^n` in odometer order, keeps
/// the a-parking ones and tallies their areas. Runs on the current rayon
/// pool, one task per value of the first coordinate.
pub fn brute_histogram(n: u32, a: u32, budget: u64) -> Result<AreaHistogram> {
    if a == 0 {
        return Err(Error::InvalidArgument(
            "shift parameter a must be at least 1".into(),
        ));
    }
    let required = superset_size(n, a);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut counts = BTreeMap::new();
    if n == 0 {
        counts.insert(0, Int::from(1));
        return Ok(AreaHistogram { n, a, counts });
    }
    let top = n + a - 1;
    let ceiling = sum_ceiling(n as u64, a as u64);
    let bins = max_area(n as u64, a as u64) as usize + 1;
    let tally = (1..=top)
        .into_par_iter()
        .map(|first| {
            let mut local = vec![0u64; bins];
            let mut v = vec![1u32; n as usize];
            let mut scratch = Vec::with_capacity(n as usize);
            v[0] = first;
            loop {
                if parks_with(&v, a, &mut scratch) {
                    let s: u64 = v.iter().map(|&p| p as u64).sum();
                    local[(ceiling - s) as usize] += 1;
                }
                // advance positions 1..n as an odometer
                let mut i = n as usize - 1;
                loop {
                    if i == 0 {
                        return local;
                    }
                    if v[i] < top {
                        v[i] += 1;
                        break;
                    }
                    v[i] = 1;
                    i -= 1;
                }
            }
        })
        .reduce(
            || vec![0u64; bins],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
                x
            },
        );
    for (m, c) in tally.into_iter().enumerate() {
        if c > 0 {
            counts.insert(m as u64, Int::from(c));
        }
    }
    Ok(AreaHistogram { n, a, counts })
}
