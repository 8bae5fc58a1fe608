//! Moments of the Airy distribution (the law of the Brownian excursion
//! area) and the comparison `E_k(n) / (e_k n^(3k/2)) -> 1`.
//!
//! The moments follow Janson's recurrence
//!
//! ```text
//! K_0 = -1/2,  K_j = (3j - 4)/4 K_{j-1} + sum_{i=1..j-1} K_i K_{j-i}
//! e_k = 4 sqrt(pi) 2^(-k/2) k! K_k / Gamma((3k - 1)/2)
//! ```
//!
//! For odd `k` the Gamma argument is an integer and `sqrt(pi) 2^(-1/2)`
//! survives as `sqrt(2 pi)/2`; for even `k` it is a half-integer and the
//! `sqrt(pi)` cancels, leaving a rational.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::ops::Pow;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::{factorial, pi_fixed, Fixed, Int, Rat, SplitConst};
use crate::genfun::jet_table;
use crate::moments::factorial_moments_from_jet;

/// Decimals carried by ratio and deviation values.
const SCALE: u32 = 40;
/// Significant digits in rendered ratios.
pub const RATIO_DIGITS: usize = 20;

/// `e_k = r (2 pi)^(h/2)` with `h = k mod 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AiryMoment {
    pub k: u32,
    pub value: SplitConst,
}

/// Janson's `K_0, ..., K_max`.
fn janson_k(max: u32) -> Vec<Rat> {
    let mut ks = vec![Rat::from((-1, 2))];
    for j in 1..=max as usize {
        let mut v = Rat::from((3 * j as i64 - 4, 4)) * &ks[j - 1];
        for i in 1..j {
            v += Rat::from(&ks[i] * &ks[j - i]);
        }
        ks.push(v);
    }
    ks
}

/// `e_1, ..., e_K`.
pub fn airy_moments(max_k: u32) -> Vec<AiryMoment> {
    let ks = janson_k(max_k);
    (1..=max_k)
        .map(|k| {
            let base = Rat::from(4) * Rat::from(factorial(k)) * &ks[k as usize];
            let value = if k % 2 == 1 {
                // Gamma((3k-1)/2) = ((3k-3)/2)!,  2^(-k/2) sqrt(pi) = 2^(-(k+1)/2) sqrt(2 pi)
                let g = factorial((3 * k - 3) / 2);
                let two = Int::from(2).pow(k.div_ceil(2));
                SplitConst::root_two_pi(base / Rat::from(g * two))
            } else {
                // Gamma(p + 1/2) = (2p)! sqrt(pi) / (4^p p!),  p = (3k - 2)/2
                let p = (3 * k - 2) / 2;
                let gamma_over_root_pi =
                    Rat::from((factorial(2 * p), Int::from(4).pow(p) * factorial(p)));
                let two = Int::from(2).pow(k / 2);
                SplitConst::rational(base / gamma_over_root_pi / Rat::from(two))
            };
            AiryMoment { k, value }
        })
        .collect()
}

/// `E_k / (e_k n^(3k/2))` to [`SCALE`] decimals (truncated).
pub fn moment_ratio(ek: &AiryMoment, n: u32, moment: &Rat) -> Fixed {
    let k = ek.k;
    let int_pow = Rat::from(Int::from(n).pow(3 * k / 2));
    let q = Rat::from(moment / &ek.value.r) / int_pow;
    // remaining factor: (2 pi)^(h/2) * n^((3k mod 2)/2); both are present exactly when k is odd
    if k.is_multiple_of(2) {
        Fixed::from_rat(&q, SCALE)
    } else {
        let pi = pi_fixed(SCALE + 30).to_rat();
        let sq = Rat::from((&q).pow(2)) / (pi * 2u32 * n);
        Fixed::sqrt_rat(&sq, SCALE)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticRow {
    pub k: u32,
    pub n: u32,
    pub moment: Rat,
    pub ratio: Fixed,
    pub deviation: Fixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticSummary {
    pub k: u32,
    /// `|ratio - 1|` strictly decreases along the grid.
    pub decreasing: bool,
    /// `|ratio - 1| < threshold` at the largest `n`.
    pub below_threshold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticReport {
    pub max_k: u32,
    pub grid: Vec<u32>,
    pub threshold: Rat,
    pub airy: Vec<AiryMoment>,
    pub rows: Vec<AsymptoticRow>,
    pub summary: Vec<AsymptoticSummary>,
}

impl AsymptoticReport {
    pub fn passed(&self) -> bool {
        self.summary
            .iter()
            .all(|s| s.decreasing && s.below_threshold)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n,ratio,deviation\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.k,
                r.n,
                r.ratio.to_decimal(RATIO_DIGITS),
                r.deviation.to_decimal(RATIO_DIGITS)
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "K": self.max_k,
            "grid": self.grid,
            "threshold": self.threshold.to_string(),
            "airy": self.airy.iter().map(|e| json!({
                "k": e.k,
                "r": e.value.r.to_string(),
                "h": e.value.h,
                "decimal": e.value.to_decimal(RATIO_DIGITS),
            })).collect::<Vec<_>>(),
            "rows": self.rows.iter().map(|r| json!({
                "k": r.k,
                "n": r.n,
                "E_k": r.moment.to_string(),
                "ratio": r.ratio.to_decimal(RATIO_DIGITS),
                "deviation": r.deviation.to_decimal(RATIO_DIGITS),
            })).collect::<Vec<_>>(),
            "summary": self.summary.iter().map(|s| json!({
                "k": s.k,
                "decreasing": s.decreasing,
                "below_threshold": s.below_threshold,
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.airy {
            writeln!(
                out,
                "e_{} = {} ~ {}",
                e.k,
                e.value,
                e.value.to_decimal(RATIO_DIGITS)
            )
            .unwrap();
        }
        for s in &self.summary {
            writeln!(
                out,
                "k = {}: deviations {}; {} threshold {} at n = {}",
                s.k,
                if s.decreasing {
                    "decreasing"
                } else {
                    "NOT decreasing"
                },
                if s.below_threshold {
                    "below"
                } else {
                    "NOT below"
                },
                self.threshold,
                self.grid.last().copied().unwrap_or_default()
            )
            .unwrap();
        }
        out
    }
}

/// Compares the exact factorial moments `E_k(n, 1)`, `k <= max_k`, with
/// `e_k n^(3k/2)` at each grid point.
pub fn asymptotic_check(
    max_k: u32,
    grid: &[u32],
    threshold: &Rat,
    budget: u64,
) -> Result<AsymptoticReport> {
    if max_k == 0 || grid.is_empty() {
        return Err(Error::InvalidArgument(
            "need K >= 1 and a non-empty grid".into(),
        ));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(Error::InvalidArgument(
            "grid must be strictly increasing positive integers".into(),
        ));
    }
    let airy = airy_moments(max_k);
    let top = *grid.last().expect("non-empty");
    let jets = jet_table(top, top + 1, max_k, budget, |n, a| {
        a == 1 && grid.binary_search(&n).is_ok()
    })?;
    let moments: BTreeMap<u32, Vec<Rat>> = jets
        .iter()
        .map(|((n, _), j)| (*n, factorial_moments_from_jet(j)))
        .collect();
    let limit = Fixed::from_rat(threshold, SCALE);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for e in &airy {
        let mut devs = Vec::new();
        for &n in grid {
            let moment = moments[&n][e.k as usize - 1].clone();
            let ratio = moment_ratio(e, n, &moment);
            let deviation = ratio.distance_from_one();
            devs.push(deviation.clone());
            rows.push(AsymptoticRow {
                k: e.k,
                n,
                moment,
                ratio,
                deviation,
            });
        }
        summary.push(AsymptoticSummary {
            k: e.k,
            decreasing: devs.windows(2).all(|w| w[1] < w[0]),
            below_threshold: devs.last().expect("non-empty grid") < &limit,
        });
    }
    Ok(AsymptoticReport {
        max_k,
        grid: grid.to_vec(),
        threshold: threshold.clone(),
        airy,
        rows,
        summary,
    })
}
