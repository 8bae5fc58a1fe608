//! Area generating polynomials and their derivative jets at `x = 1`.
//!
//! `Q(n, a)(x) = Q(n, a-1)(x) + sum_{k=1..n} C(n, k) x^(k(k+2a-3)/2) Q(n-k, a+k-1)(x)`
//! with `Q(0, a) = 1` and `Q(n, 0) = 0` for `n >= 1`.
//!
//! Two engines evaluate it: [`area_genfun`] builds full polynomials, and
//! [`jet_at_one`] carries only `Q(1), Q'(1), ..., Q^(K)(1)` per state.
//! Each one is the check on the other.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::Assign;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::{factorial, pascal_rows, Int, PolyX};
use crate::parking::{max_area, sum_ceiling, AreaHistogram, DEFAULT_BUDGET};
use crate::sweep::sweep;

/// Exponent `k(k + 2a - 3)/2` of the monomial attached to the `k`-ones term.
pub fn area_exponent(k: u32, a: u32) -> u64 {
    debug_assert!(k >= 1 && a >= 1);
    let k = k as u64;
    (k * (k + 2 * a as u64) - 3 * k) / 2
}

/// Largest number of coefficients alive at once while sweeping
/// (two neighbouring diagonals).
pub fn poly_peak_cells(max_n: u32, max_sum: u32) -> u128 {
    let cells = |s: u32| -> u128 {
        (0..=max_n.min(s))
            .map(|n| max_area(n as u64, (s - n) as u64) as u128 + 1)
            .sum()
    };
    let mut peak = 0u128;
    let mut last = 0u128;
    for s in 0..=max_sum {
        let c = cells(s);
        peak = peak.max(c + last);
        last = c;
    }
    peak
}

/// Integers alive at once in a jet sweep of the given order.
pub fn jet_peak_cells(max_n: u32, max_sum: u32, order: u32) -> u128 {
    let width = max_n.min(max_sum) as u128 + 1;
    2 * width * (order as u128 + 1)
}

fn check_budget(required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: Int::from(required),
            budget,
        });
    }
    Ok(())
}

/// `Q(n, a)(x)`: the coefficient of `x^m` counts a-parking functions of
/// length `n` with area `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaGenFun {
    pub n: u32,
    pub a: u32,
    pub poly: PolyX,
}

impl AreaGenFun {
    /// Nonzero coefficients as a histogram.
    pub fn to_histogram(&self) -> AreaHistogram {
        let counts = self
            .poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m as u64, c.clone()))
            .collect();
        AreaHistogram {
            n: self.n,
            a: self.a,
            counts,
        }
    }

    /// One `area,count` row per coefficient `0..=deg`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("area,count\n");
        for (m, c) in self.poly.coeffs().iter().enumerate() {
            writeln!(out, "{m},{c}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "a": self.a,
            "total": self.poly.eval_at_one().to_string(),
            "coeffs": self.poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Full polynomials for every state `(n', a')` with `n' <= max_n`,
/// `n' + a' <= max_sum` selected by `keep`.
pub fn area_genfun_table(
    max_n: u32,
    max_sum: u32,
    budget: u64,
    keep: impl Fn(u32, u32) -> bool,
) -> Result<BTreeMap<(u32, u32), PolyX>> {
    check_budget(poly_peak_cells(max_n, max_sum), budget)?;
    let binom = pascal_rows(max_n as usize);
    let mut out = BTreeMap::new();
    sweep(
        max_n,
        max_sum,
        |n, a, prev| {
            if n == 0 {
                return PolyX::one();
            }
            if a == 0 {
                return PolyX::zero();
            }
            let prev = prev.expect("diagonal 0 holds only (0, 0)");
            let mut acc = prev.at(n).clone();
            for k in 1..=n {
                acc.add_scaled_shifted_assign(
                    prev.at(n - k),
                    &binom[n as usize][k as usize],
                    area_exponent(k, a) as usize,
                );
            }
            acc
        },
        |diag| {
            for (n, p) in diag.cells.iter().enumerate() {
                let n = n as u32;
                if keep(n, diag.s - n) {
                    out.insert((n, diag.s - n), p.clone());
                }
            }
        },
    );
    Ok(out)
}

pub fn area_genfun_budgeted(n: u32, a: u32, budget: u64) -> Result<AreaGenFun> {
    let mut t = area_genfun_table(n, n + a, budget, |m, b| m == n && b == a)?;
    let poly = t.remove(&(n, a)).expect("target state kept");
    Ok(AreaGenFun { n, a, poly })
}

pub fn area_genfun(n: u32, a: u32) -> Result<AreaGenFun> {
    area_genfun_budgeted(n, a, DEFAULT_BUDGET)
}

/// `P(n, a)(x) = x^(n(2a+n-1)/2) Q(n, a)(1/x)`, the generating polynomial of
/// the sum statistic.
pub fn sum_genfun(n: u32, a: u32) -> Result<PolyX> {
    let q = area_genfun(n, a)?;
    Ok(q.poly.reversed(sum_ceiling(n as u64, a as u64) as usize))
}

/// `Q(1), Q'(1), ..., Q^(K)(1)` for one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetAtOne {
    pub n: u32,
    pub a: u32,
    pub order: u32,
    pub values: Vec<Int>,
}

impl JetAtOne {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "a": self.a,
            "K": self.order,
            "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Jets for every state selected by `keep`.
///
/// Internally each state holds Taylor coefficients `T_i = Q^(i)(1)/i!`
/// (integers: `T_i = sum_m c_m C(m, i)`). Multiplying by `x^e` acts on them
/// as `T_i -> sum_t C(e, t) T_{i-t}`, which is the Leibniz expansion of the
/// differentiated recurrence divided through by `i!`.
pub fn jet_table(
    max_n: u32,
    max_sum: u32,
    order: u32,
    budget: u64,
    keep: impl Fn(u32, u32) -> bool,
) -> Result<BTreeMap<(u32, u32), JetAtOne>> {
    check_budget(jet_peak_cells(max_n, max_sum, order), budget)?;
    let len = order as usize + 1;
    let binom = pascal_rows(max_n as usize);
    let mut out = BTreeMap::new();
    sweep(
        max_n,
        max_sum,
        |n, a, prev| -> Vec<Int> {
            let mut acc = vec![Int::new(); len];
            if n == 0 {
                acc[0] = Int::from(1);
                return acc;
            }
            if a == 0 {
                return acc;
            }
            let prev = prev.expect("diagonal 0 holds only (0, 0)");
            acc.clone_from(prev.at(n));
            let mut shift_binom = vec![Int::new(); len];
            let mut tmp = Int::new();
            for k in 1..=n {
                let e = area_exponent(k, a);
                // C(e, t), t = 0..=order
                shift_binom[0] = Int::from(1);
                for t in 1..len {
                    let next = Int::from(&shift_binom[t - 1] * (e + 1).saturating_sub(t as u64));
                    shift_binom[t] = next / t as u64;
                }
                let src = prev.at(n - k);
                let c_nk = &binom[n as usize][k as usize];
                for i in 0..len {
                    tmp.assign(0);
                    for t in 0..=i.min(e as usize) {
                        if !src[i - t].is_zero() {
                            tmp += &shift_binom[t] * &src[i - t];
                        }
                    }
                    if !tmp.is_zero() {
                        acc[i] += c_nk * &tmp;
                    }
                }
            }
            acc
        },
        |diag| {
            for (n, taylor) in diag.cells.iter().enumerate() {
                let n = n as u32;
                let a = diag.s - n;
                if keep(n, a) {
                    let values = taylor
                        .iter()
                        .enumerate()
                        .map(|(i, t)| factorial(i as u32) * t)
                        .collect();
                    out.insert(
                        (n, a),
                        JetAtOne {
                            n,
                            a,
                            order,
                            values,
                        },
                    );
                }
            }
        },
    );
    Ok(out)
}

pub fn jet_at_one_budgeted(n: u32, a: u32, order: u32, budget: u64) -> Result<JetAtOne> {
    let mut t = jet_table(n, n + a, order, budget, |m, b| m == n && b == a)?;
    Ok(t.remove(&(n, a)).expect("target state kept"))
}

pub fn jet_at_one(n: u32, a: u32, order: u32) -> Result<JetAtOne> {
    jet_at_one_budgeted(n, a, order, DEFAULT_BUDGET)
}
