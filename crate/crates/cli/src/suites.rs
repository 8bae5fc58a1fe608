//! Self-checks behind `parkstat verify`: every engine against an
//! independent computation of the same quantity.

use std::time::Instant;

use parkstat_core::counting::{
    closed_form, closed_form_symbolic, count_symbolic, verify_closed_form, CountMemo,
};
use parkstat_core::exactalg::{binomial, Int, Rat};
use parkstat_core::genfun::{area_genfun_table, jet_table, AreaGenFun};
use parkstat_core::moments::{
    expectation_area, factorial_moments_from_jet, p_prime_closed, w_value,
};
use parkstat_core::parking::brute_histogram;
use parkstat_core::Result;

/// Outcome of one invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(
        suite: &'static str,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `count(n, 1) = (n+1)^(n-1)` for `1 <= n <= n_max`, the symbolic counts
/// for `n <= 10`, and the recurrence/closed-form/binomial-identity check
/// on `n <= 30`, `a <= 31`.
pub fn closed_form_suite(n_max: u32) -> Vec<Check> {
    let memo = CountMemo::build(n_max, n_max + 1);
    let bad = (1..=n_max)
        .find(|&n| *memo.get(n, 1).expect("in table") != Int::from(Int::u_pow_u(n + 1, n - 1)));
    let mut out = vec![Check::new(
        "closed-form",
        format!("count(n,1) = (n+1)^(n-1), n = 1..{n_max}"),
        bad.is_none(),
        bad.map_or_else(
            || format!("{n_max} values"),
            |n| format!("differs at n = {n}"),
        ),
    )];
    let bad = (1..=10).find(|&n| count_symbolic(n) != closed_form_symbolic(n));
    out.push(Check::new(
        "closed-form",
        "count_symbolic(n) = a(a+n)^(n-1), n = 1..10",
        bad.is_none(),
        bad.map_or_else(
            || "expanded polynomials equal".into(),
            |n| format!("differs at n = {n}"),
        ),
    ));
    let rep = verify_closed_form(30, 31);
    out.push(Check::new(
        "closed-form",
        "recurrence = a(a+n)^(n-1) = binomial sum, n <= 30, a <= 31",
        rep.success() && rep.proved,
        match rep.failure {
            None => format!(
                "{} points, each n settled by n+1 values of a",
                rep.points_checked
            ),
            Some((n, a, what)) => format!("{what:?} fails at n = {n}, a = {a}"),
        },
    ));
    out
}

/// Largest `a` (capped) with `(n + a - 1)^n <= budget`, or `None` if even
/// `a = 1` is too large.
pub fn oracle_a_max(n: u32, budget: u64, a_cap: Option<u32>) -> Option<u32> {
    let root = Int::from(budget).root(n).to_u64().expect("root of a u64");
    let a = (root + 1).checked_sub(n as u64).filter(|&a| a >= 1)?;
    let a = u32::try_from(a).unwrap_or(u32::MAX);
    Some(a_cap.map_or(a, |c| a.min(c)))
}

/// Pairs `(n, a)` with `n, a >= 1` and `(n + a - 1)^n <= budget` (and
/// `a <= a_cap`), as `(n, a_max)` rows, largest `n` first.
pub fn oracle_region(budget: u64, a_cap: Option<u32>) -> Vec<(u32, u32)> {
    let mut rows: Vec<(u32, u32)> = (1..)
        .map_while(|n| oracle_a_max(n, budget, a_cap).map(|a| (n, a)))
        .collect();
    rows.reverse();
    rows
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    pub verified: u64,
    pub mismatch: Option<(u32, u32)>,
    /// Largest `a` verified for each `n` in the region.
    pub reached: Vec<(u32, u32)>,
    pub complete: bool,
}

/// Width of the `a`-blocks sharing one generating-function sweep.
const ORACLE_BLOCK: u32 = 64;

/// Brute-force histograms against the generating-function engine on every
/// pair of `region`, stopping at the first mismatch or at `deadline`.
pub fn run_oracle(
    region: &[(u32, u32)],
    budget: u64,
    deadline: Option<Instant>,
) -> Result<OracleRun> {
    let mut run = OracleRun {
        verified: 0,
        mismatch: None,
        reached: Vec::new(),
        complete: false,
    };
    for &(n, a_max) in region {
        let mut reached = 0;
        let mut lo = 1;
        while lo <= a_max {
            let hi = a_max.min(lo.saturating_add(ORACLE_BLOCK - 1));
            let polys =
                area_genfun_table(n, n + hi, u64::MAX, |m, a| m == n && (lo..=hi).contains(&a))?;
            for a in lo..=hi {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    run.reached.push((n, reached));
                    return Ok(run);
                }
                let brute = brute_histogram(n, a, budget)?;
                let gf = AreaGenFun {
                    n,
                    a,
                    poly: polys[&(n, a)].clone(),
                };
                let same = gf.to_histogram() == brute;
                if !same {
                    run.mismatch = Some((n, a));
                    run.reached.push((n, reached));
                    return Ok(run);
                }
                run.verified += 1;
                reached = a;
            }
            lo = hi + 1;
        }
        run.reached.push((n, reached));
    }
    run.complete = true;
    Ok(run)
}

pub fn oracle_suite(budget: u64, a_cap: Option<u32>) -> Result<Vec<Check>> {
    let region = oracle_region(budget, a_cap);
    let pairs: u64 = region.iter().map(|&(_, a)| a as u64).sum();
    let run = run_oracle(&region, budget, None)?;
    let detail = match run.mismatch {
        Some((n, a)) => format!("histograms differ at n = {n}, a = {a}"),
        None => format!(
            "{} pairs, n <= {}",
            run.verified,
            region.first().map_or(0, |r| r.0)
        ),
    };
    Ok(vec![Check::new(
        "oracle",
        format!(
            "brute force = generating function where (n+a-1)^n <= {budget}{}",
            cap_note(a_cap)
        ),
        run.complete && run.mismatch.is_none() && run.verified == pairs,
        detail,
    )])
}

fn cap_note(a_cap: Option<u32>) -> String {
    a_cap.map_or_else(String::new, |c| format!(", a <= {c}"))
}

/// Jets at `x = 1` against derivatives of the full polynomials, `a = 1`.
pub fn jets_suite(n_max: u32, order: u32, budget: u64) -> Result<Vec<Check>> {
    let polys = area_genfun_table(n_max, n_max + 1, budget, |n, a| a == 1 && n >= 1)?;
    let jets = jet_table(n_max, n_max + 1, order, budget, |n, a| a == 1 && n >= 1)?;
    let bad = (1..=n_max)
        .find(|n| jets[&(*n, 1)].values != polys[&(*n, 1)].derivatives_at_one(order as usize));
    Ok(vec![Check::new(
        "jets",
        format!("jet_at_one(n,1,{order}) = derivatives of Q(n,1) at 1, n = 1..{n_max}"),
        bad.is_none(),
        bad.map_or_else(
            || format!("{n_max} jets"),
            |n| format!("differs at n = {n}"),
        ),
    )])
}

/// Closed forms for the mean area and the derivative of the sum
/// polynomial.
pub fn expectation_suite(budget: u64) -> Result<Vec<Check>> {
    let jets = jet_table(100, 105, 1, budget, |n, a| n >= 1 && (1..=5).contains(&a))?;
    let bad = jets
        .iter()
        .find(|((n, a), j)| factorial_moments_from_jet(j)[0] != expectation_area(*n, *a));
    let mut out = vec![Check::new(
        "expectation",
        "expectation_area(n,a) = Q'(1)/Q(1), n <= 100, a <= 5",
        bad.is_none(),
        bad.map_or_else(
            || format!("{} points", jets.len()),
            |((n, a), _)| format!("differs at n = {n}, a = {a}"),
        ),
    )];
    let bad = (1..=200u32)
        .find(|&n| expectation_area(n, 1) != Rat::from(-(n as i64)) / 2u32 + w_value(n + 1) / 2u32);
    out.push(Check::new(
        "expectation",
        "expectation_area(n,1) = -n/2 + W_(n+1)/2, n <= 200",
        bad.is_none(),
        bad.map_or_else(|| "200 values".into(), |n| format!("differs at n = {n}")),
    ));
    // P'(n,a)(1) - sum_k C(n,k) P'(n-k,a+k-1)(1) = n p(n,a)
    let pp = |n: u32, a: u32| {
        if n == 0 || a == 0 {
            Int::new()
        } else {
            p_prime_closed(n, a)
        }
    };
    let mut bad = None;
    'outer: for n in 1..=30u32 {
        for a in 1..=5u32 {
            let mut lhs = pp(n, a);
            for k in 0..=n {
                lhs -= binomial(n as u64, k as u64) * pp(n - k, a + k - 1);
            }
            if lhs != Int::from(n) * closed_form(n, a) {
                bad = Some((n, a));
                break 'outer;
            }
        }
    }
    out.push(Check::new(
        "expectation",
        "closed P'(n,a)(1) satisfies its recurrence, n <= 30, a <= 5",
        bad.is_none(),
        bad.map_or_else(
            || "150 points".into(),
            |(n, a)| format!("fails at n = {n}, a = {a}"),
        ),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_rows() {
        assert_eq!(oracle_a_max(7, 10_000_000, None), Some(4));
        assert_eq!(oracle_a_max(8, 10_000_000, None), None);
        assert_eq!(oracle_a_max(2, 10_000_000, None), Some(3161));
        assert_eq!(oracle_a_max(1, 10_000_000, Some(10)), Some(10));
        let r = oracle_region(10_000_000, Some(10));
        assert_eq!(r.first(), Some(&(7, 4)));
        assert_eq!(r.last(), Some(&(1, 10)));
    }

    #[test]
    fn small_oracle_run() {
        let region = oracle_region(5_000, Some(6));
        let run = run_oracle(&region, 5_000, None).unwrap();
        assert!(run.complete);
        assert_eq!(run.mismatch, None);
        assert_eq!(run.verified, region.iter().map(|r| r.1 as u64).sum::<u64>());
    }

    #[test]
    fn suites_pass() {
        for c in closed_form_suite(60) {
            assert!(c.passed, "{c:?}");
        }
        for c in jets_suite(15, 4, 10_000_000).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
