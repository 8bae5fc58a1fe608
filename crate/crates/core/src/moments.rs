//! Expectations, factorial moments and their conversion to raw, central
//! and scaled moments; scaled area histograms.

use std::fmt::Write as _;
use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use serde_json::json;

use crate::counting::closed_form;
use crate::error::{Error, Result};
use crate::exactalg::{binomial, factorial, rat_to_decimal, signed_sqrt_to_decimal, Int, Rat};
use crate::genfun::{area_genfun_budgeted, jet_at_one_budgeted, JetAtOne};
use crate::parking::DEFAULT_BUDGET;

/// `W_n = (n!/n^(n-1)) sum_{k=0..n-2} n^k/k!`; `W_1 = 0` (empty sum).
pub fn w_value(n: u32) -> Rat {
    assert!(n >= 1, "W_n needs n >= 1");
    let nn = Int::from(n);
    let mut sum = Rat::new();
    for k in 0..n.saturating_sub(1) {
        sum += Rat::from((Int::from((&nn).pow(k)), factorial(k)));
    }
    sum * Rat::from((factorial(n), Int::from((&nn).pow(n - 1))))
}

/// `sum_{j=1..n} n!/((n-j)! (a+n)^(j-1))`, shared by both expectations.
fn falling_sum(n: u32, a: u32) -> Rat {
    let base = Int::from(a + n);
    let mut acc = Rat::new();
    let mut ff = Int::from(1);
    for j in 1..=n {
        ff *= n - j + 1;
        acc += Rat::from((ff.clone(), Int::from((&base).pow(j - 1))));
    }
    acc
}

/// Closed-form mean area, `n(a-2)/2 + (1/2) sum_{j=1..n} n!/((n-j)!(a+n)^(j-1))`.
pub fn expectation_area(n: u32, a: u32) -> Rat {
    Rat::from((Int::from(n) * (Int::from(a) - 2), 2)) + falling_sum(n, a) / 2u32
}

/// Closed-form mean sum, `n(a+n+1)/2 - (1/2) sum_{j=1..n} n!/((n-j)!(a+n)^(j-1))`.
pub fn expectation_sum(n: u32, a: u32) -> Rat {
    Rat::from((Int::from(n) * (a + n + 1), 2)) - falling_sum(n, a) / 2u32
}

/// `P'(n,a)(1) = (1/2) a n (a+n+1)(a+n)^(n-1) - (1/2) sum_{j=1..n} C(n,j) j! a (a+n)^(n-j)`,
/// i.e. the mean sum times `a (a+n)^(n-1)`.
pub fn p_prime_closed(n: u32, a: u32) -> Int {
    let base = Int::from(a + n);
    let mut twice = Int::from(a) * n * (a + n + 1) * Int::from((&base).pow(n.saturating_sub(1)));
    for j in 1..=n {
        twice -= binomial(n as u64, j as u64) * factorial(j) * a * Int::from((&base).pow(n - j));
    }
    let (q, r) = twice.div_rem(Int::from(2));
    debug_assert!(r.is_zero(), "P'(1) must be an integer");
    q
}

/// `E_1, ..., E_K` from a jet: `E_k = Q^(k)(1) / Q(1)`.
pub fn factorial_moments_from_jet(jet: &JetAtOne) -> Vec<Rat> {
    let total = &jet.values[0];
    jet.values[1..]
        .iter()
        .map(|v| Rat::from((v.clone(), total.clone())))
        .collect()
}

/// Factorial moments `E_1..E_K` of the area on a-parking functions of length `n`.
pub fn factorial_moments(n: u32, a: u32, order: u32) -> Result<Vec<Rat>> {
    factorial_moments_budgeted(n, a, order, DEFAULT_BUDGET)
}

pub fn factorial_moments_budgeted(n: u32, a: u32, order: u32, budget: u64) -> Result<Vec<Rat>> {
    if n == 0 || a == 0 || order == 0 {
        return Err(Error::InvalidArgument(
            "factorial moments need n, a, K >= 1".into(),
        ));
    }
    let jet = jet_at_one_budgeted(n, a, order, budget)?;
    debug_assert_eq!(jet.values[0], closed_form(n, a));
    Ok(factorial_moments_from_jet(&jet))
}

static STIRLING2: OnceLock<RwLock<Vec<Vec<Int>>>> = OnceLock::new();

/// Rows `0..=max` of the Stirling numbers of the second kind, from
/// `S(j, k) = k S(j-1, k) + S(j-1, k-1)`. Rows are cached process-wide.
pub fn stirling2_rows(max: usize) -> Vec<Vec<Int>> {
    let cache = STIRLING2.get_or_init(|| RwLock::new(vec![vec![Int::from(1)]]));
    {
        let rows = cache.read().expect("stirling cache");
        if rows.len() > max {
            return rows[..=max].to_vec();
        }
    }
    let mut rows = cache.write().expect("stirling cache");
    while rows.len() <= max {
        let j = rows.len();
        let prev = &rows[j - 1];
        let mut row = vec![Int::new(); j + 1];
        for (k, slot) in row.iter_mut().enumerate().skip(1) {
            let mut v = Int::from(k) * prev.get(k).cloned().unwrap_or_default();
            v += &prev[k - 1];
            *slot = v;
        }
        rows.push(row);
    }
    rows[..=max].to_vec()
}

/// `central_j / Var^(j/2)`, kept split so no irrational value is formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMoment {
    pub j: u32,
    pub central: Rat,
    pub variance: Rat,
}

impl ScaledMoment {
    /// Twice the power of the variance in the denominator.
    pub fn var_power_twice(&self) -> u32 {
        self.j
    }

    /// Decimal value with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        let neg = self.central.cmp0() == std::cmp::Ordering::Less;
        if self.j.is_multiple_of(2) {
            let v = &self.central / Rat::from((&self.variance).pow(self.j as i32 / 2));
            rat_to_decimal(&v, sig)
        } else {
            // central / Var^(j/2) = sign * sqrt(central^2 / Var^j)
            let sq =
                Rat::from((&self.central).pow(2)) / Rat::from((&self.variance).pow(self.j as i32));
            signed_sqrt_to_decimal(neg, &sq, sig)
        }
    }
}

/// Raw, central and scaled moments derived from factorial moments. Index
/// `j - 1` holds the `j`-th moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentFragments {
    pub raw: Vec<Rat>,
    pub central: Vec<Rat>,
    /// `Err(ZeroVariance)` when the variance vanishes (or fewer than two
    /// moments are given).
    pub scaled: std::result::Result<Vec<ScaledMoment>, Error>,
}

/// `raw_j = sum_k S(j,k) E_k`, `central_j = sum_i C(j,i) raw_i (-mean)^(j-i)`,
/// `scaled_j = central_j / Var^(j/2)`.
pub fn convert_moments(factorial_moments: &[Rat]) -> MomentFragments {
    let order = factorial_moments.len();
    let s2 = stirling2_rows(order);
    let raw: Vec<Rat> = (1..=order)
        .map(|j| {
            (1..=j)
                .map(|k| Rat::from(&factorial_moments[k - 1] * &s2[j][k]))
                .sum()
        })
        .collect();
    let mean = raw.first().cloned().unwrap_or_default();
    let neg_mean = Rat::from(-&mean);
    let raw_at = |i: usize| {
        if i == 0 {
            Rat::from(1)
        } else {
            raw[i - 1].clone()
        }
    };
    let central: Vec<Rat> = (1..=order)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    Rat::from(binomial(j as u64, i as u64))
                        * raw_at(i)
                        * Rat::from((&neg_mean).pow((j - i) as i32))
                })
                .sum()
        })
        .collect();
    let scaled = match central.get(1) {
        Some(var) if !var.is_zero() => Ok(central
            .iter()
            .enumerate()
            .map(|(i, c)| ScaledMoment {
                j: i as u32 + 1,
                central: c.clone(),
                variance: var.clone(),
            })
            .collect()),
        _ => Err(Error::ZeroVariance),
    };
    MomentFragments {
        raw,
        central,
        scaled,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub n: u32,
    pub a: u32,
    pub order: u32,
    pub factorial: Vec<Rat>,
    pub raw: Vec<Rat>,
    pub central: Vec<Rat>,
    pub scaled: std::result::Result<Vec<ScaledMoment>, Error>,
}

impl MomentTable {
    pub fn compute(n: u32, a: u32, order: u32, budget: u64) -> Result<Self> {
        let factorial = factorial_moments_budgeted(n, a, order, budget)?;
        let MomentFragments {
            raw,
            central,
            scaled,
        } = convert_moments(&factorial);
        Ok(MomentTable {
            n,
            a,
            order,
            factorial,
            raw,
            central,
            scaled,
        })
    }

    pub fn variance(&self) -> Option<&Rat> {
        self.central.get(1)
    }

    pub fn to_json(&self, sig: usize) -> serde_json::Value {
        let strs = |v: &[Rat]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
        let scaled_split = match &self.scaled {
            Ok(s) => json!(s
                .iter()
                .map(|m| json!({
                    "central_j": m.central.to_string(),
                    "var_power": format!("{}/2", m.var_power_twice()),
                }))
                .collect::<Vec<_>>()),
            Err(_) => serde_json::Value::Null,
        };
        let scaled_decimal = match &self.scaled {
            Ok(s) => json!(s.iter().map(|m| m.to_decimal(sig)).collect::<Vec<_>>()),
            Err(_) => serde_json::Value::Null,
        };
        json!({
            "n": self.n,
            "a": self.a,
            "K": self.order,
            "factorial": strs(&self.factorial),
            "raw": strs(&self.raw),
            "central": strs(&self.central),
            "scaled_split": scaled_split,
            "scaled_decimal": scaled_decimal,
            "scaled_undefined": self.scaled.is_err(),
        })
    }

    /// `j,factorial,raw,central,scaled` rows; `scaled` is empty when undefined.
    pub fn to_csv(&self, sig: usize) -> String {
        let mut out = String::from("j,factorial,raw,central,scaled\n");
        for j in 0..self.factorial.len() {
            let scaled = match &self.scaled {
                Ok(s) => s[j].to_decimal(sig),
                Err(_) => String::new(),
            };
            writeln!(
                out,
                "{},{},{},{},{}",
                j + 1,
                self.factorial[j],
                self.raw[j],
                self.central[j],
                scaled
            )
            .unwrap();
        }
        out
    }

    pub fn to_text(&self, sig: usize) -> String {
        let mut out = format!("area moments, n = {}, a = {}\n", self.n, self.a);
        for j in 0..self.factorial.len() {
            writeln!(out, "E_{} = {}", j + 1, self.factorial[j]).unwrap();
        }
        match self.variance() {
            Some(v) if !v.is_zero() => {
                writeln!(out, "mean = {}", self.raw[0]).unwrap();
                writeln!(out, "variance = {v}").unwrap();
                if let Ok(s) = &self.scaled {
                    for m in s {
                        writeln!(out, "scaled_{} = {}", m.j, m.to_decimal(sig)).unwrap();
                    }
                }
            }
            _ => writeln!(out, "variance = 0: scaled moments undefined").unwrap(),
        }
        out
    }
}

/// One row of a scaled histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledRow {
    pub area: u64,
    pub count: Int,
    /// `(area - E) / sigma`
    pub x: String,
    /// `count * sigma / total`
    pub density: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledHistogram {
    pub n: u32,
    pub a: u32,
    pub mean: Rat,
    pub variance: Rat,
    pub total: Int,
    pub rows: Vec<ScaledRow>,
}

impl ScaledHistogram {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("area,count,x,density\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.area, r.count, r.x, r.density).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "a": self.a,
            "mean": self.mean.to_string(),
            "variance": self.variance.to_string(),
            "total": self.total.to_string(),
            "rows": self.rows.iter().map(|r| json!({
                "area": r.area,
                "count": r.count.to_string(),
                "x": r.x,
                "density": r.density,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Exact area histogram with the standardized coordinate and density of
/// each bar, rendered to `precision` significant digits.
pub fn scaled_histogram(n: u32, a: u32, precision: usize, budget: u64) -> Result<ScaledHistogram> {
    if n < 2 || a == 0 {
        return Err(Error::InvalidArgument(
            "scaled histogram needs n >= 2 and a >= 1".into(),
        ));
    }
    let q = area_genfun_budgeted(n, a, budget)?;
    let d = q.poly.derivatives_at_one(2);
    let total = d[0].clone();
    let mean = Rat::from((d[1].clone(), total.clone()));
    let second = Rat::from((d[2].clone(), total.clone()));
    let variance = second + &mean - Rat::from((&mean).pow(2));
    let total_sq = Rat::from(Int::from((&total).pow(2)));
    let rows = q
        .poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let dev = Rat::from(m) - &mean;
            let neg = dev.cmp0() == std::cmp::Ordering::Less;
            let x = signed_sqrt_to_decimal(neg, &(Rat::from((&dev).pow(2)) / &variance), precision);
            let density = signed_sqrt_to_decimal(
                false,
                &(Rat::from(Int::from(c.pow(2))) * &variance / &total_sq),
                precision,
            );
            ScaledRow {
                area: m as u64,
                count: c.clone(),
                x,
                density,
            }
        })
        .collect();
    Ok(ScaledHistogram {
        n,
        a,
        mean,
        variance,
        total,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::{area_genfun, jet_at_one, jet_table, sum_genfun};

    fn r(p: i64, q: i64) -> Rat {
        Rat::from((p, q))
    }

    #[test]
    fn w_examples() {
        assert_eq!(w_value(1), 0);
        assert_eq!(w_value(2), 1);
        assert_eq!(w_value(3), r(8, 3));
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation_area(1, 1), 0);
        assert_eq!(expectation_area(2, 1), r(1, 3));
        assert_eq!(expectation_area(3, 1), r(15, 16));
        assert_eq!(expectation_sum(2, 1), r(8, 3));
        assert_eq!(expectation_sum(1, 1), 1);
        assert_eq!(expectation_sum(3, 1), r(81, 16));
    }

    #[test]
    fn sum_plus_area_expectations() {
        for n in 1..12u32 {
            for a in 1..5u32 {
                let total = expectation_area(n, a) + expectation_sum(n, a);
                assert_eq!(total, r((n * (2 * a + n - 1)) as i64, 2));
            }
        }
    }

    #[test]
    fn p_prime_examples() {
        assert_eq!(p_prime_closed(1, 1), 1);
        assert_eq!(p_prime_closed(2, 1), 8);
        assert_eq!(p_prime_closed(3, 1), 81);
        for (n, a) in [(4u32, 1u32), (3, 3), (6, 2)] {
            let p = sum_genfun(n, a).unwrap();
            assert_eq!(p_prime_closed(n, a), p.derivatives_at_one(1)[1]);
        }
    }

    #[test]
    fn p_prime_recurrence() {
        // P'(n,a)(1) - sum_{k=0..n} C(n,k) P'(n-k,a+k-1)(1) = n p(n,a)
        let pp = |n: u32, a: u32| {
            if n == 0 || a == 0 {
                Int::new()
            } else {
                p_prime_closed(n, a)
            }
        };
        for n in 1..=12u32 {
            for a in 1..=5u32 {
                let mut lhs = pp(n, a);
                for k in 0..=n {
                    lhs -= binomial(n as u64, k as u64) * pp(n - k, a + k - 1);
                }
                assert_eq!(lhs, Int::from(n) * closed_form(n, a), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn expectation_matches_jets() {
        let jets = jet_table(40, 45, 1, DEFAULT_BUDGET, |n, a| {
            n >= 1 && (1..=5).contains(&a)
        })
        .unwrap();
        for ((n, a), jet) in &jets {
            assert_eq!(
                expectation_area(*n, *a) * Rat::from(jet.values[0].clone()),
                jet.values[1],
                "n={n} a={a}"
            );
        }
    }

    #[test]
    fn w_relation() {
        for n in 1..=60u32 {
            assert_eq!(
                expectation_area(n, 1),
                Rat::from(-(n as i64)) / 2u32 + w_value(n + 1) / 2u32
            );
        }
    }

    #[test]
    fn factorial_moment_examples() {
        assert_eq!(
            factorial_moments(3, 1, 2).unwrap(),
            vec![r(15, 16), r(3, 4)]
        );
        assert_eq!(
            factorial_moments(2, 1, 2).unwrap(),
            vec![r(1, 3), Rat::new()]
        );
        assert_eq!(factorial_moments(1, 1, 4).unwrap(), vec![Rat::new(); 4]);
        assert!(factorial_moments(0, 1, 2).is_err());
    }

    #[test]
    fn conversion_examples() {
        let f = convert_moments(&[r(15, 16), r(3, 4)]);
        assert_eq!(f.raw, vec![r(15, 16), r(27, 16)]);
        assert_eq!(f.central, vec![Rat::new(), r(207, 256)]);
        let s = f.scaled.unwrap();
        assert_eq!(s[1].to_decimal(5), "1.0000");
        assert_eq!(s[0].to_decimal(5), "0");

        let z = convert_moments(&[Rat::new(), Rat::new()]);
        assert_eq!(z.scaled, Err(Error::ZeroVariance));
        assert_eq!(z.central[0], 0);
    }

    #[test]
    fn conversion_matches_direct_sums() {
        for n in 2..=20u32 {
            let q = area_genfun(n, 1).unwrap();
            let total = Rat::from(q.poly.eval_at_one());
            let order = 5;
            let fr = convert_moments(&factorial_moments(n, 1, order).unwrap());
            let mean = Rat::from(&fr.raw[0]);
            for j in 1..=order as usize {
                let mut raw = Rat::new();
                let mut central = Rat::new();
                for (m, c) in q.poly.coeffs().iter().enumerate() {
                    raw += Rat::from(Int::from(m).pow(j as u32) * c);
                    central += (Rat::from(m) - &mean).pow(j as i32) * Rat::from(c);
                }
                assert_eq!(fr.raw[j - 1], raw / &total);
                assert_eq!(fr.central[j - 1], central / &total);
            }
        }
    }

    #[test]
    fn stirling_rows() {
        let s = stirling2_rows(5);
        assert_eq!(
            s[4],
            vec![
                Int::new(),
                Int::from(1),
                Int::from(7),
                Int::from(6),
                Int::from(1)
            ]
        );
        assert_eq!(stirling2_rows(3)[3][2], 3);
    }

    #[test]
    fn moment_table_json() {
        let t = MomentTable::compute(3, 1, 2, DEFAULT_BUDGET).unwrap();
        let v = t.to_json(6);
        assert_eq!(v["factorial"], json!(["15/16", "3/4"]));
        assert_eq!(v["central"][1], "207/256");
        assert_eq!(v["scaled_split"][1]["var_power"], "2/2");
        let t1 = MomentTable::compute(1, 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(t1.to_json(6)["scaled_undefined"], true);
        assert!(t1.to_text(6).contains("undefined"));
    }

    #[test]
    fn scaled_histogram_examples() {
        let h = scaled_histogram(2, 1, 15, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.mean, r(1, 3));
        assert_eq!(h.rows.len(), 2);
        assert_eq!(
            (h.rows[0].count.clone(), h.rows[1].count.clone()),
            (Int::from(2), Int::from(1))
        );
        // Var = 2/9, sigma = sqrt(2)/3; x_0 = -(1/3)/sigma = -1/sqrt(2)
        assert_eq!(h.rows[0].x, "-0.707106781186548");
        assert_eq!(h.rows[1].x, "1.41421356237310");

        let h = scaled_histogram(3, 1, 10, DEFAULT_BUDGET).unwrap();
        let counts: Vec<Int> = h.rows.iter().map(|r| r.count.clone()).collect();
        assert_eq!(counts, [6, 6, 3, 1].map(Int::from).to_vec());
        assert!(scaled_histogram(1, 1, 10, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn scaled_density_integrates_to_one() {
        let h = scaled_histogram(20, 1, 15, DEFAULT_BUDGET).unwrap();
        let sigma = h.variance.to_f64().sqrt();
        let mass: f64 = h
            .rows
            .iter()
            .map(|r| r.density.parse::<f64>().unwrap() / sigma)
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert_eq!(
            Int::from(Int::sum(h.rows.iter().map(|r| &r.count))),
            jet_at_one(20, 1, 0).unwrap().values[0]
        );
    }
}
