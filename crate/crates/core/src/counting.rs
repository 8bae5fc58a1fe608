//! Counting a-parking functions through the rearranged recurrence
//!
//! `p(n, a) = p(n, a - 1) + sum_{k=1..n} C(n, k) p(n - k, a + k - 1)`,
//! `p(0, a) = 1`, `p(n, 0) = 0` for `n >= 1`,
//!
//! both numerically and symbolically in `a`, plus a proof-by-evaluation
//! check of the closed form `a (a + n)^(n - 1)`.

use crate::exactalg::{pascal_rows, Int, Rat, SymPoly, Symbol};
use crate::sweep::sweep;
use rug::ops::Pow;

/// All counts `p(n', a')` with `n' <= max_n` and `n' + a' <= max_sum`.
#[derive(Clone, Debug)]
pub struct CountMemo {
    max_n: u32,
    max_sum: u32,
    /// `table[n][a]`
    table: Vec<Vec<Int>>,
}

impl CountMemo {
    pub fn build(max_n: u32, max_sum: u32) -> Self {
        let binom = pascal_rows(max_n as usize);
        let mut table: Vec<Vec<Int>> = vec![Vec::new(); max_n as usize + 1];
        sweep(
            max_n,
            max_sum,
            |n, a, prev| {
                if n == 0 {
                    return Int::from(1);
                }
                if a == 0 {
                    return Int::new();
                }
                let prev = prev.expect("diagonal 0 holds only (0, 0)");
                let mut acc = prev.at(n).clone();
                for k in 1..=n {
                    acc += &binom[n as usize][k as usize] * prev.at(n - k);
                }
                acc
            },
            |diag| {
                for (n, v) in diag.cells.iter().enumerate() {
                    table[n].push(v.clone());
                }
            },
        );
        CountMemo {
            max_n,
            max_sum,
            table,
        }
    }

    pub fn get(&self, n: u32, a: u32) -> Option<&Int> {
        if n > self.max_n || n + a > self.max_sum {
            return None;
        }
        self.table[n as usize].get(a as usize)
    }

    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    pub fn max_sum(&self) -> u32 {
        self.max_sum
    }
}

/// `p(n, a)`, the number of a-parking functions of length `n`.
pub fn count(n: u32, a: u32) -> Int {
    CountMemo::build(n, n + a)
        .get(n, a)
        .cloned()
        .expect("state inside memo")
}

/// `a (a + n)^(n - 1)` (and `1` at `n = 0`).
pub fn closed_form(n: u32, a: u32) -> Int {
    if n == 0 {
        return Int::from(1);
    }
    Int::from(a) * Int::from(a + n).pow(n - 1)
}

/// `p_0(a), ..., p_n(a)` as polynomials in `a`.
///
/// Telescoping the recurrence from `p_m(0) = 0` gives
/// `p_m(a) = sum_{b=1..a} sum_{k=1..m} C(m, k) p_{m-k}(b + k - 1)`;
/// the inner sum is a polynomial in `b` and the outer one is summed exactly.
pub fn count_symbolic_all(n: u32) -> Vec<SymPoly> {
    let syms = [Symbol::A];
    let binom = pascal_rows(n as usize);
    let mut out: Vec<SymPoly> = vec![SymPoly::constant(&syms, Rat::from(1))];
    for m in 1..=n {
        let mut inner = SymPoly::zero(&syms);
        for k in 1..=m {
            let shifted = out[(m - k) as usize].shift(Symbol::A, &Rat::from(k as i64 - 1));
            inner = inner.add(&shifted.scale(&Rat::from(binom[m as usize][k as usize].clone())));
        }
        out.push(inner.indefinite_sum());
    }
    out
}

/// `p_n(a)` as an expanded polynomial in `a`.
pub fn count_symbolic(n: u32) -> SymPoly {
    count_symbolic_all(n).pop().expect("at least p_0")
}

/// `a (a + n)^(n - 1)` expanded, as a polynomial in `a`.
pub fn closed_form_symbolic(n: u32) -> SymPoly {
    let syms = [Symbol::A];
    if n == 0 {
        return SymPoly::constant(&syms, Rat::from(1));
    }
    let a = SymPoly::var(&syms, Symbol::A);
    let a_plus_n = a.add(&SymPoly::constant(&syms, Rat::from(n)));
    a.mul(&a_plus_n.pow(n - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormCheck {
    /// recurrence value differs from `a (a + n)^(n - 1)`
    Count,
    /// the binomial identity fails
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub n_max: u32,
    pub a_max: u32,
    pub points_checked: u64,
    pub failure: Option<(u32, u32, ClosedFormCheck)>,
    /// Both sides are polynomials of degree `<= n` in `a`, so agreement at
    /// `n + 1` values of `a` settles each `n`. True only if every checked
    /// `n` had enough points.
    pub proved: bool,
}

impl ClosedFormReport {
    pub fn success(&self) -> bool {
        self.failure.is_none()
    }
}

/// Right-hand side of the binomial identity
/// `a (a+n)^(n-1) = sum_{k=0..n} C(n,k) (a+k-1) (a+n-1)^(n-k-1)`.
fn identity_rhs(n: u32, a: u32) -> Rat {
    let base = Rat::from(a + n - 1);
    let mut acc = Rat::new();
    for k in 0..=n {
        let pow = base.clone().pow(n as i32 - k as i32 - 1);
        acc +=
            Rat::from(crate::exactalg::binomial(n as u64, k as u64)) * Rat::from(a + k - 1) * pow;
    }
    acc
}

/// Checks the count recurrence against the closed form, and the binomial
/// identity, at every `1 <= n <= n_max`, `1 <= a <= a_max`.
pub fn verify_closed_form(n_max: u32, a_max: u32) -> ClosedFormReport {
    let memo = CountMemo::build(n_max, n_max + a_max);
    let mut points = 0u64;
    let mut failure = None;
    'outer: for n in 1..=n_max {
        for a in 1..=a_max {
            points += 1;
            let expect = closed_form(n, a);
            if memo.get(n, a) != Some(&expect) {
                failure = Some((n, a, ClosedFormCheck::Count));
                break 'outer;
            }
            if identity_rhs(n, a) != expect {
                failure = Some((n, a, ClosedFormCheck::Identity));
                break 'outer;
            }
        }
    }
    ClosedFormReport {
        n_max,
        a_max,
        points_checked: points,
        proved: failure.is_none() && a_max > n_max,
        failure,
    }
}
