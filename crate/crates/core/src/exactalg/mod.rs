//! Exact arithmetic: big integers and rationals (GMP-backed), binomial
//! coefficients, dense integer polynomials in `x`, sparse rational
//! polynomials in named symbols, an exact linear solver and decimal
//! rendering of exact quantities.

mod decimal;
mod linsys;
mod poly;
mod sympoly;

pub use decimal::{pi_fixed, rat_to_decimal, signed_sqrt_to_decimal, Fixed};
pub use linsys::{solve_exact, LinSys, Solution};
pub use poly::PolyX;
pub use sympoly::{monomials_up_to, point, Point, SymPoly, Symbol};

pub use rug::{Integer as Int, Rational as Rat};

use rug::ops::Pow;
use std::fmt;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::new();
    }
    Int::from(n).binomial(k.min(n - k) as u32)
}

/// Rows `0..=max_n` of Pascal's triangle.
pub fn pascal_rows(max_n: usize) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut row = Vec::with_capacity(n + 1);
        row.push(Int::from(1));
        for k in 1..n {
            let prev = &rows[n - 1];
            row.push(Int::from(&prev[k - 1] + &prev[k]));
        }
        if n > 0 {
            row.push(Int::from(1));
        }
        rows.push(row);
    }
    rows
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Int {
    Int::from(Int::factorial(n))
}

/// A real constant of the form `r * (2*pi)^(h/2)` with `h` in `{0, 1}`.
///
/// Keeps values such as `sqrt(2*pi)/4` exact; only [`SplitConst::to_decimal`]
/// leaves the exact domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitConst {
    pub r: Rat,
    pub h: u8,
}

impl SplitConst {
    pub fn rational(r: Rat) -> Self {
        SplitConst { r, h: 0 }
    }

    pub fn root_two_pi(r: Rat) -> Self {
        SplitConst { r, h: 1 }
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.h == 0 {
            return rat_to_decimal(&self.r, sig);
        }
        // r * sqrt(2 pi) = sign(r) * sqrt(2 pi r^2)
        let guard = sig as u32 + 20;
        let two_pi = Rat::from((pi_fixed(guard).mant * 2u32, Int::from(10u32).pow(guard)));
        let sq = Rat::from(&self.r * &self.r) * two_pi;
        signed_sqrt_to_decimal(self.r.cmp0() == std::cmp::Ordering::Less, &sq, sig)
    }
}

impl fmt::Display for SplitConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.h {
            0 => write!(f, "{}", self.r),
            _ => write!(f, "{}*sqrt(2*pi)", self.r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(5, 9), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn pascal_rule_up_to_64() {
        for n in 1..=64u64 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1));
            }
        }
    }

    #[test]
    fn pascal_rows_agree_with_binomial() {
        let rows = pascal_rows(30);
        for (n, row) in rows.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                assert_eq!(*c, binomial(n as u64, k as u64));
            }
        }
    }

    #[test]
    fn split_const_rendering() {
        let half = SplitConst::rational(Rat::from((1, 2)));
        assert_eq!(half.to_decimal(3), "0.500");
        let c = SplitConst::root_two_pi(Rat::from((1, 4)));
        // sqrt(2 pi)/4 = 0.62665706865775012560...
        assert_eq!(c.to_decimal(20), "0.62665706865775012560");
        assert_eq!(c.to_string(), "1/4*sqrt(2*pi)");
    }

    proptest! {
        #[test]
        fn rational_add_sub_roundtrip(p in -50i64..50, q in 1i64..50, r in -50i64..50, s in 1i64..50) {
            let x = Rat::from((p, q));
            let y = Rat::from((r, s));
            let back = Rat::from(&x + &y) - &y;
            prop_assert_eq!(back, x);
        }
    }
}
