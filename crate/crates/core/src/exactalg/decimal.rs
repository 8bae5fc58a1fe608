//! Decimal rendering of exact quantities. Nothing here feeds back into
//! exact computations; it only produces digits for output.

use super::{Int, Rat};
use rug::ops::Pow;

const GUARD: u32 = 6;

/// A truncated fixed-point value `mant / 10^scale`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed {
    pub mant: Int,
    pub scale: u32,
}

fn pow10(e: u32) -> Int {
    Int::from(10u32).pow(e)
}

impl Fixed {
    /// `q` truncated toward zero at `scale` decimals.
    pub fn from_rat(q: &Rat, scale: u32) -> Fixed {
        let num = q.numer() * pow10(scale);
        let mant = num / q.denom();
        Fixed { mant, scale }
    }

    /// `floor(sqrt(q) * 10^scale)` for `q >= 0`.
    pub fn sqrt_rat(q: &Rat, scale: u32) -> Fixed {
        assert!(
            q.cmp0() != std::cmp::Ordering::Less,
            "square root of a negative rational"
        );
        let num = q.numer() * pow10(2 * scale);
        let mant = (num / q.denom()).sqrt();
        Fixed { mant, scale }
    }

    pub fn to_rat(&self) -> Rat {
        Rat::from((self.mant.clone(), pow10(self.scale)))
    }

    /// `|self - 1|`.
    pub fn distance_from_one(&self) -> Fixed {
        let one = pow10(self.scale);
        Fixed {
            mant: Int::from(&self.mant - &one).abs(),
            scale: self.scale,
        }
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        rat_to_decimal(&self.to_rat(), sig)
    }
}

/// `pi` truncated to `digits` decimals, via Machin's formula in fixed point.
pub fn pi_fixed(digits: u32) -> Fixed {
    let work = digits + 10;
    let one = pow10(work);
    // arctan(1/x) * 10^work by the alternating series
    let arctan_inv = |x: u32| -> Int {
        let x2 = Int::from(x) * x;
        let mut term = Int::from(&one / x);
        let mut sum = Int::new();
        let mut k = 0u32;
        while term != 0 {
            let t = Int::from(&term / (2 * k + 1));
            if k.is_multiple_of(2) {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &x2;
            k += 1;
        }
        sum
    };
    let pi = arctan_inv(5) * 16u32 - arctan_inv(239) * 4u32;
    Fixed {
        mant: pi / pow10(10),
        scale: digits,
    }
}

/// Rough decimal exponent of `|q|` (may be off by one either way).
fn log10_estimate(q: &Rat) -> i64 {
    let bits = q.numer().significant_bits() as i64 - q.denom().significant_bits() as i64;
    (bits as f64 * std::f64::consts::LOG10_2).floor() as i64
}

/// Renders a nonnegative value, given a function returning
/// `floor(value * 10^s)`, with `sig` significant digits (round half up).
fn render(at_scale: impl Fn(u32) -> Int, log10_guess: i64, sig: usize) -> String {
    let sig = sig.max(1);
    let want = sig as i64 + GUARD as i64;
    let mut s = (want - log10_guess).max(0) as u32;
    let mut n = at_scale(s);
    if n == 0 && log10_guess < -100_000 {
        return "0".into();
    }
    let mut tries = 0;
    while (n.to_string().len() as i64) < want {
        if n == 0 && tries > 4 {
            return "0".into();
        }
        s += (want - n.to_string().len() as i64).max(1) as u32;
        n = at_scale(s);
        tries += 1;
    }
    let digits = n.to_string();
    let len = digits.len();
    let keep = &digits[..sig];
    let mut r = Int::from_str_radix(keep, 10).expect("decimal digits");
    if digits.as_bytes()[sig] >= b'5' {
        r += 1;
    }
    // value ~= r * 10^(len - sig - s)
    let mut p = len as i64 - sig as i64 - s as i64;
    let mut rs = r.to_string();
    if rs.len() > sig {
        // rounding carried into a new digit
        rs.pop();
        p += 1;
    }
    if p >= 0 {
        rs.push_str(&"0".repeat(p as usize));
        rs
    } else {
        let frac = (-p) as usize;
        if rs.len() > frac {
            let (i, f) = rs.split_at(rs.len() - frac);
            format!("{i}.{f}")
        } else {
            format!("0.{}{}", "0".repeat(frac - rs.len()), rs)
        }
    }
}

/// Plain (non-scientific) decimal rendering of `q` with `sig` significant
/// digits.
pub fn rat_to_decimal(q: &Rat, sig: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.cmp0() == std::cmp::Ordering::Less;
    let abs = Rat::from(q.abs_ref());
    let body = render(|s| Fixed::from_rat(&abs, s).mant, log10_estimate(&abs), sig);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Renders `(-1)^negative * sqrt(q)` for `q >= 0`.
pub fn signed_sqrt_to_decimal(negative: bool, q: &Rat, sig: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let body = render(
        |s| Fixed::sqrt_rat(q, s).mant,
        log10_estimate(q).div_euclid(2),
        sig,
    );
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
