use std::fmt;

use super::Int;

/// Dense univariate polynomial in `x` with big-integer coefficients.
///
/// `coeffs[m]` is the coefficient of `x^m`; trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient vector and no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyX {
    coeffs: Vec<Int>,
}

impl PolyX {
    pub fn zero() -> Self {
        PolyX { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyX::from_coeffs(vec![Int::from(1)])
    }

    pub fn from_coeffs(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyX { coeffs }
    }

    /// `c * x^e`.
    pub fn monomial(c: Int, e: usize) -> Self {
        if c.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![Int::new(); e + 1];
        coeffs[e] = c;
        PolyX { coeffs }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Int> {
        self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Int {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&Int> {
        self.coeffs.last()
    }

    /// `x^e * self`.
    pub fn mul_xshift(&self, e: usize) -> PolyX {
        if self.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + e);
        coeffs.resize(e, Int::new());
        coeffs.extend(self.coeffs.iter().cloned());
        PolyX { coeffs }
    }

    /// `self + c * q`.
    pub fn add_scaled(&self, q: &PolyX, c: &Int) -> PolyX {
        let mut out = self.clone();
        out.add_scaled_shifted_assign(q, c, 0);
        out
    }

    /// `self += c * x^e * q`, in place.
    pub fn add_scaled_shifted_assign(&mut self, q: &PolyX, c: &Int, e: usize) {
        if q.is_zero() || c.is_zero() {
            return;
        }
        let need = q.coeffs.len() + e;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, Int::new());
        }
        for (dst, src) in self.coeffs[e..].iter_mut().zip(&q.coeffs) {
            *dst += c * src;
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn eval_at_one(&self) -> Int {
        Int::sum(self.coeffs.iter()).into()
    }

    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `x^offset * self(1/x)`; requires `deg(self) <= offset`.
    pub fn reversed(&self, offset: usize) -> PolyX {
        if self.is_zero() {
            return PolyX::zero();
        }
        assert!(
            self.coeffs.len() <= offset + 1,
            "reversal offset below degree"
        );
        let mut coeffs = vec![Int::new(); offset + 1];
        for (m, c) in self.coeffs.iter().enumerate() {
            coeffs[offset - m] = c.clone();
        }
        PolyX::from_coeffs(coeffs)
    }

    /// The derivatives `p(1), p'(1), ..., p^(order)(1)`, i.e. the sums
    /// `sum_m c_m * m*(m-1)*...*(m-i+1)`, computed straight from the
    /// coefficients.
    pub fn derivatives_at_one(&self, order: usize) -> Vec<Int> {
        let mut out = vec![Int::new(); order + 1];
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut ff = Int::from(1);
            for (i, slot) in out.iter_mut().enumerate() {
                if i > 0 {
                    if m < i {
                        break;
                    }
                    ff *= (m - i + 1) as u64;
                }
                *slot += &ff * c;
            }
        }
        out
    }
}

impl fmt::Display for PolyX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.cmp0() == std::cmp::Ordering::Less;
            if !first {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            first = false;
            let abs = Int::from(c.abs_ref());
            match m {
                0 => write!(f, "{abs}")?,
                _ => {
                    if abs != 1 {
                        write!(f, "{abs}*")?;
                    }
                    if m == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{m}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> PolyX {
        PolyX::from_coeffs(cs.iter().map(|&c| Int::from(c)).collect())
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p(&[1, 2]).mul_xshift(2), p(&[0, 0, 1, 2]));
        assert_eq!(PolyX::zero().mul_xshift(5), PolyX::zero());
        assert_eq!(p(&[2, 1]).mul_xshift(1), p(&[0, 2, 1]));
        assert_eq!(p(&[1, 2]).mul_xshift(2).degree(), Some(3));
    }

    #[test]
    fn add_scaled_examples() {
        assert_eq!(
            p(&[1, 1]).add_scaled(&p(&[1, 1]), &Int::from(1)),
            p(&[2, 2])
        );
        assert_eq!(
            p(&[0, 0, 1]).add_scaled(&p(&[1]), &Int::from(3)),
            p(&[3, 0, 1])
        );
        let q = p(&[4, 0, -1, 9]);
        assert_eq!(q.add_scaled(&PolyX::zero(), &Int::from(7)), q);
    }

    #[test]
    fn cancellation_trims_degree() {
        let q = p(&[1, 2, 3]);
        let z = q.add_scaled(&q, &Int::from(-1));
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn derivatives_and_reversal() {
        let q = p(&[6, 6, 3, 1]);
        assert_eq!(
            q.derivatives_at_one(2),
            vec![Int::from(16), Int::from(15), Int::from(12)]
        );
        assert_eq!(p(&[2, 1]).reversed(3), p(&[0, 0, 1, 2]));
        assert_eq!(q.eval(&Int::from(2)), 6 + 12 + 12 + 8);
        assert_eq!(q.to_string(), "6 + 6*x + 3*x^2 + x^3");
    }

    fn small_poly() -> impl Strategy<Value = PolyX> {
        prop::collection::vec(-20i64..20, 0..8).prop_map(|v| p(&v))
    }

    proptest! {
        #[test]
        fn shift_is_linear(a in small_poly(), b in small_poly(), c in -9i64..9, e in 0usize..6) {
            let c = Int::from(c);
            let lhs = a.add_scaled(&b, &c).mul_xshift(e);
            let rhs = a.mul_xshift(e).add_scaled(&b.mul_xshift(e), &c);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
