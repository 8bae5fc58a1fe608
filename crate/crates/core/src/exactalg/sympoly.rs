use rug::ops::Pow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::{binomial, Rat};
use crate::error::{Error, Result};

/// A named indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    N,
    A,
}

impl Symbol {
    pub fn name(self) -> &'static str {
        match self {
            Symbol::N => "n",
            Symbol::A => "a",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// An assignment of rational values to symbols.
pub type Point = BTreeMap<Symbol, Rat>;

/// Builds a [`Point`] from integer values.
pub fn point(values: &[(Symbol, i64)]) -> Point {
    values.iter().map(|&(s, v)| (s, Rat::from(v))).collect()
}

/// All exponent vectors over `nvars` symbols with total degree `<= deg`,
/// ordered by total degree and then lexicographically.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in 0..=deg {
        fill(&mut Vec::new(), nvars, total, &mut out);
    }
    out
}

/// Sparse polynomial with rational coefficients in a fixed list of symbols.
///
/// Keys are exponent vectors aligned with `symbols`; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    symbols: Vec<Symbol>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl SymPoly {
    pub fn zero(symbols: &[Symbol]) -> Self {
        SymPoly {
            symbols: symbols.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(symbols: &[Symbol], c: Rat) -> Self {
        let mut p = SymPoly::zero(symbols);
        p.add_term(vec![0; symbols.len()], c);
        p
    }

    /// The polynomial consisting of the single symbol `s`.
    pub fn var(symbols: &[Symbol], s: Symbol) -> Self {
        let idx = symbols
            .iter()
            .position(|&t| t == s)
            .expect("symbol not declared");
        let mut exps = vec![0; symbols.len()];
        exps[idx] = 1;
        let mut p = SymPoly::zero(symbols);
        p.add_term(exps, Rat::from(1));
        p
    }

    pub fn from_terms(
        symbols: &[Symbol],
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Self {
        let mut p = SymPoly::zero(symbols);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.symbols.len(), "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, s: Symbol) -> Option<u32> {
        let idx = self.symbols.iter().position(|&t| t == s)?;
        self.terms.keys().map(|e| e[idx]).max()
    }

    fn check_compatible(&self, other: &SymPoly) {
        assert_eq!(self.symbols, other.symbols, "symbol sets differ");
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SymPoly) -> SymPoly {
        self.add(&other.scale(&Rat::from(-1)))
    }

    pub fn scale(&self, c: &Rat) -> SymPoly {
        let mut out = SymPoly::zero(&self.symbols);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), Rat::from(v * c));
        }
        out
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        self.check_compatible(other);
        let mut out = SymPoly::zero(&self.symbols);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, Rat::from(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> SymPoly {
        let mut out = SymPoly::constant(&self.symbols, Rat::from(1));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes `s -> s + c`.
    pub fn shift(&self, s: Symbol, c: &Rat) -> SymPoly {
        let idx = self
            .symbols
            .iter()
            .position(|&t| t == s)
            .expect("symbol not declared");
        let mut out = SymPoly::zero(&self.symbols);
        for (e, v) in &self.terms {
            let d = e[idx];
            // (s + c)^d = sum_j C(d, j) s^j c^(d - j)
            let mut cpow = Rat::from(1);
            for j in (0..=d).rev() {
                let mut exps = e.clone();
                exps[idx] = j;
                let coef = Rat::from(binomial(d as u64, j as u64)) * &cpow * v;
                out.add_term(exps, coef);
                cpow *= c;
            }
        }
        out
    }

    /// Exact evaluation; every declared symbol must be assigned.
    pub fn eval(&self, at: &Point) -> Result<Rat> {
        let values = self
            .symbols
            .iter()
            .map(|s| at.get(s).ok_or(Error::MissingSymbol(*s)))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = Rat::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &d) in values.iter().zip(e) {
                if d > 0 {
                    t *= Rat::from((*v).pow(d as i32));
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Univariate interpolation through `(x_i, y_i)` with distinct `x_i`
    /// (Newton divided differences).
    pub fn interpolate(s: Symbol, pts: &[(Rat, Rat)]) -> SymPoly {
        let syms = [s];
        let n = pts.len();
        let mut dd: Vec<Rat> = pts.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = Rat::from(&dd[i] - &dd[i - 1]);
                let den = Rat::from(&pts[i].0 - &pts[i - level].0);
                dd[i] = num / den;
            }
        }
        let x = SymPoly::var(&syms, s);
        let mut out = SymPoly::zero(&syms);
        for i in (0..n).rev() {
            // Horner on the Newton form
            let shifted = x.sub(&SymPoly::constant(&syms, pts[i].0.clone()));
            out = out
                .mul(&shifted)
                .add(&SymPoly::constant(&syms, dd[i].clone()));
        }
        out
    }

    /// For a univariate `f(s)`, returns `F(s) = f(1) + f(2) + ... + f(s)`,
    /// found by interpolating `F` at `deg(f) + 2` points.
    pub fn indefinite_sum(&self) -> SymPoly {
        assert_eq!(
            self.symbols.len(),
            1,
            "indefinite_sum needs a univariate polynomial"
        );
        let s = self.symbols[0];
        let deg = self.total_degree().unwrap_or(0);
        let mut pts = Vec::with_capacity(deg as usize + 2);
        let mut running = Rat::new();
        for b in 0..=(deg as i64 + 1) {
            if b > 0 {
                running += self.eval(&point(&[(s, b)])).expect("univariate");
            }
            pts.push((Rat::from(b), running.clone()));
        }
        SymPoly::interpolate(s, &pts)
    }

    /// Terms in display order: descending total degree, then descending
    /// exponents lexicographically.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let ta: u32 = a.iter().sum();
            let tb: u32 = b.iter().sum();
            tb.cmp(&ta).then_with(|| b.cmp(a))
        });
        v
    }

    fn monomial_string(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .zip(exps)
            .filter(|(_, &d)| d > 0)
            .map(|(s, &d)| {
                if d == 1 {
                    s.name().to_string()
                } else {
                    format!("{}^{}", s.name(), d)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for SymPoly {
    /// Expanded form, e.g. `a^3+6a^2+9a` or `5/12n^3-1/12n^2-1/3n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.cmp0() == Ordering::Less;
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let abs = Rat::from(c.abs_ref());
            let mono = self.monomial_string(exps);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}

/// Serializes as `{"symbols": [...], "terms": [{"coeff": "p/q", "exps": [...]}, ...]}`
/// with terms in display order.
impl Serialize for SymPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a SymPoly);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let sorted = self.0.sorted_terms();
                let mut seq = s.serialize_seq(Some(sorted.len()))?;
                for (e, c) in sorted {
                    seq.serialize_element(
                        &serde_json::json!({ "coeff": c.to_string(), "exps": e }),
                    )?;
                }
                seq.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("symbols", &self.symbols)?;
        m.serialize_entry("terms", &Terms(self))?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_poly(coeffs: &[i64]) -> SymPoly {
        SymPoly::from_terms(
            &[Symbol::A],
            coeffs
                .iter()
                .enumerate()
                .map(|(d, &c)| (vec![d as u32], Rat::from(c))),
        )
    }

    #[test]
    fn eval_examples() {
        let a = SymPoly::var(&[Symbol::A], Symbol::A);
        let a_plus_3 = a.add(&SymPoly::constant(&[Symbol::A], Rat::from(3)));
        let p = a.mul(&a_plus_3.pow(2));
        assert_eq!(p.eval(&point(&[(Symbol::A, 1)])).unwrap(), 16);
        let q = a.mul(&a.add(&SymPoly::constant(&[Symbol::A], Rat::from(2))));
        assert_eq!(q.eval(&point(&[(Symbol::A, 2)])).unwrap(), 8);
        assert_eq!(p.eval(&point(&[(Symbol::A, 0)])).unwrap(), p.coeff(&[0]));
    }

    #[test]
    fn missing_symbol_is_an_error() {
        let p = SymPoly::var(&[Symbol::N, Symbol::A], Symbol::A);
        assert_eq!(
            p.eval(&point(&[(Symbol::A, 1)])),
            Err(Error::MissingSymbol(Symbol::N))
        );
    }

    #[test]
    fn display_descending() {
        assert_eq!(a_poly(&[0, 9, 6, 1]).to_string(), "a^3+6a^2+9a");
        let p = SymPoly::from_terms(
            &[Symbol::N],
            [
                (vec![3], Rat::from((5, 12))),
                (vec![2], Rat::from((-1, 12))),
                (vec![0], Rat::from(-7)),
            ],
        );
        assert_eq!(p.to_string(), "5/12n^3-1/12n^2-7");
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = a_poly(&[3, -1, 0, 2]);
        let q = p.shift(Symbol::A, &Rat::from(5));
        for t in -3..6 {
            assert_eq!(
                q.eval(&point(&[(Symbol::A, t)])).unwrap(),
                p.eval(&point(&[(Symbol::A, t + 5)])).unwrap()
            );
        }
    }

    #[test]
    fn indefinite_sum_of_squares() {
        // 1^2 + ... + s^2 = s(s+1)(2s+1)/6
        let sq = a_poly(&[0, 0, 1]);
        let f = sq.indefinite_sum();
        let expect = SymPoly::from_terms(
            &[Symbol::A],
            [
                (vec![3], Rat::from((1, 3))),
                (vec![2], Rat::from((1, 2))),
                (vec![1], Rat::from((1, 6))),
            ],
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn monomial_order() {
        let m = monomials_up_to(2, 2);
        assert_eq!(
            m,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(monomials_up_to(1, 3).len(), 4);
    }

    #[test]
    fn json_terms() {
        let v = serde_json::to_value(a_poly(&[0, 2, 1])).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"symbols": ["a"], "terms": [
                {"coeff": "1", "exps": [2]}, {"coeff": "2", "exps": [1]}
            ]})
        );
    }
}
