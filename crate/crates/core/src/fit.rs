//! Undetermined-coefficient fits `E_k = A_k + B_k E_1` with polynomial
//! `A_k`, `B_k` in `n` (fixed `a`) or in `n` and `a`.
//!
//! The fit is exact: factorial moments come from the jet engine, `E_1`
//! from its closed form, and the linear system is solved over the
//! rationals. A fit is accepted only if it also reproduces held-out points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::{
    monomials_up_to, solve_exact, LinSys, Rat, Solution, SplitConst, SymPoly, Symbol,
};
use crate::genfun::jet_table;
use crate::moments::{expectation_area, factorial_moments_from_jet};

/// Held-out points per fit.
pub const DEFAULT_MARGIN: usize = 5;

/// Degree box for `A_k` and `B_k`.
///
/// Bounds are on the weighted degree `2i + j` of `n^i a^j`, so `a` counts
/// as `sqrt(n)`: `3k` for `A_k` and `3(k-1)` for `B_k`. With `a` fixed
/// this is `deg A = floor(3k/2)`, `deg B = floor(3(k-1)/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentAnsatz {
    pub k: u32,
    pub symbols: Vec<Symbol>,
    pub weight_a: u32,
    pub weight_b: u32,
}

impl MomentAnsatz {
    pub fn initial(k: u32, symbols: &[Symbol]) -> Self {
        MomentAnsatz {
            k,
            symbols: symbols.to_vec(),
            weight_a: 3 * k,
            weight_b: 3 * k.saturating_sub(1),
        }
    }

    /// Box with both degrees in `n` raised by one.
    pub fn escalated(&self) -> Self {
        MomentAnsatz {
            weight_a: self.weight_a + 2,
            weight_b: self.weight_b + 2,
            ..self.clone()
        }
    }

    /// Degree of `A` in `n`.
    pub fn deg_a(&self) -> u32 {
        self.weight_a / 2
    }

    pub fn deg_b(&self) -> u32 {
        self.weight_b / 2
    }

    fn basis(&self, weight: u32) -> Vec<Vec<u32>> {
        monomials_up_to(self.symbols.len(), weight)
            .into_iter()
            .filter(|e| {
                self.symbols
                    .iter()
                    .zip(e)
                    .map(|(s, d)| if *s == Symbol::N { 2 * d } else { *d })
                    .sum::<u32>()
                    <= weight
            })
            .collect()
    }

    pub fn basis_a(&self) -> Vec<Vec<u32>> {
        self.basis(self.weight_a)
    }

    pub fn basis_b(&self) -> Vec<Vec<u32>> {
        self.basis(self.weight_b)
    }

    pub fn unknowns(&self) -> usize {
        self.basis_a().len() + self.basis_b().len()
    }

    fn monomial_value(&self, exps: &[u32], n: u32, a: u32) -> Rat {
        let mut v = Rat::from(1);
        for (s, &d) in self.symbols.iter().zip(exps) {
            let base = match s {
                Symbol::N => n,
                Symbol::A => a,
            };
            for _ in 0..d {
                v *= base;
            }
        }
        v
    }
}

/// Sample layout for a fit: points that enter the linear system, and
/// points that only check the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleGrid {
    pub fit: Vec<(u32, u32)>,
    pub holdout: Vec<(u32, u32)>,
}

impl SampleGrid {
    /// `n = 1..=u` at fixed `a`, where `u` is the unknown count of the
    /// escalated ansatz, then `margin` further values of `n` held out.
    pub fn fixed_a(ansatz: &MomentAnsatz, a: u32, margin: usize) -> Self {
        let u = ansatz.escalated().unknowns() as u32;
        SampleGrid {
            fit: (1..=u).map(|n| (n, a)).collect(),
            holdout: (u + 1..=u + margin as u32).map(|n| (n, a)).collect(),
        }
    }

    /// Rectangle `n in 1..=N`, `a in 1..=M`. `M` exceeds the largest power
    /// of `a` in the escalated box. For small `n`, `E_1(n, a)` is a rational
    /// function of `a` of low degree, so a row `n` separates few columns;
    /// `N = deg A + deg B + 2` (escalated) leaves enough rows with large `n`. The holdout is
    /// the next row `n = N + 1`, `a = 1..=margin`.
    pub fn general_a(ansatz: &MomentAnsatz, margin: usize) -> Self {
        let esc = ansatz.escalated();
        let m = (esc.weight_a + 1).max(4);
        let needed = esc.unknowns() as u32;
        let n_max = (esc.deg_a() + esc.deg_b() + 2).max(needed.div_ceil(m));
        let fit = (1..=n_max)
            .flat_map(|n| (1..=m).map(move |a| (n, a)))
            .collect();
        let holdout = (1..=margin as u32).map(|a| (n_max + 1, a)).collect();
        SampleGrid { fit, holdout }
    }

    fn all(&self) -> impl Iterator<Item = &(u32, u32)> {
        self.fit.iter().chain(&self.holdout)
    }
}

/// Exact `(E_1, E_k)` at a set of points. `E_1` is the closed form.
#[derive(Clone, Debug, Default)]
pub struct MomentSamples {
    values: BTreeMap<(u32, u32), (Rat, Rat)>,
}

impl MomentSamples {
    pub fn compute<'a>(
        k: u32,
        points: impl IntoIterator<Item = &'a (u32, u32)>,
        budget: u64,
    ) -> Result<Self> {
        let set: BTreeSet<(u32, u32)> = points.into_iter().copied().collect();
        if set.iter().any(|&(n, a)| n == 0 || a == 0) {
            return Err(Error::InvalidArgument(
                "sample points need n, a >= 1".into(),
            ));
        }
        let max_n = set.iter().map(|p| p.0).max().unwrap_or(0);
        let max_sum = set.iter().map(|p| p.0 + p.1).max().unwrap_or(0);
        let jets = jet_table(max_n, max_sum, k, budget, |n, a| set.contains(&(n, a)))?;
        let values = jets
            .iter()
            .map(|(&(n, a), jet)| {
                let ek = factorial_moments_from_jet(jet).pop().expect("order >= 1");
                ((n, a), (expectation_area(n, a), ek))
            })
            .collect();
        Ok(MomentSamples { values })
    }

    pub fn get(&self, n: u32, a: u32) -> Option<&(Rat, Rat)> {
        self.values.get(&(n, a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitStatus {
    Verified,
    /// No polynomial pair in the (escalated) degree box fits; `witness` is
    /// the sample or holdout point that breaks it.
    Inconsistent {
        witness: (u32, u32),
    },
    /// More samples are needed; `free_column` names the undetermined
    /// coefficient.
    Underdetermined {
        free_column: String,
    },
}

impl FitStatus {
    pub fn label(&self) -> &'static str {
        match self {
            FitStatus::Verified => "verified",
            FitStatus::Inconsistent { .. } => "inconsistent",
            FitStatus::Underdetermined { .. } => "underdetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitResult {
    pub k: u32,
    pub ansatz: MomentAnsatz,
    pub escalated: bool,
    /// `a` held fixed when fitting in `n` only.
    pub fixed_a: Option<u32>,
    pub a_poly: SymPoly,
    pub b_poly: SymPoly,
    pub samples_used: Vec<(u32, u32)>,
    pub holdout_verified: Vec<(u32, u32)>,
    pub status: FitStatus,
}

/// `A(n, a) + B(n, a) E_1` at one point.
fn model_value(fit: &FitResult, n: u32, a: u32, e1: &Rat) -> Result<Rat> {
    let mut at = BTreeMap::new();
    for s in fit.a_poly.symbols() {
        at.insert(*s, Rat::from(if *s == Symbol::N { n } else { a }));
    }
    Ok(fit.a_poly.eval(&at)? + fit.b_poly.eval(&at)? * e1)
}

fn column_name(ansatz: &MomentAnsatz, col: usize) -> String {
    let ba = ansatz.basis_a();
    let (which, exps) = if col < ba.len() {
        ("A", &ba[col])
    } else {
        ("B", &ansatz.basis_b()[col - ba.len()])
    };
    let mono: Vec<String> = ansatz
        .symbols
        .iter()
        .zip(exps.iter())
        .filter(|(_, &d)| d > 0)
        .map(|(s, d)| format!("{s}^{d}"))
        .collect();
    format!(
        "{which}[{}]",
        if mono.is_empty() {
            "1".into()
        } else {
            mono.join("*")
        }
    )
}

fn fit_once(
    ansatz: &MomentAnsatz,
    grid: &SampleGrid,
    data: &MomentSamples,
    fixed_a: Option<u32>,
) -> Result<FitResult> {
    let ba = ansatz.basis_a();
    let bb = ansatz.basis_b();
    let mut sys = LinSys::new(ba.len() + bb.len());
    for &(n, a) in &grid.fit {
        let (e1, ek) = data.get(n, a).expect("sample computed");
        let mut row: Vec<Rat> = ba.iter().map(|m| ansatz.monomial_value(m, n, a)).collect();
        row.extend(bb.iter().map(|m| ansatz.monomial_value(m, n, a) * e1));
        sys.push_row(row, ek.clone())?;
    }
    let mut result = FitResult {
        k: ansatz.k,
        ansatz: ansatz.clone(),
        escalated: false,
        fixed_a,
        a_poly: SymPoly::zero(&ansatz.symbols),
        b_poly: SymPoly::zero(&ansatz.symbols),
        samples_used: grid.fit.clone(),
        holdout_verified: Vec::new(),
        status: FitStatus::Verified,
    };
    match solve_exact(&sys)? {
        Solution::Unique(x) => {
            let (xa, xb) = x.split_at(ba.len());
            result.a_poly =
                SymPoly::from_terms(&ansatz.symbols, ba.into_iter().zip(xa.iter().cloned()));
            result.b_poly =
                SymPoly::from_terms(&ansatz.symbols, bb.into_iter().zip(xb.iter().cloned()));
            for &(n, a) in &grid.holdout {
                let (e1, ek) = data.get(n, a).expect("holdout computed");
                if model_value(&result, n, a, e1)? != *ek {
                    result.status = FitStatus::Inconsistent { witness: (n, a) };
                    return Ok(result);
                }
                result.holdout_verified.push((n, a));
            }
        }
        Solution::Underdetermined { free_column } => {
            result.status = FitStatus::Underdetermined {
                free_column: column_name(ansatz, free_column),
            };
        }
        Solution::Inconsistent { row } => {
            result.status = FitStatus::Inconsistent {
                witness: grid.fit[row],
            };
        }
    }
    Ok(result)
}

/// Fits `E_k = A + B E_1` on `grid.fit`, checks `grid.holdout`, and retries
/// once with both degrees raised by one if the first box is inconsistent.
pub fn fit_moment(
    ansatz: &MomentAnsatz,
    grid: &SampleGrid,
    fixed_a: Option<u32>,
    budget: u64,
) -> Result<FitResult> {
    if ansatz.k == 0 {
        return Err(Error::InvalidArgument(
            "moment order must be at least 1".into(),
        ));
    }
    if grid.fit.len() < ansatz.unknowns() {
        return Err(Error::InvalidArgument(format!(
            "{} fit samples for {} unknowns",
            grid.fit.len(),
            ansatz.unknowns()
        )));
    }
    let data = MomentSamples::compute(ansatz.k, grid.all(), budget)?;
    let first = fit_once(ansatz, grid, &data, fixed_a)?;
    if !matches!(first.status, FitStatus::Inconsistent { .. }) {
        return Ok(first);
    }
    let wider = ansatz.escalated();
    if grid.fit.len() < wider.unknowns() {
        return Ok(first);
    }
    let mut second = fit_once(&wider, grid, &data, fixed_a)?;
    second.escalated = true;
    Ok(second)
}

/// Fit at fixed `a` over the default grid.
pub fn fit_fixed_a(k: u32, a: u32, budget: u64) -> Result<FitResult> {
    let ansatz = MomentAnsatz::initial(k, &[Symbol::N]);
    let grid = SampleGrid::fixed_a(&ansatz, a, DEFAULT_MARGIN);
    fit_moment(&ansatz, &grid, Some(a), budget)
}

/// Fit in both `n` and `a` over the default rectangle.
pub fn fit_general_a(k: u32, budget: u64) -> Result<FitResult> {
    let ansatz = MomentAnsatz::initial(k, &[Symbol::N, Symbol::A]);
    let grid = SampleGrid::general_a(&ansatz, DEFAULT_MARGIN);
    fit_moment(&ansatz, &grid, None, budget)
}

/// Checks the fitted identity exactly at `points`, appending every point
/// that holds to `holdout_verified`. Returns false at the first failure.
pub fn verify_fit(fit: &mut FitResult, points: &[(u32, u32)], budget: u64) -> Result<bool> {
    if fit.status != FitStatus::Verified {
        return Err(Error::InvalidArgument(
            "only verified fits can be checked further".into(),
        ));
    }
    let points: Vec<(u32, u32)> = match fit.fixed_a {
        Some(a) => points.iter().map(|&(n, _)| (n, a)).collect(),
        None => points.to_vec(),
    };
    let data = MomentSamples::compute(fit.k, &points, budget)?;
    for &(n, a) in &points {
        let (e1, ek) = data.get(n, a).expect("point computed");
        if model_value(fit, n, a, e1)? != *ek {
            return Ok(false);
        }
        fit.holdout_verified.push((n, a));
    }
    Ok(true)
}

/// Leading term `c n^(e/2)` of `A + B E_1` as `n -> oo`, using
/// `E_1 ~ sqrt(2 pi)/4 n^(3/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerm {
    pub coeff: SplitConst,
    pub exponent_twice: u32,
}

impl std::fmt::Display for LeadingTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponent_twice.is_multiple_of(2) {
            write!(f, "{} n^{}", self.coeff, self.exponent_twice / 2)
        } else {
            write!(f, "{} n^({}/2)", self.coeff, self.exponent_twice)
        }
    }
}

pub fn leading_asymptotics(fit: &FitResult) -> Result<LeadingTerm> {
    if fit.status != FitStatus::Verified {
        return Err(Error::InvalidArgument(
            "leading term needs a verified fit".into(),
        ));
    }
    if fit.ansatz.symbols != [Symbol::N] {
        return Err(Error::InvalidArgument(
            "leading term needs a fit in n alone".into(),
        ));
    }
    // exponent_twice -> (coefficient, half power of 2 pi)
    let mut terms: BTreeMap<u32, (Rat, u8)> = BTreeMap::new();
    for (e, c) in fit.a_poly.terms() {
        let slot = terms.entry(2 * e[0]).or_insert((Rat::new(), 0));
        slot.0 += c;
    }
    for (e, c) in fit.b_poly.terms() {
        let slot = terms.entry(2 * e[0] + 3).or_insert((Rat::new(), 1));
        slot.0 += Rat::from(c / 4u32);
    }
    // equal exponents share parity, hence the same power of 2 pi
    let (&exponent_twice, (r, h)) = terms
        .iter()
        .rev()
        .find(|(_, (r, _))| !r.is_zero())
        .ok_or_else(|| Error::InvalidArgument("fit is identically zero".into()))?;
    Ok(LeadingTerm {
        coeff: SplitConst {
            r: r.clone(),
            h: *h,
        },
        exponent_twice,
    })
}

fn ordinal(k: u32) -> String {
    let suffix = match (k % 10, k % 100) {
        (1, p) if p != 11 => "st",
        (2, p) if p != 12 => "nd",
        (3, p) if p != 13 => "rd",
        _ => "th",
    };
    format!("{k}{suffix}")
}

impl FitResult {
    pub fn to_json(&self) -> serde_json::Value {
        let leading = leading_asymptotics(self).ok().map(|t| {
            json!({
                "r": t.coeff.r.to_string(),
                "h": t.coeff.h,
                "exponent": format!("{}/2", t.exponent_twice),
            })
        });
        let status = match &self.status {
            FitStatus::Verified => json!({"status": "verified"}),
            FitStatus::Inconsistent { witness } => {
                json!({"status": "inconsistent", "witness": [witness.0, witness.1]})
            }
            FitStatus::Underdetermined { free_column } => {
                json!({"status": "underdetermined", "free_column": free_column})
            }
        };
        json!({
            "k": self.k,
            "symbols": self.ansatz.symbols,
            "fixed_a": self.fixed_a,
            "deg_A": self.ansatz.deg_a(),
            "deg_B": self.ansatz.deg_b(),
            "escalated": self.escalated,
            "A": self.a_poly,
            "B": self.b_poly,
            "status": status["status"],
            "witness": status.get("witness").cloned().unwrap_or(serde_json::Value::Null),
            "free_column": status.get("free_column").cloned().unwrap_or(serde_json::Value::Null),
            "samples": self.samples_used,
            "holdout": self.holdout_verified,
            "leading": leading,
        })
    }

    /// Statement of the fitted identity in words and formulas.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let args = if self.ansatz.symbols.len() == 1 {
            "n"
        } else {
            "n,a"
        };
        let family = match self.fixed_a {
            Some(1) => "parking functions".to_string(),
            Some(a) => format!("{a}-parking functions"),
            None => "a-parking functions".to_string(),
        };
        match &self.status {
            FitStatus::Verified => {
                writeln!(
                    out,
                    "The {} factorial moment of the area statistic on {family} of length n is",
                    ordinal(self.k)
                )
                .unwrap();
                writeln!(
                    out,
                    "  E_{}({args}) = {} + ({}) * E_1({args})",
                    self.k, self.a_poly, self.b_poly
                )
                .unwrap();
                if let Ok(t) = leading_asymptotics(self) {
                    writeln!(out, "and asymptotically it equals {t}.").unwrap();
                }
                writeln!(
                    out,
                    "Fitted on {} points, confirmed at {} further points.",
                    self.samples_used.len(),
                    self.holdout_verified.len()
                )
                .unwrap();
            }
            FitStatus::Inconsistent { witness } => {
                writeln!(
                    out,
                    "No fit for E_{} with deg A <= {}, deg B <= {} in n: fails at (n, a) = ({}, {}).",
                    self.k,
                    self.ansatz.deg_a(),
                    self.ansatz.deg_b(),
                    witness.0,
                    witness.1
                )
                .unwrap();
            }
            FitStatus::Underdetermined { free_column } => {
                writeln!(
                    out,
                    "Fit for E_{} is underdetermined: coefficient {free_column} is free.",
                    self.k
                )
                .unwrap();
            }
        }
        out
    }
}
