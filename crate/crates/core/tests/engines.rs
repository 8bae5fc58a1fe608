//! The recurrence engines against each other and against enumeration.

use parkstat_core::counting::{closed_form, count, CountMemo};
use parkstat_core::exactalg::{Int, Rat};
use parkstat_core::genfun::{area_genfun, area_genfun_table, jet_at_one};
use parkstat_core::moments::{expectation_area, expectation_sum, factorial_moments};
use parkstat_core::parking::{brute_histogram, DEFAULT_BUDGET};

#[test]
fn generating_function_matches_enumeration() {
    for n in 1..=6u32 {
        for a in 1..=4u32 {
            let brute = brute_histogram(n, a, DEFAULT_BUDGET).unwrap();
            let gf = area_genfun(n, a).unwrap();
            assert_eq!(gf.to_histogram(), brute, "n={n} a={a}");
            assert_eq!(brute.total(), count(n, a));
        }
    }
}

#[test]
fn table_totals_are_counts() {
    let table = area_genfun_table(12, 20, DEFAULT_BUDGET, |_, _| true).unwrap();
    let memo = CountMemo::build(12, 20);
    for ((n, a), p) in &table {
        assert_eq!(p.eval_at_one(), *memo.get(*n, *a).unwrap());
        assert_eq!(p.eval_at_one(), closed_form(*n, *a));
    }
}

#[test]
fn jets_match_differentiated_polynomials() {
    for (n, a) in [(9u32, 1u32), (6, 5), (12, 2)] {
        let p = area_genfun(n, a).unwrap().poly;
        let jet = jet_at_one(n, a, 5).unwrap();
        assert_eq!(jet.values, p.derivatives_at_one(5));
    }
}

#[test]
fn first_moment_closed_forms() {
    for n in 1..=15u32 {
        for a in 1..=5u32 {
            let e = factorial_moments(n, a, 1).unwrap();
            assert_eq!(e[0], expectation_area(n, a));
            let ceiling = Rat::from(n * (2 * a + n - 1)) / 2u32;
            assert_eq!(expectation_sum(n, a), ceiling - &e[0]);
        }
    }
    assert_eq!(count(3, 1), Int::from(16));
}
