//! Fitted factorial-moment identities for ordinary parking functions
//! against the published coefficient tables.

use parkstat_core::exactalg::{Rat, SplitConst, SymPoly, Symbol};
use parkstat_core::fit::{fit_fixed_a, fit_general_a, leading_asymptotics, verify_fit, FitStatus};
use parkstat_core::moments::expectation_area;
use parkstat_core::parking::DEFAULT_BUDGET;

/// Coefficients listed from the top degree down to `n^1` or `n^0`.
fn poly(top: u32, coeffs: &[&str]) -> SymPoly {
    SymPoly::from_terms(
        &[Symbol::N],
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (vec![top - i as u32], c.parse::<Rat>().unwrap())),
    )
}

fn check(k: u32, a: SymPoly, b: SymPoly, lead: SplitConst) {
    let mut fit = fit_fixed_a(k, 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(fit.status, FitStatus::Verified);
    assert!(!fit.escalated);
    assert_eq!(fit.a_poly, a, "A_{k}");
    assert_eq!(fit.b_poly, b, "B_{k}");
    assert!(fit.holdout_verified.len() >= 5);
    let extra: Vec<(u32, u32)> = (1..=5)
        .map(|i| (fit.samples_used.len() as u32 + 10 * i, 1))
        .collect();
    assert!(verify_fit(&mut fit, &extra, DEFAULT_BUDGET).unwrap());
    let t = leading_asymptotics(&fit).unwrap();
    assert_eq!(t.exponent_twice, 3 * k);
    assert_eq!(t.coeff, lead);
}

#[test]
fn second_moment() {
    check(
        2,
        poly(3, &["5/12", "-1/12", "-1/3"]),
        poly(1, &["-7/3", "-7/3"]),
        SplitConst::rational(Rat::from((5, 12))),
    );
}

#[test]
fn third_moment() {
    check(
        3,
        poly(4, &["-175/192", "-283/192", "199/192", "259/192"]),
        poly(3, &["15/32", "521/96", "1219/96", "743/96"]),
        SplitConst::root_two_pi(Rat::from((15, 128))),
    );
}

#[test]
fn fourth_moment() {
    check(
        4,
        poly(
            6,
            &[
                "221/1008",
                "63737/30240",
                "101897/15120",
                "22217/5040",
                "-1375/189",
                "-187463/30240",
            ],
        ),
        poly(
            4,
            &[
                "-35/16",
                "-449/27",
                "-130243/2520",
                "-7409/105",
                "-503803/15120",
            ],
        ),
        SplitConst::rational(Rat::from((221, 1008))),
    );
}

#[test]
fn fifth_moment() {
    check(
        5,
        poly(
            7,
            &[
                "-105845/110592",
                "-2170159/290304",
                "-99955651/3870720",
                "-30773609/725760",
                "-94846903/11612160",
                "24676991/483840",
                "392763901/11612160",
            ],
        ),
        poly(
            6,
            &[
                "565/2048",
                "1005/128",
                "9832585/165888",
                "1111349/5184",
                "826358527/1935360",
                "159943787/362880",
                "1024580441/5806080",
            ],
        ),
        SplitConst::root_two_pi(Rat::from((565, 8192))),
    );
}

#[test]
fn sixth_moment() {
    check(
        6,
        poly(
            9,
            &[
                "82825/576576",
                "373340075/110702592",
                "9401544029/332107776",
                "14473244813/127733760",
                "414139396709/1660538880",
                "88215445651/332107776",
                "-18783816473/332107776",
                "-643359542029/1660538880",
                "-358936540409/1660538880",
            ],
        ),
        poly(
            7,
            &[
                "-3955/2048",
                "-186349/6144",
                "-259283273/1161216",
                "-119912501/129024",
                "-149860633081/63866880",
                "-601794266581/166053888",
                "-864000570107/276756480",
                "-921390308389/830269440",
            ],
        ),
        SplitConst::rational(Rat::from((82825, 576576))),
    );
}

#[test]
fn general_a_specializes_to_fixed_a() {
    for k in 2..=3 {
        let general = fit_general_a(k, DEFAULT_BUDGET).unwrap();
        assert_eq!(general.status, FitStatus::Verified);
        for a in 1..=3u32 {
            let fixed = fit_fixed_a(k, a, DEFAULT_BUDGET).unwrap();
            for n in [1u32, 7, 30] {
                let e1 = expectation_area(n, a);
                let at = |f: &parkstat_core::fit::FitResult| {
                    let mut p = std::collections::BTreeMap::new();
                    p.insert(Symbol::N, Rat::from(n));
                    p.insert(Symbol::A, Rat::from(a));
                    f.a_poly.eval(&p).unwrap() + f.b_poly.eval(&p).unwrap() * &e1
                };
                assert_eq!(at(&general), at(&fixed), "k={k} a={a} n={n}");
            }
        }
    }
}
