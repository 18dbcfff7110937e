mod common;

use symcensus::cm::{class_group, class_number, cm_count, hecke_char_count, Order};
use symcensus::modforms::dim_cusp;
use symcensus::Error;

#[test]
fn class_numbers_agree_with_analytic_formula() {
    let mut checked = 0;
    for m in 3..=10_000i64 {
        let d = -m;
        if !common::is_fundamental(d) {
            continue;
        }
        assert_eq!(class_number(d) as u64, common::analytic_class_number(d), "d={d}");
        checked += 1;
    }
    assert!(checked > 3000);
}

#[test]
fn group_structure_matches_composition_table() {
    for m in 3..=600i64 {
        let d = -m;
        if !common::is_fundamental(d) {
            continue;
        }
        let ours = class_group(d).unwrap();
        assert_eq!(
            common::order_profile(ours.class_group.invariant_factors()),
            common::class_group_order_profile(d),
            "d={d}"
        );
    }
}

#[test]
fn non_fundamental_rejected() {
    for d in [-12i64, -16, -27, -9, 5, 0] {
        assert!(matches!(class_group(d), Err(Error::NotFundamental(_))), "d={d}");
    }
}

#[test]
fn cm_counts_bounded_by_dimension() {
    for k in [2u64, 4, 6] {
        for n in 1..=400 {
            let c = cm_count(k, n).unwrap();
            assert!(c.total <= dim_cusp(k, n).unwrap(), "k={k} N={n}");
            assert!(c.breakdown.windows(2).all(|w| (w[0].d.unsigned_abs(), w[0].norm_m) <= (w[1].d.unsigned_abs(), w[1].norm_m)));
        }
    }
}

#[test]
fn trivial_modulus_count_is_class_number() {
    // with modulus (1) every unit must satisfy u^t = 1, i.e. w | t
    for m in 3..=300i64 {
        let d = -m;
        if !common::is_fundamental(d) {
            continue;
        }
        let f = class_group(d).unwrap();
        let one = Order { d }.unit_ideal();
        for t in 1..=12u64 {
            let expected = if t % f.w == 0 { f.h } else { 0 };
            assert_eq!(hecke_char_count(&f, one, t).count, expected);
        }
    }
}
