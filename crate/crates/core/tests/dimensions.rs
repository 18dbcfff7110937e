mod common;

use proptest::prelude::*;
use symcensus::modforms::{curve_invariants, dim_cusp, dim_new, leading_density, DimensionRecord};

#[test]
fn matches_cohen_oesterle_beyond_acceptance_range() {
    for k in [2u64, 4, 6, 8, 10, 12, 14, 24] {
        for n in 1..=150 {
            assert_eq!(dim_cusp(k, n).unwrap() as i64, common::dim_cusp_oracle(k, n), "k={k} N={n}");
        }
    }
}

#[test]
fn known_genera() {
    // genus of X_1(N)
    for (n, g) in [(11, 1), (13, 2), (16, 2), (17, 5), (18, 2), (19, 7), (20, 3), (23, 12), (25, 12), (29, 22)] {
        assert_eq!(curve_invariants(n).genus, g, "N={n}");
    }
}

#[test]
fn level_one() {
    // dim S_k(SL_2(Z)) = floor(k/12) - [k = 2 mod 12] for k >= 4
    assert_eq!(dim_cusp(2, 1).unwrap(), 0);
    for k in (4..=100u64).step_by(2) {
        let expected = k / 12 - (k % 12 == 2) as u64;
        assert_eq!(dim_cusp(k, 1).unwrap(), expected, "k={k}");
    }
}

#[test]
fn odd_weight_rejected() {
    assert!(dim_cusp(5, 7).is_err());
    assert!(dim_new(1, 7).is_err());
    assert!(dim_cusp(0, 7).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn new_old_decomposition(k in (1u64..=10).prop_map(|h| 2 * h), n in 1u64..3000) {
        let rec = DimensionRecord::compute(k, n).unwrap();
        prop_assert!(rec.dim_new <= rec.dim_full);
    }

    #[test]
    fn dimension_below_index_density(k in (2u64..=12).prop_map(|h| 2 * h), n in 5u64..5000) {
        // dim S_k = (k-1)/24 N^2 prod(1-1/p^2) + O(N^{1+eps}) with the correction negative for k >= 4
        let d = dim_cusp(k, n).unwrap() as f64;
        prop_assert!(d <= leading_density(k, n) * (n * n) as f64 + 1.0);
    }
}
