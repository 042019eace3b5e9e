//! The combinatorial order of the critical orbit against an independent
//! numeric oracle: a plain f64 iteration for coarse
//! checks and the library's own 512-bit orbit for fine ones.

use std::cmp::Ordering;

use fibnest_core::combinatorics::{
    compare_abs, orbit_order, side_of, spatial_compare, FibSum, Side,
};
use fibnest_core::kneading::{fibonacci_kneading, frozen_fibonacci_parameter};
use fibnest_core::numerics::{critical_orbit, distance_to_c};
use proptest::prelude::*;

const A_STAR_F64: f64 = 0.978_101_749_785_812;

/// `c_1..c_n` of `x -> a(1 - (2x-1)^2)` in f64.
fn f64_orbit(a: f64, n: usize) -> Vec<f64> {
    let mut x = 0.5f64;
    (0..n)
        .map(|_| {
            let t = 2.0 * x - 1.0;
            x = a * (1.0 - t * t);
            x
        })
        .collect()
}

#[test]
fn early_sides_match_a_plain_float_iteration() {
    // f64 loses the orbit after a few dozen steps, so only early iterates.
    let orbit = f64_orbit(A_STAR_F64, 20);
    for (i, x) in orbit.iter().enumerate() {
        let m = i as u64 + 1;
        let expect = if *x < 0.5 { Side::Left } else { Side::Right };
        assert_eq!(side_of(&FibSum::of(m).unwrap()), expect, "c_{m} = {x}");
    }
}

#[test]
fn early_order_matches_a_plain_float_iteration() {
    let orbit = f64_orbit(A_STAR_F64, 12);
    let mut by_value: Vec<u64> = (1..=12).collect();
    by_value.sort_by(|&m, &n| {
        orbit[m as usize - 1]
            .partial_cmp(&orbit[n as usize - 1])
            .unwrap()
    });
    assert_eq!(orbit_order(12).unwrap(), by_value);
}

#[test]
fn itinerary_at_the_frozen_parameter_is_the_fibonacci_kneading() {
    let map = frozen_fibonacci_parameter(512).unwrap();
    let orbit = critical_orbit(&map, 300).unwrap();
    let expect = fibonacci_kneading(300);
    for m in 1..=300 {
        let x = orbit.get(m);
        let s = if *x < 0.5 { Side::Left } else { Side::Right };
        assert_eq!(s, expect[m - 1], "m = {m}");
    }
}

#[test]
fn s0_and_s1_clusters_interleave_numerically() {
    let map = frozen_fibonacci_parameter(512).unwrap();
    let orbit = critical_orbit(&map, 10).unwrap();
    let d = |m: usize| distance_to_c(orbit.get(m));
    // |c_4| < |c_2| < |c_6|
    assert!(d(4) < d(2) && d(2) < d(6));
    let c = |m| FibSum::of(m).unwrap();
    assert_eq!(compare_abs(&c(4), &c(2)), Ordering::Less);
    assert_eq!(compare_abs(&c(2), &c(6)), Ordering::Less);
}

fn sum_strategy() -> impl Strategy<Value = u64> {
    1u64..5_000
}

proptest! {
    #[test]
    fn distance_order_is_antisymmetric(m in sum_strategy(), n in sum_strategy()) {
        let (a, b) = (FibSum::of(m).unwrap(), FibSum::of(n).unwrap());
        prop_assert_eq!(compare_abs(&a, &b), compare_abs(&b, &a).reverse());
        prop_assert_eq!(compare_abs(&a, &b) == Ordering::Equal, m == n);
    }

    #[test]
    fn spatial_order_is_transitive(m in sum_strategy(), n in sum_strategy(), k in sum_strategy()) {
        let (a, b, c) = (FibSum::of(m).unwrap(), FibSum::of(n).unwrap(), FibSum::of(k).unwrap());
        if spatial_compare(&a, &b) == Ordering::Less && spatial_compare(&b, &c) == Ordering::Less {
            prop_assert_eq!(spatial_compare(&a, &c), Ordering::Less);
        }
    }

    #[test]
    fn left_points_precede_right_points(m in sum_strategy(), n in sum_strategy()) {
        let (a, b) = (FibSum::of(m).unwrap(), FibSum::of(n).unwrap());
        if side_of(&a) == Side::Left && side_of(&b) == Side::Right {
            prop_assert_eq!(spatial_compare(&a, &b), Ordering::Less);
        }
    }

    #[test]
    fn distance_order_is_transitive(m in sum_strategy(), n in sum_strategy(), k in sum_strategy()) {
        let (a, b, c) = (FibSum::of(m).unwrap(), FibSum::of(n).unwrap(), FibSum::of(k).unwrap());
        if compare_abs(&a, &b) == Ordering::Less && compare_abs(&b, &c) == Ordering::Less {
            prop_assert_eq!(compare_abs(&a, &c), Ordering::Less);
        }
    }
}
