//! Cutting times from the tower recursion against the nearest-preimage
//! definition, and against closest returns.

use fibnest_core::combinatorics::fib_up_to;
use fibnest_core::kneading::{
    closest_returns, cutting_times, frozen_fibonacci_parameter, is_fibonacci,
    kneading_from_cutting_times, preimage_cutting_times,
};
use fibnest_core::numerics::MapSpec;
use fibnest_core::Error;
use proptest::prelude::*;

#[test]
fn frozen_parameter_has_fibonacci_cutting_times() {
    let map = frozen_fibonacci_parameter(512).unwrap();
    let seq = cutting_times(&map, 500).unwrap();
    assert_eq!(seq.times, fib_up_to(500));
    assert!(is_fibonacci(&map, 13).unwrap());
}

#[test]
fn closest_returns_of_the_fibonacci_map_are_its_cutting_times() {
    let map = frozen_fibonacci_parameter(512).unwrap();
    let cr = closest_returns(&map, 400).unwrap();
    assert_eq!(cr.times, fib_up_to(400));
}

#[test]
fn definitions_agree_on_a_parameter_grid() {
    for i in 0..6 {
        let a = 0.55 + 0.45 * i as f64 / 5.0;
        let map = MapSpec::from_f64(a, 2.0, 512).unwrap();
        let tower = match cutting_times(&map, 12) {
            Ok(s) => s.times,
            Err(Error::Degenerate(_)) => continue,
            Err(e) => panic!("a = {a}: {e}"),
        };
        let pre = preimage_cutting_times(&map, 12).unwrap().times;
        assert_eq!(tower, pre, "a = {a}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tower_and_preimage_definitions_agree(a in 0.55f64..1.0) {
        let map = MapSpec::from_f64(a, 2.0, 256).unwrap();
        let tower = cutting_times(&map, 10);
        let pre = preimage_cutting_times(&map, 10);
        if let (Ok(t), Ok(p)) = (tower, pre) {
            prop_assert_eq!(t.times, p.times);
        }
    }

    #[test]
    fn kneading_respects_the_flip_at_cutting_times(a in 0.8f64..1.0) {
        let map = MapSpec::from_f64(a, 2.0, 256).unwrap();
        if let Ok(seq) = cutting_times(&map, 60) {
            let n = *seq.times.last().unwrap() as usize;
            if let Ok(e) = kneading_from_cutting_times(&seq.times, n) {
                for w in seq.times.windows(2) {
                    let (p, q) = (w[0] as usize, w[1] as usize);
                    prop_assert_ne!(e[q - 1], e[q - p - 1]);
                }
            }
        }
    }
}
