//! Bisection in the parameter for the Fibonacci combinatorics.
//!
//! The itinerary of `c_1` is compared with the Fibonacci kneading sequence
//! in the signed lexicographic order, which is monotone in `a`. Midpoints
//! are dyadic, so the search path depends only on the sequence of
//! decisions and runs at different precisions agree bit for bit as long
//! as they make the same decisions.

use std::cmp::Ordering;

use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use super::{cutting_times, fibonacci_kneading};
use crate::combinatorics::{fib_u64, Side};
use crate::error::{Error, Result};
use crate::numerics::{HpNum, MapSpec};

/// `a*` for `ℓ = 2`, as produced by [`find_fibonacci_parameter`] at 512 bits.
pub const FIBONACCI_PARAMETER_ELL2_HEX: &str =
    "0x1.f4c9c0a6fb1aa4f3c1592e3b46e250c498cbb161ec2018b35b47082dfad0c743a228p-1";
pub const FIBONACCI_PARAMETER_ELL2_PREC: u32 = 512;

/// The frozen `a*` for `ℓ = 2` at the requested precision.
pub fn frozen_fibonacci_parameter(prec: u32) -> Result<MapSpec> {
    let a = HpNum::from_hex(FIBONACCI_PARAMETER_ELL2_HEX, FIBONACCI_PARAMETER_ELL2_PREC)?;
    MapSpec::new(a.as_float(), 2.0, prec)
}

/// Deepest target depth the search accepts at `prec` bits.
pub fn max_search_depth(prec: u32) -> usize {
    (13 * prec as usize) / 512
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub bracket: (Float, Float),
    /// Longest itinerary prefix examined per bisection step.
    pub horizon: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            bracket: (Float::with_val(64, 0.75), Float::with_val(64, 1)),
            horizon: 1 << 19,
        }
    }
}

/// Why the bisection stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    /// No difference from the target within the horizon.
    Horizon,
    /// The first differing symbol came from a point too close to `c`.
    Untrusted,
    /// The bracket cannot be split at the working precision.
    Resolution,
    /// Depth 1 needs no search.
    Trivial,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub map: MapSpec,
    pub lo: HpNum,
    pub hi: HpNum,
    pub steps: u32,
    pub stop: StopReason,
    pub verified_prefix: usize,
}

/// Finds `a` whose cutting times begin `1, 2, 3, 5, ...` to `depth` terms.
pub fn find_fibonacci_parameter(ell: f64, depth: usize, prec: u32) -> Result<SearchOutcome> {
    find_fibonacci_parameter_with(ell, depth, prec, &SearchOptions::default())
}

pub fn find_fibonacci_parameter_with(
    ell: f64,
    depth: usize,
    prec: u32,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    if depth == 0 {
        return Err(Error::Domain("target depth must be >= 1".into()));
    }
    if depth > max_search_depth(prec) {
        return Err(Error::Budget(format!(
            "depth {depth} needs more than {prec} bits (limit {} at this precision)",
            max_search_depth(prec)
        )));
    }
    let target = fibonacci_kneading(options.horizon);
    let mut lo = Float::with_val(prec, &options.bracket.0);
    let mut hi = Float::with_val(prec, &options.bracket.1);
    if lo >= hi {
        return Err(Error::Search("empty parameter bracket".into()));
    }
    let below = compare_with_target(&MapSpec::new(&lo, ell, prec)?, &target)?;
    let above = compare_with_target(&MapSpec::new(&hi, ell, prec)?, &target)?;
    if below != Some(Ordering::Less) || above != Some(Ordering::Greater) {
        return Err(Error::Search(format!(
            "bracket [{}, {}] does not straddle the Fibonacci combinatorics",
            lo.to_f64(),
            hi.to_f64()
        )));
    }
    let mut steps = 0;
    let stop = if depth == 1 {
        StopReason::Trivial
    } else {
        loop {
            let mid = Float::with_val(prec, &lo + &hi) / 2u32;
            if mid <= lo || mid >= hi {
                break StopReason::Resolution;
            }
            let map = MapSpec::new(&mid, ell, prec)?;
            match compare_with_target(&map, &target)? {
                Some(Ordering::Greater) => hi = mid,
                Some(Ordering::Less) => lo = mid,
                Some(Ordering::Equal) => break StopReason::Horizon,
                None => break StopReason::Untrusted,
            }
            steps += 1;
        }
    };
    let a = Float::with_val(prec, &lo + &hi) / 2u32;
    let map = MapSpec::new(&a, ell, prec)?;
    let horizon = fib_u64(depth - 1).expect("depth is within budget").max(2);
    let verified_prefix = cutting_times(&map, horizon)?.fibonacci_prefix_len();
    if verified_prefix < depth {
        return Err(Error::Search(format!(
            "parameter found has Fibonacci prefix {verified_prefix}, below the requested {depth}"
        )));
    }
    Ok(SearchOutcome {
        map,
        lo: HpNum::new(lo),
        hi: HpNum::new(hi),
        steps,
        stop,
        verified_prefix,
    })
}

/// Signed lexicographic comparison of the itinerary `c_1, c_2, ...` with
/// `target`. `Greater` means the parameter lies above the one realizing
/// `target`; `Equal` means no difference within the target's length;
/// `None` means the first difference is not numerically trustworthy.
fn compare_with_target(map: &MapSpec, target: &[Side]) -> Result<Option<Ordering>> {
    let tol = map.tolerance();
    let mut stepper = map.stepper();
    let mut x = map.critical_point();
    let mut next = Float::new(map.prec());
    let mut offset = Float::new(map.prec() + 2);
    let mut odd = false;
    for &want in target {
        stepper.step(map, &x, &mut next);
        std::mem::swap(&mut x, &mut next);
        offset.assign(&x - 0.5f64);
        if offset.cmp_abs(&tol) != Some(Ordering::Greater) {
            return Ok(None);
        }
        let got = if offset.is_sign_negative() {
            Side::Left
        } else {
            Side::Right
        };
        if got != want {
            // With an even number of R's so far the order is the plain one
            // (L < R); an odd count reverses it.
            let larger = (got == Side::Right) != odd;
            return Ok(Some(if larger {
                Ordering::Greater
            } else {
                Ordering::Less
            }));
        }
        if got == Side::Right {
            odd = !odd;
        }
    }
    Ok(Some(Ordering::Equal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(lo: f64, hi: f64, horizon: usize) -> SearchOptions {
        SearchOptions {
            bracket: (Float::with_val(64, lo), Float::with_val(64, hi)),
            horizon,
        }
    }

    #[test]
    fn depth_one_returns_the_midpoint() {
        let out = find_fibonacci_parameter_with(2.0, 1, 128, &opts(0.75, 1.0, 64)).unwrap();
        assert_eq!(*out.map.a(), 0.875);
        assert_eq!(out.stop, StopReason::Trivial);
        assert!(out.verified_prefix >= 1);
    }

    #[test]
    fn bracket_below_the_combinatorics_is_rejected() {
        let r = find_fibonacci_parameter_with(2.0, 5, 512, &opts(0.51, 0.52, 64));
        assert!(matches!(r, Err(Error::Search(_))), "{r:?}");
    }

    #[test]
    fn depth_beyond_budget_is_rejected() {
        assert!(matches!(
            find_fibonacci_parameter(2.0, 30, 512),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            find_fibonacci_parameter(2.0, 0, 512),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shallow_search_reaches_the_horizon() {
        let out = find_fibonacci_parameter_with(2.0, 8, 512, &opts(0.75, 1.0, 400)).unwrap();
        assert_eq!(out.stop, StopReason::Horizon);
        assert!(out.verified_prefix >= 8);
        assert!((out.map.a().to_f64() - 0.978).abs() < 1e-3);
    }
}
