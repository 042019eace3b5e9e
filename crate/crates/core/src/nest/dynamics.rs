//! Nice intervals and first entry times.

use std::cmp::Ordering;
use std::collections::VecDeque;

use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use super::interval::{Interval, Membership};
use crate::combinatorics::Side;
use crate::error::{Error, Result};
use crate::numerics::{HpNum, MapSpec};

/// Recent boundary-orbit points kept for cycle detection.
const CYCLE_WINDOW: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NiceReport {
    pub nice: bool,
    pub horizon: u64,
    /// First `(endpoint side, iterate)` that landed inside, if any.
    pub violation: Option<(Side, u64)>,
    /// Per endpoint, the iterate at which the orbit was seen to cycle.
    pub cycled_at: Vec<Option<u64>>,
}

/// Whether `f^n(∂J) ∩ J = ∅` for `1 <= n <= horizon`.
///
/// Boundary orbits are followed at `p` and `2p` bits; disagreement beyond
/// the tolerance is a precision error. An orbit that comes back within
/// tolerance of one of its recent points is treated as eventually periodic
/// and not followed further. Landing on `∂J` itself does not count as
/// entering the open interval.
pub fn is_nice(map: &MapSpec, j: &Interval, horizon: u64) -> Result<NiceReport> {
    let wide = map.with_prec(map.prec() * 2)?;
    let tol = map.tolerance();
    let mut cycled_at = Vec::new();
    for side in [Side::Left, Side::Right] {
        let start = j.endpoint(side);
        let mut x = Float::with_val(start.prec().max(map.prec()), start);
        let mut xw = Float::with_val(start.prec().max(wide.prec()), start);
        let mut next = Float::new(map.prec());
        let mut next_w = Float::new(wide.prec());
        let (mut s, mut sw) = (map.stepper(), wide.stepper());
        let mut diff = Float::new(wide.prec());
        let mut recent: VecDeque<Float> = VecDeque::with_capacity(CYCLE_WINDOW);
        recent.push_back(x.clone());
        let mut cycled = None;
        for n in 1..=horizon {
            s.step(map, &x, &mut next);
            sw.step(&wide, &xw, &mut next_w);
            std::mem::swap(&mut x, &mut next);
            std::mem::swap(&mut xw, &mut next_w);
            diff.assign(&x - &xw);
            if diff.cmp_abs(&tol) == Some(Ordering::Greater) {
                return Err(Error::PrecisionExhausted {
                    index: n as usize,
                    bits: map.prec(),
                });
            }
            if j.classify(&x, &tol) == Membership::Inside {
                return Ok(NiceReport {
                    nice: false,
                    horizon,
                    violation: Some((side, n)),
                    cycled_at,
                });
            }
            let repeats = recent.iter().any(|p| {
                diff.assign(&x - p);
                diff.cmp_abs(&tol) != Some(Ordering::Greater)
            });
            if repeats {
                cycled = Some(n);
                break;
            }
            if recent.len() == CYCLE_WINDOW {
                recent.pop_front();
            }
            recent.push_back(x.clone());
        }
        cycled_at.push(cycled);
    }
    Ok(NiceReport {
        nice: true,
        horizon,
        violation: None,
        cycled_at,
    })
}

/// Outcome of following a point until it (re-)enters an interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EntryResult {
    /// `f^time(x)` is the first positive iterate inside the interval.
    Entered { time: u64, image: HpNum },
    /// No entry within `cap` iterates.
    NoEntry { cap: u64 },
}

impl EntryResult {
    pub fn time(&self) -> Option<u64> {
        match self {
            EntryResult::Entered { time, .. } => Some(*time),
            EntryResult::NoEntry { .. } => None,
        }
    }
}

/// Least `k >= 1` with `f^k(x) ∈ J`. For `x ∈ J` this is the first return.
/// An iterate within tolerance of `∂J` is a degeneracy error.
pub fn first_entry(map: &MapSpec, j: &Interval, x: &Float, cap: u64) -> Result<EntryResult> {
    let tol = map.tolerance();
    let mut cur = map.eval(x)?;
    let mut next = Float::new(map.prec());
    let mut s = map.stepper();
    for k in 1..=cap {
        if k > 1 {
            s.step(map, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        match j.classify(&cur, &tol) {
            Membership::Inside => {
                return Ok(EntryResult::Entered {
                    time: k,
                    image: HpNum::new(cur),
                })
            }
            Membership::Boundary => {
                return Err(Error::Degenerate(format!(
                    "iterate {k} lies within tolerance of the interval boundary"
                )))
            }
            Membership::Outside => {}
        }
    }
    Ok(EntryResult::NoEntry { cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::reversing_fixed_point;

    fn fixed_point_interval(map: &MapSpec) -> Interval {
        let q = reversing_fixed_point(map).unwrap();
        Interval::symmetric(&Float::with_val(map.prec(), &q - 0.5))
    }

    #[test]
    fn fixed_point_interval_is_nice() {
        for a in [0.8, 0.9, 0.97, 1.0] {
            let m = MapSpec::from_f64(a, 2.0, 256).unwrap();
            let r = is_nice(&m, &fixed_point_interval(&m), 1000).unwrap();
            assert!(r.nice, "a = {a}");
        }
    }

    #[test]
    fn generic_small_interval_is_not_nice() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        let j = Interval::symmetric(&Float::with_val(256, 0.0123));
        let r = is_nice(&m, &j, 50).unwrap();
        assert!(!r.nice);
        assert!(is_nice(&m, &j, 0).unwrap().nice);
    }

    #[test]
    fn entry_time_is_positive() {
        let m = MapSpec::from_f64(0.9, 2.0, 256).unwrap();
        let j = fixed_point_interval(&m);
        let e = first_entry(&m, &j, &m.critical_point(), 100).unwrap();
        assert!(e.time().unwrap() >= 1);
    }

    #[test]
    fn collapsing_orbit_never_enters() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        let j = Interval::symmetric(&Float::with_val(256, 0.1));
        let e = first_entry(&m, &j, &Float::with_val(256, 0.5), 50).unwrap();
        assert_eq!(e, EntryResult::NoEntry { cap: 50 });
    }
}
