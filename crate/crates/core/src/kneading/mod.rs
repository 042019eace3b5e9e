//! Cutting times, closest returns, kneading itineraries and the search for
//! the Fibonacci parameter.

mod preimage;
mod search;
mod tower;

use std::cmp::Ordering;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{fib_up_to, Side};
use crate::error::{Error, Result};
use crate::numerics::{critical_orbit, distance_to_c, HpNum, MapSpec};

pub use preimage::{preimage_cutting_times, PreimageFan, MAX_PREIMAGE_DEPTH};
pub use search::{
    find_fibonacci_parameter, find_fibonacci_parameter_with, frozen_fibonacci_parameter,
    max_search_depth, SearchOptions, SearchOutcome, StopReason, FIBONACCI_PARAMETER_ELL2_HEX,
    FIBONACCI_PARAMETER_ELL2_PREC,
};
pub use tower::{cutting_times, cutting_times_from_orbit};

/// Cutting times `S_0 < S_1 < ...` of a map, all at most the horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuttingSequence {
    pub times: Vec<u64>,
    pub computed_up_to: u64,
}

impl CuttingSequence {
    pub fn fibonacci_prefix_len(&self) -> usize {
        fibonacci_prefix_len(&self.times)
    }
}

/// Length of the longest prefix of `times` equal to `1, 2, 3, 5, 8, ...`.
pub fn fibonacci_prefix_len(times: &[u64]) -> usize {
    let limit = times.last().copied().unwrap_or(0);
    fib_up_to(limit)
        .iter()
        .zip(times)
        .take_while(|(a, b)| a == b)
        .count()
}

/// Strict closest returns of the critical orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosestReturnSequence {
    pub times: Vec<u64>,
    pub distances: Vec<HpNum>,
    pub computed_up_to: u64,
}

/// Times `n <= horizon` with `|c_n - c| < |c_j - c|` for all `1 <= j < n`.
///
/// Exact ties do not count as returns. A near tie (closer than the map's
/// tolerance but not equal) cannot be decided and is reported as degenerate.
pub fn closest_returns(map: &MapSpec, horizon: u64) -> Result<ClosestReturnSequence> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    let orbit = critical_orbit(map, horizon as usize)?;
    let tol = map.tolerance();
    let mut times = Vec::new();
    let mut distances: Vec<HpNum> = Vec::new();
    let mut best: Option<Float> = None;
    for (i, x) in orbit.values().iter().enumerate() {
        let d = distance_to_c(x);
        let record = match &best {
            None => true,
            Some(b) => match d.partial_cmp(b) {
                Some(Ordering::Less) => {
                    check_separated(&d, b, &tol, i + 1)?;
                    true
                }
                Some(Ordering::Equal) => false,
                _ => {
                    check_separated(&d, b, &tol, i + 1)?;
                    false
                }
            },
        };
        if record {
            times.push(i as u64 + 1);
            distances.push(HpNum::new(d.clone()));
            best = Some(d);
        }
    }
    Ok(ClosestReturnSequence {
        times,
        distances,
        computed_up_to: horizon,
    })
}

fn check_separated(d: &Float, best: &Float, tol: &Float, n: usize) -> Result<()> {
    let gap = Float::with_val(d.prec().max(best.prec()), d - best);
    if gap.cmp_abs(tol) == Some(Ordering::Less) {
        return Err(Error::Degenerate(format!(
            "|c_{n}| ties the current closest distance within tolerance"
        )));
    }
    Ok(())
}

/// Kneading symbols `e_1..e_n` determined by a cutting-time sequence:
/// `e_1 = R`, and between consecutive cutting times the itinerary repeats
/// its own beginning, with the symbol at each cutting time flipped.
///
/// `times` must start with 1 and every difference of consecutive times must
/// itself be a cutting time; the sequence must reach past `n` or `n` must
/// lie before the last time's successor is needed.
pub fn kneading_from_cutting_times(times: &[u64], n: usize) -> Result<Vec<Side>> {
    if times.first() != Some(&1) {
        return Err(Error::Domain("cutting times must start with 1".into()));
    }
    let mut e: Vec<Side> = Vec::with_capacity(n + 1);
    // 1-based: e[0] is unused.
    e.push(Side::Right);
    if n >= 1 {
        e.push(Side::Right);
    }
    for w in times.windows(2) {
        let (prev, next) = (w[0] as usize, w[1] as usize);
        let gap = next - prev;
        if times.binary_search(&(gap as u64)).is_err() {
            return Err(Error::Domain(format!(
                "difference {gap} of consecutive cutting times is not a cutting time"
            )));
        }
        for m in prev + 1..=next {
            if m > n {
                break;
            }
            let j = m - prev;
            let s = if m == next { e[j].flip() } else { e[j] };
            e.push(s);
        }
        if next >= n {
            break;
        }
    }
    if e.len() <= n {
        return Err(Error::InsufficientData(format!(
            "cutting times end at {} before iterate {n}",
            times.last().copied().unwrap_or(0)
        )));
    }
    e.remove(0);
    Ok(e)
}

/// Kneading symbols of the Fibonacci combinatorics, `e_1..e_n`.
pub fn fibonacci_kneading(n: usize) -> Vec<Side> {
    let mut times = fib_up_to(n as u64 + 1);
    if let Some(&last) = times.last() {
        let prev = if times.len() >= 2 {
            times[times.len() - 2]
        } else {
            1
        };
        times.push(last + prev);
    }
    kneading_from_cutting_times(&times, n).expect("Fibonacci times are self-consistent")
}

/// Decides whether the map is Fibonacci to `depth`: cutting times through
/// `S_{depth-1}` match the Fibonacci numbers and `|c_1| > |c_2|`.
pub fn is_fibonacci(map: &MapSpec, depth: usize) -> Result<bool> {
    if depth == 0 {
        return Err(Error::Domain("depth must be >= 1".into()));
    }
    let horizon = crate::combinatorics::fib_u64(depth - 1)
        .ok_or_else(|| Error::Budget(format!("depth {depth} overflows the cutting-time range")))?;
    let horizon = horizon.max(2);
    let seq = cutting_times(map, horizon)?;
    if seq.fibonacci_prefix_len() < depth {
        return Ok(false);
    }
    let orbit = critical_orbit(map, 2)?;
    Ok(distance_to_c(orbit.get(1)) > distance_to_c(orbit.get(2)))
}
