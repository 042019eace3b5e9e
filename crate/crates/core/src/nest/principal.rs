//! The principal nest `I^1 ⊃ I^2 ⊃ ...` rooted at `I^1 = (q̂, q)`.

use rug::Float;
use serde::{Deserialize, Serialize};

use super::interval::{Interval, IntervalReport, Membership};
use super::marked::nearest_preimage_radii;
use crate::combinatorics::Side;
use crate::error::{Error, Result};
use crate::kneading::cutting_times_from_orbit;
use crate::numerics::{
    distance_to_c, monotone_solve, point_at, reversing_fixed_point, side, HpNum, MapSpec, Orbit,
};

/// Deepest nest level computed at `prec` bits.
pub fn nest_level_budget(prec: u32) -> usize {
    (12 * prec as usize) / 512
}

pub(crate) fn check_level_budget(levels: usize, prec: u32) -> Result<()> {
    if levels > nest_level_budget(prec) {
        return Err(Error::Budget(format!(
            "level {levels} exceeds the nest budget {} at {prec} bits",
            nest_level_budget(prec)
        )));
    }
    Ok(())
}

/// One level of the nest.
#[derive(Clone, Debug)]
pub struct NestLevel {
    pub k: usize,
    pub interval: Interval,
    /// First return time of `c` to `I^k`.
    pub return_time: u64,
}

impl NestLevel {
    pub fn radius(&self) -> &Float {
        self.interval
            .radius()
            .expect("nest intervals are symmetric")
    }

    /// `i_k`, the endpoint on the given side (that of `d_k`).
    pub fn endpoint(&self, side: Side) -> &Float {
        self.interval.endpoint(side)
    }

    pub fn to_report(&self) -> NestLevelReport {
        NestLevelReport {
            k: self.k,
            radius: HpNum::new(self.radius().clone()),
            interval: self.interval.to_report(),
            return_time: self.return_time,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestLevelReport {
    pub k: usize,
    pub radius: HpNum,
    pub interval: IntervalReport,
    pub return_time: u64,
}

/// First `j >= 1` with `c_j ∈ J` along a computed orbit.
pub(crate) fn orbit_return_time(orbit: &Orbit, j: &Interval, tol: &Float) -> Result<Option<u64>> {
    for n in 1..=orbit.len() {
        match j.classify(orbit.get(n), tol) {
            Membership::Inside => return Ok(Some(n as u64)),
            Membership::Boundary => {
                return Err(Error::Degenerate(format!(
                    "c_{n} lies within tolerance of the interval boundary"
                )))
            }
            Membership::Outside => {}
        }
    }
    Ok(None)
}

/// Levels `I^1..I^levels` with their central return times, using `orbit`
/// (a validated critical orbit of the map) for return times.
///
/// `I^{k+1}` is the component of `f^{-T_k}(I^k)` containing `c`. On
/// `[c, c + δ]`, with `δ` the nearest preimage distance at the last cutting
/// time before `T_k`, `f^{T_k}` is monotone; its image runs from `c_{T_k}`
/// inside `I^k` to a point outside, and the endpoint of `I^k` crossed in
/// between is pulled back.
pub fn principal_nest(map: &MapSpec, orbit: &Orbit, levels: usize) -> Result<Vec<NestLevel>> {
    if levels == 0 {
        return Ok(Vec::new());
    }
    check_level_budget(levels, map.prec())?;
    let tol = map.tolerance();
    let q = reversing_fixed_point(map)?;
    let mut interval = Interval::symmetric(&distance_to_c(&q));
    let times = cutting_times_from_orbit(orbit, orbit.len() as u64)?.times;
    let mut radii: Vec<Float> = Vec::new();
    let mut out = Vec::with_capacity(levels);
    for k in 1..=levels {
        let t = orbit_return_time(orbit, &interval, &tol)?.ok_or_else(|| {
            Error::InsufficientData(format!(
                "c does not return to I^{k} within {} iterates",
                orbit.len()
            ))
        })?;
        let next = if k < levels {
            Some(pull_back_central(
                map, orbit, &interval, t, &times, &mut radii, k,
            )?)
        } else {
            None
        };
        out.push(NestLevel {
            k,
            interval,
            return_time: t,
        });
        match next {
            Some(j) => interval = j,
            None => break,
        }
    }
    Ok(out)
}

fn pull_back_central(
    map: &MapSpec,
    orbit: &Orbit,
    interval: &Interval,
    t: u64,
    times: &[u64],
    radii: &mut Vec<Float>,
    k: usize,
) -> Result<Interval> {
    let tol = map.tolerance();
    let m = times.iter().rposition(|&s| s < t).ok_or_else(|| {
        Error::Invariant(format!(
            "no cutting time below the return time {t} of I^{k}"
        ))
    })?;
    if radii.len() <= m {
        *radii = nearest_preimage_radii(map, &times[..=m])?;
    }
    let delta = &radii[m];
    let far = orbit.get((t - times[m]) as usize);
    let near = orbit.get(t as usize);
    if interval.classify(far, &tol) != Membership::Outside {
        return Err(Error::Bracketing(format!(
            "the central branch of f^{t} does not cross the boundary of I^{k}"
        )));
    }
    let target = if far > near {
        interval.hi()
    } else {
        interval.lo()
    };
    let half = map.critical_point();
    let sol = monotone_solve(map, t, target, &half, &point_at(delta, Side::Right))?;
    let r = distance_to_c(&sol.x);
    let next = Interval::symmetric(&r);
    if !interval.contains_interval(&next) {
        return Err(Error::Invariant(format!(
            "I^{} is not strictly inside I^{k}",
            k + 1
        )));
    }
    Ok(next)
}

/// Side of `d_k = c_{S_k}` given cutting times, when defined.
pub(crate) fn side_of_point(x: &Float) -> Result<Side> {
    side(x).ok_or_else(|| Error::Degenerate("point coincides with c".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneading::frozen_fibonacci_parameter;
    use crate::numerics::critical_orbit;

    #[test]
    fn first_level_is_the_fixed_point_interval() {
        let m = frozen_fibonacci_parameter(512).unwrap();
        let orbit = critical_orbit(&m, 2000).unwrap();
        let nest = principal_nest(&m, &orbit, 4).unwrap();
        let q = reversing_fixed_point(&m).unwrap();
        assert_eq!(*nest[0].interval.hi(), q);
        assert_eq!(Float::with_val(600, nest[0].interval.lo() + &q), 1);
        let times: Vec<u64> = nest.iter().map(|l| l.return_time).collect();
        assert_eq!(times, [3, 5, 8, 13]);
        for w in nest.windows(2) {
            assert!(w[0].interval.contains_interval(&w[1].interval));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = frozen_fibonacci_parameter(512).unwrap();
        let orbit = critical_orbit(&m, 100).unwrap();
        assert!(matches!(
            principal_nest(&m, &orbit, 13),
            Err(Error::Budget(_))
        ));
    }
}
