//! Orbit-witnessed components of the first return map to a nice interval.

use std::cmp::Ordering;

use rug::Float;
use serde::{Deserialize, Serialize};

use super::interval::{Interval, Membership};
use crate::combinatorics::Side;
use crate::error::{Error, Result};
use crate::numerics::{point_at, side, tolerance, HpNum, MapSpec, Orbit};

/// A domain boundary known to lie between `inner` (in the domain) and
/// `outer` (not in it).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub inner: HpNum,
    pub outer: HpNum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnDomain {
    pub lo: Enclosure,
    pub hi: Enclosure,
    pub return_time: u64,
    pub contains_critical: bool,
    /// Orbit indices `n` with `c_n` in the domain (`0` stands for `c`).
    pub witness_orbit_indices: Vec<u64>,
}

impl ReturnDomain {
    /// Strictly inside the inner enclosure ends.
    pub fn contains(&self, x: &Float) -> bool {
        *x > *self.lo.inner.as_float() && *x < *self.hi.inner.as_float()
    }

    fn within_outer(&self, x: &Float) -> bool {
        *x >= *self.lo.outer.as_float() && *x <= *self.hi.outer.as_float()
    }

    /// `count` evenly spaced points strictly inside the domain.
    pub fn interior_samples(&self, count: usize, prec: u32) -> Vec<Float> {
        let lo = self.lo.inner.as_float();
        let hi = self.hi.inner.as_float();
        let width = Float::with_val(prec, hi - lo);
        (1..=count)
            .map(|i| {
                let mut x = Float::with_val(prec, &width * i as u32);
                x /= (count + 1) as u32;
                x += lo;
                x
            })
            .collect()
    }

    /// Midpoints of the two boundary enclosures.
    pub fn bounds(&self, prec: u32) -> (Float, Float) {
        let mid =
            |e: &Enclosure| Float::with_val(prec, e.inner.as_float() + e.outer.as_float()) / 2u32;
        (mid(&self.lo), mid(&self.hi))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSet {
    /// Sorted left to right.
    pub domains: Vec<ReturnDomain>,
    /// More domains were witnessed than `max_domains`.
    pub truncated: bool,
    /// Witnesses whose return was not seen within the cap.
    pub unresolved: Vec<u64>,
}

impl DomainSet {
    pub fn central(&self) -> Option<&ReturnDomain> {
        self.domains.iter().find(|d| d.contains_critical)
    }

    pub fn lateral(&self) -> impl Iterator<Item = &ReturnDomain> {
        self.domains.iter().filter(|d| !d.contains_critical)
    }
}

/// Limits for [`return_domains`].
#[derive(Clone, Copy, Debug)]
pub struct DomainOptions {
    /// Forward iterations allowed for witnesses at the end of the orbit.
    pub cap: u64,
    pub max_domains: usize,
}

impl Default for DomainOptions {
    fn default() -> Self {
        DomainOptions {
            cap: 100_000,
            max_domains: 64,
        }
    }
}

/// Return domains of the nice interval `j` that meet the critical orbit.
///
/// Every `c_n ∈ J` (with `c_0 = c`) is a witness. Its return time comes
/// from the orbit itself, or from further iteration at the orbit's end.
/// The domain around a witness `w` with return time `r` is grown by
/// bisecting towards each end of `J` on the predicate "same itinerary as
/// `w` before time `r`, no earlier visit to `J`, and `f^r(y) ∈ J`"; each
/// boundary is reported as an enclosure of width `2^{-p/2}`.
pub fn return_domains(
    map: &MapSpec,
    j: &Interval,
    orbit: &Orbit,
    options: DomainOptions,
) -> Result<DomainSet> {
    let tol = map.tolerance();
    let len = orbit.len();
    let mut inside = vec![false; len + 1];
    inside[0] = true;
    for (n, slot) in inside.iter_mut().enumerate().skip(1) {
        *slot = match j.classify(orbit.get(n), &tol) {
            Membership::Inside => true,
            Membership::Outside => false,
            Membership::Boundary => {
                return Err(Error::Degenerate(format!(
                    "orbit point c_{n} lies within tolerance of the interval boundary"
                )))
            }
        };
    }
    if j.classify(&map.critical_point(), &tol) != Membership::Inside {
        return Err(Error::Domain("the interval must contain c".into()));
    }
    let mut next_visit = vec![None; len + 1];
    let mut upcoming = None;
    for n in (0..=len).rev() {
        next_visit[n] = upcoming;
        if inside[n] {
            upcoming = Some(n);
        }
    }

    let mut set = DomainSet {
        domains: Vec::new(),
        truncated: false,
        unresolved: Vec::new(),
    };
    let mut tail_entry: Option<Option<u64>> = None;
    for n in (0..=len).filter(|&n| inside[n]) {
        let w = orbit.c(n);
        let r = match next_visit[n] {
            Some(m) => (m - n) as u64,
            None => {
                // All later tail witnesses share the first entry after c_len.
                let extra =
                    *tail_entry.get_or_insert(tail_return(map, j, orbit.get(len), options.cap)?);
                match extra {
                    Some(e) => (len - n) as u64 + e,
                    None => {
                        set.unresolved.push(n as u64);
                        continue;
                    }
                }
            }
        };
        if let Some(d) = set.domains.iter_mut().find(|d| d.within_outer(&w)) {
            if !d.contains(&w) {
                return Err(Error::Degenerate(format!(
                    "c_{n} lies inside a domain boundary enclosure"
                )));
            }
            if d.return_time != r {
                return Err(Error::Invariant(format!(
                    "c_{n} returns after {r} iterates inside a domain with return time {}",
                    d.return_time
                )));
            }
            d.witness_orbit_indices.push(n as u64);
            continue;
        }
        if set.domains.len() == options.max_domains {
            set.truncated = true;
            break;
        }
        let mut domain = if n == 0 {
            central_domain(map, j, orbit, r)?
        } else {
            lateral_domain(map, j, &w, r)?
        };
        domain.witness_orbit_indices.push(n as u64);
        set.domains.push(domain);
    }
    if set.domains.is_empty() {
        return Err(Error::InsufficientData(
            "no orbit witness returns to the interval".into(),
        ));
    }
    set.domains.sort_by(|a, b| {
        a.lo.inner
            .as_float()
            .partial_cmp(b.lo.inner.as_float())
            .unwrap_or(Ordering::Equal)
    });
    Ok(set)
}

fn tail_return(map: &MapSpec, j: &Interval, from: &Float, cap: u64) -> Result<Option<u64>> {
    match super::dynamics::first_entry(map, j, from, cap)? {
        super::EntryResult::Entered { time, .. } => Ok(Some(time)),
        super::EntryResult::NoEntry { .. } => Ok(None),
    }
}

/// Sides of `f^j(w)` for `0 <= j < r`; `None` where an iterate is exactly `c`.
fn itinerary(map: &MapSpec, w: &Float, r: u64) -> Result<Vec<Option<Side>>> {
    let mut out = Vec::with_capacity(r as usize);
    let mut x = w.clone();
    for i in 0..r {
        out.push(side(&x));
        if i + 1 < r {
            x = map.eval(&x)?;
        }
    }
    Ok(out)
}

/// Whether `y` follows `pattern` for `j` in `skip..r`, stays out of `J` for
/// `0 < j < r`, and lands strictly inside `J` at time `r`.
fn same_branch(
    map: &MapSpec,
    j: &Interval,
    y: &Float,
    pattern: &[Option<Side>],
    skip: usize,
    tol: &Float,
) -> Result<bool> {
    let mut x = y.clone();
    for (i, want) in pattern.iter().enumerate() {
        if i >= skip && side(&x) != *want {
            return Ok(false);
        }
        if i > 0 && j.classify(&x, tol) != Membership::Outside {
            return Ok(false);
        }
        x = map.eval(&x)?;
    }
    Ok(j.classify(&x, tol) == Membership::Inside)
}

/// Bisects between `inner` (predicate true) and `outer` (false) down to
/// width `2^{-p/2}`.
fn bisect_boundary<P>(inner: &Float, outer: &Float, prec: u32, mut pred: P) -> Result<Enclosure>
where
    P: FnMut(&Float) -> Result<bool>,
{
    let stop = tolerance(prec);
    let mut a = Float::with_val(prec, inner);
    let mut b = Float::with_val(prec, outer);
    loop {
        let gap = Float::with_val(prec, &b - &a);
        if gap.cmp_abs(&stop) != Some(Ordering::Greater) {
            break;
        }
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        if mid == a || mid == b {
            break;
        }
        if pred(&mid)? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Enclosure {
        inner: HpNum::new(a),
        outer: HpNum::new(b),
    })
}

fn central_domain(map: &MapSpec, j: &Interval, orbit: &Orbit, r: u64) -> Result<ReturnDomain> {
    let tol = map.tolerance();
    let mut pattern: Vec<Option<Side>> = vec![None];
    pattern.extend((1..r as usize).map(|n| side(orbit.get(n))));
    let edge = j.hi();
    if same_branch(map, j, edge, &pattern, 1, &tol)? {
        return Err(Error::Degenerate(
            "the central domain reaches the boundary of J".into(),
        ));
    }
    let hi = bisect_boundary(&map.critical_point(), edge, map.prec(), |y| {
        same_branch(map, j, y, &pattern, 1, &tol)
    })?;
    let mirror = |x: &HpNum| {
        let d = Float::with_val(map.prec() + 2, x.as_float() - 0.5);
        HpNum::new(point_at(&d, Side::Left))
    };
    let lo = Enclosure {
        inner: mirror(&hi.inner),
        outer: mirror(&hi.outer),
    };
    Ok(ReturnDomain {
        lo,
        hi,
        return_time: r,
        contains_critical: true,
        witness_orbit_indices: Vec::new(),
    })
}

fn lateral_domain(map: &MapSpec, j: &Interval, w: &Float, r: u64) -> Result<ReturnDomain> {
    let tol = map.tolerance();
    let pattern = itinerary(map, w, r)?;
    if pattern[0].is_none() {
        return Err(Error::Degenerate("witness coincides with c".into()));
    }
    let mut ends = Vec::with_capacity(2);
    for edge in [j.lo(), j.hi()] {
        if same_branch(map, j, edge, &pattern, 0, &tol)? {
            return Err(Error::Degenerate(
                "a return domain reaches the boundary of J".into(),
            ));
        }
        ends.push(bisect_boundary(w, edge, map.prec(), |y| {
            same_branch(map, j, y, &pattern, 0, &tol)
        })?);
    }
    let hi = ends.pop().expect("two ends");
    let lo = ends.pop().expect("two ends");
    Ok(ReturnDomain {
        lo,
        hi,
        return_time: r,
        contains_critical: false,
        witness_orbit_indices: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneading::frozen_fibonacci_parameter;
    use crate::numerics::{critical_orbit, reversing_fixed_point};

    #[test]
    fn first_level_has_two_domains_at_the_fibonacci_parameter() {
        let m = frozen_fibonacci_parameter(512).unwrap();
        let orbit = critical_orbit(&m, 2000).unwrap();
        let q = reversing_fixed_point(&m).unwrap();
        let j = Interval::symmetric(&Float::with_val(600, &q - 0.5));
        let set = return_domains(&m, &j, &orbit, DomainOptions::default()).unwrap();
        assert_eq!(set.domains.len(), 2);
        assert_eq!(set.central().unwrap().return_time, 3);
        assert_eq!(set.lateral().next().unwrap().return_time, 2);
        assert!(!set.truncated);
    }

    #[test]
    fn collapsed_orbit_leaves_only_c() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        let orbit = critical_orbit(&m, 50).unwrap();
        let j = Interval::symmetric(&Float::with_val(256, 0.25));
        let r = return_domains(
            &m,
            &j,
            &orbit,
            DomainOptions {
                cap: 100,
                max_domains: 8,
            },
        );
        assert!(matches!(r, Err(Error::InsufficientData(_))), "{r:?}");
    }
}
