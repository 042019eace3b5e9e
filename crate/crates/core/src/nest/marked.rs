//! Nearest preimages of `c` along cutting times and the marked points
//! `d_n, y_n, z_n, u_n` of a Fibonacci map.

use rug::Float;
use serde::{Deserialize, Serialize};

use super::interval::{Interval, IntervalReport};
use crate::combinatorics::{fib_u64, Side};
use crate::error::{Error, Result};
use crate::kneading::cutting_times_from_orbit;
use crate::numerics::{
    critical_orbit, distance_to_c, monotone_solve, point_at, reversing_fixed_point, side,
    symmetric_point, HpNum, MapSpec, Orbit,
};

/// Distances `|c_{-S_i}|` of the nearest preimages of `c` of order `S_i`,
/// for the given cutting times.
///
/// `f^{S_i}` is monotone on `[c, c + |c_{-S_{i-1}}|]` because no preimage of
/// order below `S_i` is closer; its endpoint images `c_{S_i}` and
/// `c_{S_i - S_{i-1}}` straddle `c`, so each radius is a bracketed solve.
pub fn nearest_preimage_radii(map: &MapSpec, times: &[u64]) -> Result<Vec<Float>> {
    let half = map.critical_point();
    let mut out: Vec<Float> = Vec::with_capacity(times.len());
    for (i, &s) in times.iter().enumerate() {
        let r = if i == 0 {
            if s != 1 {
                return Err(Error::Domain("cutting times must start with 1".into()));
            }
            map.preimage_radius(&half)
                .ok_or_else(|| Error::Domain("c has no preimage".into()))?
        } else {
            let outer = point_at(&out[i - 1], Side::Right);
            let sol = monotone_solve(map, s, &half, &half, &outer)?;
            distance_to_c(&sol.x)
        };
        out.push(r);
    }
    Ok(out)
}

/// Marked points of one level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkedPoints {
    pub n: usize,
    /// `d_n = f^{S_n}(c)`.
    pub d: HpNum,
    /// `y_n = f^{S_n + S_{n+2}}(c)`.
    pub y: HpNum,
    /// `|z_n|`, the distance of the nearest pair in `f^{-S_n}(c)`.
    pub z_radius: HpNum,
    pub z_pair: (HpNum, HpNum),
    /// `u_n`, on the same side as `d_n`.
    pub u: HpNum,
    pub u_radius: HpNum,
    /// `U^n = (u_n, û_n)`.
    pub big_u: IntervalReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkedPointTable {
    pub q: HpNum,
    /// `|z_0|`.
    pub z0_radius: HpNum,
    pub levels: Vec<MarkedPoints>,
}

impl MarkedPointTable {
    pub fn level(&self, n: usize) -> &MarkedPoints {
        &self.levels[n - 1]
    }
}

/// Fibonacci numbers `S_0..=S_k`.
pub(crate) fn fib_times(k: usize) -> Result<Vec<u64>> {
    (0..=k)
        .map(|i| fib_u64(i).ok_or_else(|| Error::Budget(format!("S_{i} overflows"))))
        .collect()
}

/// Checks that the map's cutting times agree with the Fibonacci numbers
/// through `S_k` (and that no extra cutting time precedes `S_k`).
pub(crate) fn require_fibonacci(orbit: &Orbit, k: usize) -> Result<()> {
    let s = fib_times(k)?;
    let horizon = s[k];
    if orbit.len() < horizon as usize {
        return Err(Error::InsufficientData(format!(
            "orbit shorter than S_{k} = {horizon}"
        )));
    }
    let seq = cutting_times_from_orbit(orbit, horizon)?;
    if seq.fibonacci_prefix_len() <= k {
        return Err(Error::NotFibonacci(format!(
            "cutting times {:?} differ from the Fibonacci numbers before S_{k}",
            seq.times
        )));
    }
    Ok(())
}

/// Marked points for levels `1..=up_to`. The map must be Fibonacci through
/// `S_{up_to + 2}`.
pub fn marked_points(map: &MapSpec, up_to: usize) -> Result<MarkedPointTable> {
    if up_to == 0 {
        return Err(Error::Domain("at least one level is required".into()));
    }
    let s = fib_times(up_to + 2)?;
    let orbit = critical_orbit(map, (s[up_to] + s[up_to + 2]) as usize)?;
    require_fibonacci(&orbit, up_to + 2)?;
    let z = nearest_preimage_radii(map, &s[..=up_to])?;
    let q = reversing_fixed_point(map)?;
    let half = map.critical_point();

    let mut levels = Vec::with_capacity(up_to);
    let mut u = symmetric_point(&q);
    for n in 1..=up_to {
        if n > 1 {
            // u_n pulls u_{n-1} back by f^{S_{n-1}} on (û_{n-1}, c) mirrored
            // to the right; then it is placed on the side of d_n.
            let r_prev = distance_to_c(&u);
            let outer = point_at(&r_prev, Side::Right);
            let sol = monotone_solve(map, s[n - 1], &u, &half, &outer)?;
            let r = distance_to_c(&sol.x);
            let dn_side = side(orbit.get(s[n] as usize))
                .ok_or_else(|| Error::Degenerate(format!("d_{n} equals c")))?;
            u = point_at(&r, dn_side);
        }
        let d = orbit.c(s[n] as usize);
        let y = orbit.c((s[n] + s[n + 2]) as usize);
        let zr = z[n].clone();
        let ur = distance_to_c(&u);
        levels.push(MarkedPoints {
            n,
            d: HpNum::new(d),
            y: HpNum::new(y),
            z_pair: (
                HpNum::new(point_at(&zr, Side::Left)),
                HpNum::new(point_at(&zr, Side::Right)),
            ),
            z_radius: HpNum::new(zr),
            u: HpNum::new(u.clone()),
            big_u: Interval::symmetric(&ur).to_report(),
            u_radius: HpNum::new(ur),
        });
    }
    Ok(MarkedPointTable {
        q: HpNum::new(q),
        z0_radius: HpNum::new(z[0].clone()),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_map_preimage_radius() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        let r = nearest_preimage_radii(&m, &[1]).unwrap();
        // 4x(1-x) = 1/2 at x = (2 + sqrt 2) / 4, so r = sqrt 2 / 4.
        let expected = Float::with_val(256, 2).sqrt() / 4u32;
        assert!(Float::with_val(256, &r[0] - &expected).abs() < Float::with_val(64, 1e-70));
    }

    #[test]
    fn non_fibonacci_map_is_refused() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        assert!(matches!(marked_points(&m, 2), Err(Error::NotFibonacci(_))));
    }
}
