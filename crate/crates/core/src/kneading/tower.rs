//! Cutting times from the tower recursion on interval endpoints.
//!
//! `D_1 = [0, c_1]` is the image of the right half of `[0, 1]`. For
//! `n >= 2`, `D_n` is the hull of `c_n` and `c_{b(n)}` for a back-pointer
//! `b(n) < n`. When `c` lies strictly inside `D_n`, `n` is a cutting time
//! and the piece between `c_n` and `c` restarts the tower, so `b(n+1) = 1`;
//! otherwise `D_{n+1} = f(D_n)` and `b(n+1) = b(n) + 1`.

use std::cmp::Ordering;

use rug::Float;

use super::CuttingSequence;
use crate::error::{Error, Result};
use crate::numerics::{critical_orbit, MapSpec, Orbit};

/// All cutting times `<= horizon`.
pub fn cutting_times(map: &MapSpec, horizon: u64) -> Result<CuttingSequence> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    let orbit = critical_orbit(map, horizon as usize)?;
    cutting_times_from_orbit(&orbit, horizon)
}

/// Tower recursion over an already validated orbit of length `>= horizon`.
pub fn cutting_times_from_orbit(orbit: &Orbit, horizon: u64) -> Result<CuttingSequence> {
    if horizon == 0 || orbit.len() < horizon as usize {
        return Err(Error::Domain(format!(
            "orbit of length {} cannot cover horizon {horizon}",
            orbit.len()
        )));
    }
    let tol = orbit.map().tolerance();
    let mut times = vec![1u64];
    // b(2) = 1: D_1 always contains c because c_1 = a > 1/2.
    let mut back = 1usize;
    for n in 2..=horizon as usize {
        let here = sign_about_c(orbit.get(n), &tol, n)?;
        let there = sign_about_c(orbit.get(back), &tol, back)?;
        if here != there {
            times.push(n as u64);
            back = 1;
        } else {
            back += 1;
        }
    }
    Ok(CuttingSequence {
        times,
        computed_up_to: horizon,
    })
}

fn sign_about_c(x: &Float, tol: &Float, n: usize) -> Result<Ordering> {
    let d = Float::with_val(x.prec() + 2, x - 0.5);
    if d.cmp_abs(tol) != Some(Ordering::Greater) {
        return Err(Error::Degenerate(format!(
            "c_{n} is within tolerance of the critical point"
        )));
    }
    Ok(if d.is_sign_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    })
}
