use std::cmp::Ordering;

use rug::{Assign, Float};

use super::{HpNum, MapSpec};
use crate::error::{Error, Result};

/// `c_1, ..., c_N` for one map, validated against a double-precision rerun.
#[derive(Clone, Debug)]
pub struct Orbit {
    map: MapSpec,
    values: Vec<Float>,
    exhausted_at: Option<usize>,
}

impl Orbit {
    pub fn map(&self) -> &MapSpec {
        &self.map
    }

    /// Number of validated iterates.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First index whose value failed the precision-doubling check.
    pub fn exhausted_at(&self) -> Option<usize> {
        self.exhausted_at
    }

    /// `c_n` for `1 <= n <= len()`; `c_0` is the critical point.
    pub fn c(&self, n: usize) -> Float {
        if n == 0 {
            self.map.critical_point()
        } else {
            self.values[n - 1].clone()
        }
    }

    pub fn get(&self, n: usize) -> &Float {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn hp(&self, n: usize) -> HpNum {
        HpNum::new(self.c(n))
    }
}

/// Validated critical orbit of length `n`. Fails at the first iterate
/// whose `p`-bit value disagrees with the `2p`-bit value by more than
/// `2^{-p/2}`.
pub fn critical_orbit(map: &MapSpec, n: usize) -> Result<Orbit> {
    let orbit = critical_orbit_prefix(map, n)?;
    match orbit.exhausted_at {
        Some(index) => Err(Error::PrecisionExhausted {
            index,
            bits: map.prec(),
        }),
        None => Ok(orbit),
    }
}

/// Like [`critical_orbit`] but keeps the validated prefix instead of
/// failing; the first failing index is recorded on the orbit.
pub fn critical_orbit_prefix(map: &MapSpec, n: usize) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::Domain("orbit length must be >= 1".into()));
    }
    let wide = map.with_prec(map.prec() * 2)?;
    let tol = map.tolerance();
    let (mut s, mut sw) = (map.stepper(), wide.stepper());
    let mut x = map.critical_point();
    let mut xw = wide.critical_point();
    let mut next = Float::new(map.prec());
    let mut next_w = Float::new(wide.prec());
    let mut diff = Float::new(wide.prec());
    let mut values = Vec::with_capacity(n);
    let mut exhausted_at = None;
    for index in 1..=n {
        s.step(map, &x, &mut next);
        sw.step(&wide, &xw, &mut next_w);
        diff.assign(&next - &next_w);
        if diff.cmp_abs(&tol) == Some(Ordering::Greater) {
            exhausted_at = Some(index);
            break;
        }
        values.push(next.clone());
        std::mem::swap(&mut x, &mut next);
        std::mem::swap(&mut xw, &mut next_w);
    }
    Ok(Orbit {
        map: map.clone(),
        values,
        exhausted_at,
    })
}
