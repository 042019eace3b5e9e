//! The symmetric unimodal family `f(x) = a (1 - |2x - 1|^ℓ)` on `[0, 1]`.

use std::cmp::Ordering;

use rug::ops::{Pow, PowAssign, SubFrom};
use rug::{Assign, Float};

use super::HpNum;
use crate::combinatorics::Side;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 512;
pub const MIN_PRECISION: u32 = 32;

#[derive(Clone, Debug)]
enum Exponent {
    Two,
    Int(u32),
    Real(Float),
}

/// A member of the family together with its working precision.
#[derive(Clone, Debug)]
pub struct MapSpec {
    a: Float,
    ell: f64,
    exponent: Exponent,
    prec: u32,
}

impl PartialEq for MapSpec {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.ell == other.ell && self.prec == other.prec
    }
}

impl MapSpec {
    /// `a` is rounded to `prec` bits.
    pub fn new(a: &Float, ell: f64, prec: u32) -> Result<Self> {
        if !(ell.is_finite() && ell >= 1.0) {
            return Err(Error::Domain(format!(
                "critical order must be >= 1, got {ell}"
            )));
        }
        if prec < MIN_PRECISION {
            return Err(Error::Domain(format!(
                "precision must be >= {MIN_PRECISION} bits"
            )));
        }
        let a = Float::with_val(prec, a);
        if !(a > 0.5 && a <= 1) {
            return Err(Error::Domain(format!(
                "parameter must lie in (1/2, 1], got {}",
                a.to_f64()
            )));
        }
        let exponent = if ell == 2.0 {
            Exponent::Two
        } else if ell.fract() == 0.0 && ell <= u32::MAX as f64 {
            Exponent::Int(ell as u32)
        } else {
            Exponent::Real(Float::with_val(64, ell))
        };
        Ok(MapSpec {
            a,
            ell,
            exponent,
            prec,
        })
    }

    pub fn from_f64(a: f64, ell: f64, prec: u32) -> Result<Self> {
        Self::new(&Float::with_val(64, a), ell, prec)
    }

    pub fn a(&self) -> &Float {
        &self.a
    }

    pub fn a_hp(&self) -> HpNum {
        HpNum::new(self.a.clone())
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The same map evaluated at another precision. `a` is carried over
    /// exactly when the new precision is at least the old one.
    pub fn with_prec(&self, prec: u32) -> Result<Self> {
        Self::new(&self.a, self.ell, prec)
    }

    /// `2^{-p/2}`: the separation below which two points are treated as
    /// numerically indistinguishable.
    pub fn tolerance(&self) -> Float {
        tolerance(self.prec)
    }

    pub fn critical_point(&self) -> Float {
        Float::with_val(self.prec, 0.5)
    }

    pub fn eval(&self, x: &Float) -> Result<Float> {
        check_unit(x)?;
        let mut out = Float::new(self.prec);
        self.stepper().step(self, x, &mut out);
        Ok(out)
    }

    /// `f^n(x)`; `n = 0` returns `x` unchanged.
    pub fn eval_n(&self, x: &Float, n: u64) -> Result<Float> {
        check_unit(x)?;
        if n == 0 {
            return Ok(x.clone());
        }
        let mut s = self.stepper();
        let mut cur = Float::with_val(self.prec, 0);
        s.step(self, x, &mut cur);
        let mut next = Float::new(self.prec);
        for _ in 1..n {
            s.step(self, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }

    /// Scratch space for allocation-free iteration.
    pub fn stepper(&self) -> Stepper {
        Stepper {
            t: Float::new(self.prec + 8),
        }
    }

    /// Distance from the critical point at which `f(x) = y`, or `None`
    /// when `y > a` has no preimage. The two preimages are `1/2 ± r`.
    pub fn preimage_radius(&self, y: &Float) -> Option<Float> {
        if *y > self.a {
            return None;
        }
        let mut r = Float::with_val(self.prec, y / &self.a);
        r.sub_from(1);
        match &self.exponent {
            Exponent::Two => r.sqrt_mut(),
            Exponent::Int(n) => r.root_mut(*n),
            Exponent::Real(e) => {
                let inv = Float::with_val(self.prec, e.recip_ref());
                r.pow_assign(&inv);
            }
        }
        r /= 2;
        Some(r)
    }
}

/// Reusable scratch for one step of the map.
pub struct Stepper {
    t: Float,
}

impl Stepper {
    /// `out = f(x)` rounded to the map's precision. `|2x - 1|` is formed
    /// exactly so that `f(x)` and `f(1 - x)` round identically.
    pub fn step(&mut self, map: &MapSpec, x: &Float, out: &mut Float) {
        let need = exact_offset_prec(x);
        if self.t.prec() < need {
            self.t.set_prec(need);
        }
        self.t.assign(x);
        self.t <<= 1;
        self.t -= 1;
        self.t.abs_mut();
        if out.prec() != map.prec {
            out.set_prec(map.prec);
        }
        match &map.exponent {
            Exponent::Two => out.assign(self.t.square_ref()),
            Exponent::Int(n) => out.assign((&self.t).pow(*n)),
            Exponent::Real(e) => out.assign((&self.t).pow(e)),
        }
        out.sub_from(1);
        *out *= &map.a;
    }
}

/// Bits needed to hold `2x - 1` (or `x - 1/2`, `1 - x`) exactly.
pub(crate) fn exact_offset_prec(x: &Float) -> u32 {
    match x.get_exp() {
        Some(e) => {
            let e = e.min(1);
            (x.prec() as i64 - e as i64 + 3).clamp(MIN_PRECISION as i64, u32::MAX as i64 / 2) as u32
        }
        None => x.prec().max(MIN_PRECISION),
    }
}

pub fn tolerance(prec: u32) -> Float {
    let mut t = Float::with_val(prec, 1);
    t >>= (prec / 2) as i32;
    t
}

fn check_unit(x: &Float) -> Result<()> {
    if x.is_nan() || *x < 0 || *x > 1 {
        return Err(Error::Domain(format!(
            "point {} outside [0, 1]",
            x.to_f64()
        )));
    }
    Ok(())
}

/// `1 - x`, computed exactly (the result may carry a few more bits than `x`).
pub fn symmetric_point(x: &Float) -> Float {
    let mut r = Float::with_val(exact_offset_prec(x), x);
    r.sub_from(1);
    r
}

/// `|x - 1/2|`, exact.
pub fn distance_to_c(x: &Float) -> Float {
    let mut r = Float::with_val(exact_offset_prec(x), x);
    r -= 0.5;
    r.abs_mut();
    r
}

/// Side of the critical point, `None` when `x` is exactly `1/2`.
pub fn side(x: &Float) -> Option<Side> {
    match x.partial_cmp(&0.5)? {
        Ordering::Less => Some(Side::Left),
        Ordering::Greater => Some(Side::Right),
        Ordering::Equal => None,
    }
}

/// The point at distance `r` from `1/2` on the given side, exact.
pub fn point_at(r: &Float, side: Side) -> Float {
    let prec = exact_offset_prec(r).max(r.prec() + 2);
    let mut p = Float::with_val(prec, r);
    match side {
        Side::Right => p += 0.5,
        Side::Left => {
            p.sub_from(0.5);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: f64) -> Float {
        Float::with_val(64, v)
    }

    #[test]
    fn evaluates_closed_forms() {
        let full = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        assert_eq!(full.eval(&f(0.5)).unwrap(), 1);
        assert_eq!(full.eval(&f(0.0)).unwrap(), 0);
        assert_eq!(full.eval(&f(1.0)).unwrap(), 0);
        assert_eq!(full.eval(&f(0.25)).unwrap(), 0.75);
        let cubic = MapSpec::from_f64(0.8, 3.0, 128).unwrap();
        assert_eq!(cubic.eval(&f(0.0)).unwrap(), 0);
        let real = MapSpec::from_f64(0.8, 2.5, 128).unwrap();
        assert_eq!(real.eval(&f(0.5)).unwrap(), real.a().clone());
    }

    #[test]
    fn iterates() {
        let full = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        assert_eq!(full.eval_n(&f(0.3), 0).unwrap(), 0.3);
        assert_eq!(full.eval_n(&f(0.5), 2).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = MapSpec::from_f64(0.9, 2.0, 128).unwrap();
        assert!(m.eval(&f(1.5)).is_err());
        assert!(m.eval(&f(-0.1)).is_err());
        assert!(MapSpec::from_f64(0.5, 2.0, 128).is_err());
        assert!(MapSpec::from_f64(1.2, 2.0, 128).is_err());
        assert!(MapSpec::from_f64(0.9, 0.5, 128).is_err());
        assert!(MapSpec::from_f64(0.9, 2.0, 8).is_err());
    }

    #[test]
    fn mirror_and_distance_are_exact() {
        let x = Float::with_val(64, 0.3);
        let m = symmetric_point(&x);
        let back = symmetric_point(&m);
        assert_eq!(back, x);
        assert_eq!(distance_to_c(&x), distance_to_c(&m));
        assert_eq!(symmetric_point(&f(0.5)), 0.5);
        assert_eq!(symmetric_point(&f(0.0)), 1);
        let tiny = Float::with_val(64, Float::i_exp(1, -300));
        assert_eq!(symmetric_point(&symmetric_point(&tiny)), tiny);
    }

    #[test]
    fn preimage_radius_inverts_the_map() {
        let m = MapSpec::from_f64(0.9, 2.0, 256).unwrap();
        let y = Float::with_val(256, 0.4);
        let r = m.preimage_radius(&y).unwrap();
        for s in [Side::Left, Side::Right] {
            let x = point_at(&r, s);
            let fx = m.eval(&x).unwrap();
            let err = Float::with_val(256, &fx - &y).abs();
            assert!(err < Float::with_val(256, Float::i_exp(1, -240)));
        }
        assert!(m.preimage_radius(&Float::with_val(64, 0.95)).is_none());
        let cubic = MapSpec::from_f64(0.9, 3.0, 256).unwrap();
        let r = cubic.preimage_radius(&y).unwrap();
        let fx = cubic.eval(&point_at(&r, Side::Right)).unwrap();
        assert!(Float::with_val(256, &fx - &y).abs() < Float::with_val(64, 1e-60));
    }
}
