use std::cmp::Ordering;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::combinatorics::Side;
use crate::numerics::{point_at, HpNum};

/// An open interval `(lo, hi)` with exact endpoints. Intervals symmetric
/// about `c` also keep their radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
    radius: Option<Float>,
}

/// Where a point sits relative to an open interval, at a given tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Inside,
    Outside,
    /// Within tolerance of an endpoint: undecidable at this precision.
    Boundary,
}

impl Interval {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo < hi);
        Interval {
            lo,
            hi,
            radius: None,
        }
    }

    /// `(c - r, c + r)`.
    pub fn symmetric(r: &Float) -> Self {
        Interval {
            lo: point_at(r, Side::Left),
            hi: point_at(r, Side::Right),
            radius: Some(r.clone()),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn radius(&self) -> Option<&Float> {
        self.radius.as_ref()
    }

    pub fn endpoint(&self, side: Side) -> &Float {
        match side {
            Side::Left => &self.lo,
            Side::Right => &self.hi,
        }
    }

    pub fn width(&self) -> Float {
        Float::with_val(self.hi.prec().max(self.lo.prec()), &self.hi - &self.lo)
    }

    pub fn classify(&self, x: &Float, tol: &Float) -> Membership {
        let prec = x.prec().max(self.lo.prec()).max(self.hi.prec()) + 2;
        let above_lo = Float::with_val(prec, x - &self.lo);
        let below_hi = Float::with_val(prec, &self.hi - x);
        if above_lo > *tol && below_hi > *tol {
            Membership::Inside
        } else if above_lo < -tol.clone() || below_hi < -tol.clone() {
            Membership::Outside
        } else {
            Membership::Boundary
        }
    }

    /// Plain containment without a tolerance band.
    pub fn contains(&self, x: &Float) -> bool {
        *x > self.lo && *x < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.lo >= self.lo && other.hi <= self.hi && (other.lo > self.lo || other.hi < self.hi)
    }

    pub fn to_report(&self) -> IntervalReport {
        IntervalReport {
            lo: HpNum::new(self.lo.clone()),
            hi: HpNum::new(self.hi.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub lo: HpNum,
    pub hi: HpNum,
}

/// `|a| - |b|` sign with a margin: `Some(ordering)` when the magnitudes
/// differ by more than `margin`, `None` otherwise.
pub(crate) fn compare_with_margin(a: &Float, b: &Float, margin: &Float) -> Option<Ordering> {
    let prec = a.prec().max(b.prec()) + 2;
    let d = Float::with_val(prec, a - b);
    if d.cmp_abs(margin) != Some(Ordering::Greater) {
        None
    } else if d.is_sign_negative() {
        Some(Ordering::Less)
    } else {
        Some(Ordering::Greater)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tolerance;

    #[test]
    fn symmetric_interval_has_exact_mirrored_endpoints() {
        let r = Float::with_val(128, 0.125);
        let j = Interval::symmetric(&r);
        assert_eq!(*j.lo(), 0.375);
        assert_eq!(*j.hi(), 0.625);
        assert_eq!(j.width(), 0.25);
    }

    #[test]
    fn classification_respects_the_band() {
        let j = Interval::symmetric(&Float::with_val(128, 0.25));
        let tol = tolerance(128);
        assert_eq!(
            j.classify(&Float::with_val(128, 0.5), &tol),
            Membership::Inside
        );
        assert_eq!(
            j.classify(&Float::with_val(128, 0.9), &tol),
            Membership::Outside
        );
        assert_eq!(
            j.classify(&Float::with_val(128, 0.75), &tol),
            Membership::Boundary
        );
        let near = Float::with_val(128, 0.75) - Float::with_val(128, Float::i_exp(1, -100));
        assert_eq!(j.classify(&near, &tol), Membership::Boundary);
        let clear = Float::with_val(128, 0.75) - Float::with_val(128, Float::i_exp(1, -40));
        assert_eq!(j.classify(&clear, &tol), Membership::Inside);
    }

    #[test]
    fn nesting() {
        let big = Interval::symmetric(&Float::with_val(64, 0.25));
        let small = Interval::symmetric(&Float::with_val(64, 0.125));
        assert!(big.contains_interval(&small));
        assert!(!small.contains_interval(&big));
        assert!(!big.contains_interval(&big));
    }
}
