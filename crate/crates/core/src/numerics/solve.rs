//! Bracketed bisection on monotone branches.

use std::cmp::Ordering;

use rug::Float;

use super::{HpNum, MapSpec};
use crate::error::{Error, Result};

/// Outcome of a bracketed solve: the returned point plus the final
/// bracket and its images, so callers can bound the residual.
#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Float,
    pub lo: Float,
    pub hi: Float,
    pub image_lo: Float,
    pub image_hi: Float,
    pub iterations: u32,
}

impl Solution {
    pub fn x_hp(&self) -> HpNum {
        HpNum::new(self.x.clone())
    }

    fn exact(x: Float, image: Float) -> Self {
        Solution {
            lo: x.clone(),
            hi: x.clone(),
            image_lo: image.clone(),
            image_hi: image,
            x,
            iterations: 0,
        }
    }
}

/// Solves `image(x) = target` for `x` between `a` and `b`, assuming
/// `image` is monotone there. Every midpoint image must stay between the
/// current bracket images; anything else is reported as a monotonicity
/// violation.
pub fn bisect<F>(a: &Float, b: &Float, target: &Float, prec: u32, mut image: F) -> Result<Solution>
where
    F: FnMut(&Float) -> Result<Float>,
{
    let (mut lo, mut hi) = if a <= b {
        (Float::with_val(prec, a), Float::with_val(prec, b))
    } else {
        (Float::with_val(prec, b), Float::with_val(prec, a))
    };
    let mut f_lo = image(&lo)?;
    let mut f_hi = image(&hi)?;
    let s_lo = cmp(&f_lo, target)?;
    let s_hi = cmp(&f_hi, target)?;
    if s_lo == Ordering::Equal {
        return Ok(Solution::exact(lo, f_lo));
    }
    if s_hi == Ordering::Equal {
        return Ok(Solution::exact(hi, f_hi));
    }
    if s_lo == s_hi {
        return Err(Error::Bracketing(format!(
            "images {:.6e} and {:.6e} do not enclose {:.6e}",
            f_lo.to_f64(),
            f_hi.to_f64(),
            target.to_f64()
        )));
    }
    let max_iter = prec + 16;
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = image(&mid)?;
        let (low_img, high_img) = if f_lo <= f_hi {
            (&f_lo, &f_hi)
        } else {
            (&f_hi, &f_lo)
        };
        if f_mid < *low_img || f_mid > *high_img {
            return Err(Error::Monotonicity(format!(
                "image {:.6e} at {:.6e} escapes [{:.6e}, {:.6e}]",
                f_mid.to_f64(),
                mid.to_f64(),
                low_img.to_f64(),
                high_img.to_f64()
            )));
        }
        match cmp(&f_mid, target)? {
            Ordering::Equal => {
                return Ok(Solution {
                    iterations,
                    ..Solution::exact(mid, f_mid)
                })
            }
            s if s == s_lo => {
                lo = mid;
                f_lo = f_mid;
            }
            _ => {
                hi = mid;
                f_hi = f_mid;
            }
        }
    }
    let x = Float::with_val(prec, &lo + &hi) / 2u32;
    Ok(Solution {
        x,
        lo,
        hi,
        image_lo: f_lo,
        image_hi: f_hi,
        iterations,
    })
}

fn cmp(x: &Float, target: &Float) -> Result<Ordering> {
    x.partial_cmp(target)
        .ok_or_else(|| Error::Domain("NaN during bisection".into()))
}

/// Solves `f^n(x) = target` on a bracket where `f^n` is monotone.
pub fn monotone_solve(
    map: &MapSpec,
    n: u64,
    target: &Float,
    a: &Float,
    b: &Float,
) -> Result<Solution> {
    if n == 0 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if target < lo || target > hi {
            return Err(Error::Bracketing(
                "identity target outside the bracket".into(),
            ));
        }
        return Ok(Solution::exact(target.clone(), target.clone()));
    }
    bisect(a, b, target, map.prec(), |x| map.eval_n(x, n))
}

/// The fixed point `q > 1/2`, where the map reverses orientation.
pub fn reversing_fixed_point(map: &MapSpec) -> Result<Float> {
    if *map.a() <= 0.5 {
        return Err(Error::Domain(
            "no reversing fixed point for a <= 1/2".into(),
        ));
    }
    let prec = map.prec();
    let half = Float::with_val(prec, 0.5);
    let one = Float::with_val(prec, 1);
    let zero = Float::new(prec);
    // f(x) - x is strictly decreasing on [1/2, 1], from a - 1/2 > 0 to -1.
    let sol = bisect(&half, &one, &zero, prec, |x| {
        let fx = map.eval(x)?;
        Ok(Float::with_val(prec, &fx - x))
    })?;
    Ok(sol.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::map::symmetric_point;
    use proptest::prelude::*;

    fn ff(v: f64, prec: u32) -> Float {
        Float::with_val(prec, v)
    }

    #[test]
    fn solves_the_right_branch_of_the_full_map() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        let s = monotone_solve(&m, 1, &ff(0.5, 256), &ff(0.5, 256), &ff(1.0, 256)).unwrap();
        // (2 + sqrt 2) / 4
        let expected = (Float::with_val(256, 2).sqrt() + 2u32) / 4u32;
        let err = Float::with_val(256, &s.x - &expected).abs();
        assert!(
            err < Float::with_val(256, Float::i_exp(1, -250)),
            "err {}",
            err.to_f64()
        );
    }

    #[test]
    fn identity_returns_the_target() {
        let m = MapSpec::from_f64(0.9, 2.0, 128).unwrap();
        let s = monotone_solve(&m, 0, &ff(0.3, 128), &ff(0.2, 128), &ff(0.4, 128)).unwrap();
        assert_eq!(s.x, 0.3);
        assert!(monotone_solve(&m, 0, &ff(0.5, 128), &ff(0.2, 128), &ff(0.4, 128)).is_err());
    }

    #[test]
    fn unenclosed_target_is_a_bracketing_error() {
        let m = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        let r = monotone_solve(&m, 1, &ff(0.5, 128), &ff(0.6, 128), &ff(0.7, 128));
        assert!(matches!(r, Err(Error::Bracketing(_))));
    }

    #[test]
    fn fold_inside_the_bracket_is_detected() {
        // f^2 of the full map folds at 1/2 and at the two preimages of 1/2;
        // across [0.05, 0.95] the images leave the endpoint range.
        let m = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        let r = monotone_solve(&m, 1, &ff(0.2, 128), &ff(0.1, 128), &ff(0.95, 128));
        assert!(
            matches!(r, Err(Error::Monotonicity(_)) | Err(Error::Bracketing(_))),
            "{r:?}"
        );
        let r = monotone_solve(&m, 1, &ff(0.5, 128), &ff(0.2, 128), &ff(0.95, 128));
        assert!(matches!(r, Err(Error::Monotonicity(_))), "{r:?}");
    }

    #[test]
    fn fixed_points_in_closed_form() {
        let full = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        assert_eq!(reversing_fixed_point(&full).unwrap(), 0.75);
        let m = MapSpec::from_f64(0.75, 2.0, 256).unwrap();
        let q = reversing_fixed_point(&m).unwrap();
        let expected = Float::with_val(256, 2) / 3u32;
        assert!(
            Float::with_val(256, &q - &expected).abs()
                < Float::with_val(256, Float::i_exp(1, -250))
        );
    }

    #[test]
    fn fixed_point_residual_meets_tolerance() {
        for a in [0.6, 0.8, 0.93, 0.978] {
            for ell in [1.0, 2.0, 3.5] {
                let m = MapSpec::from_f64(a, ell, 512).unwrap();
                let q = reversing_fixed_point(&m).unwrap();
                assert!(q > 0.5);
                let res = Float::with_val(512, m.eval(&q).unwrap() - &q).abs();
                assert!(
                    res < Float::with_val(512, Float::i_exp(1, 3 - 512)),
                    "a={a} ell={ell}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn solution_residual_is_bounded_by_final_bracket(y in 0.05f64..0.95, a in 0.6f64..1.0) {
            let m = MapSpec::from_f64(a, 2.0, 256).unwrap();
            let target = ff(y * a, 256);
            let s = monotone_solve(&m, 1, &target, &ff(0.5, 256), &ff(1.0, 256)).unwrap();
            let fx = m.eval(&s.x).unwrap();
            let res = Float::with_val(256, &fx - &target).abs();
            let spread = Float::with_val(256, &s.image_hi - &s.image_lo).abs();
            let slack = Float::with_val(256, Float::i_exp(1, -250));
            prop_assert!(res <= spread + slack);
        }

        #[test]
        fn map_is_exactly_symmetric(x in 0.0f64..=1.0, a in 0.51f64..=1.0, ell in 1.0f64..4.0) {
            let m = MapSpec::from_f64(a, ell, 300).unwrap();
            let x = ff(x, 300);
            prop_assert_eq!(m.eval(&x).unwrap(), m.eval(&symmetric_point(&x)).unwrap());
        }
    }
}
