//! The literal nearest-preimage definition of cutting times, by full
//! enumeration of `f^{-j}(c)`. Exponential in the depth; used as an oracle.
//!
//! Since the map is symmetric about `c`, every preimage set is symmetric
//! and is stored as the set of distances `r` to `c`; each `r > 0` stands
//! for the pair `c ± r`.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::Float;

use super::CuttingSequence;
use crate::combinatorics::Side;
use crate::error::{Error, Result};
use crate::numerics::{point_at, MapSpec};

/// Enumeration is refused beyond this depth.
pub const MAX_PREIMAGE_DEPTH: usize = 20;

/// `f^{-j}(c)` for `j = 1..=depth`, as sorted distance sets.
#[derive(Clone, Debug)]
pub struct PreimageFan {
    levels: Vec<Vec<Float>>,
}

impl PreimageFan {
    pub fn build(map: &MapSpec, depth: usize) -> Result<Self> {
        check_depth(depth)?;
        let mut levels = Vec::with_capacity(depth);
        let mut current = vec![Float::new(map.prec())];
        for _ in 0..depth {
            current = pull_back(map, &current);
            levels.push(current.clone());
        }
        Ok(PreimageFan { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Distances to `c` of the points of `f^{-j}(c)`, ascending.
    pub fn radii(&self, j: usize) -> &[Float] {
        &self.levels[j - 1]
    }

    /// Points of `f^{-j}(c)`, ascending.
    pub fn points(&self, j: usize) -> Vec<Float> {
        let r = self.radii(j);
        let mut out: Vec<Float> = r
            .iter()
            .rev()
            .filter(|x| !x.is_zero())
            .map(|x| point_at(x, Side::Left))
            .collect();
        out.extend(r.iter().map(|x| point_at(x, Side::Right)));
        out
    }

    /// The nearest pair `(c_{-j}, ĉ_{-j})` as its distance to `c`.
    pub fn nearest(&self, j: usize) -> Option<&Float> {
        self.levels.get(j - 1)?.first()
    }
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::Domain("preimage depth must be >= 1".into()));
    }
    if depth > MAX_PREIMAGE_DEPTH {
        return Err(Error::Budget(format!(
            "preimage enumeration to depth {depth} exceeds the limit {MAX_PREIMAGE_DEPTH}"
        )));
    }
    Ok(())
}

/// One level of pullback: the distances of `f^{-1}({c ± r})`.
fn pull_back(map: &MapSpec, radii: &[Float]) -> Vec<Float> {
    let children = |r: &Float| -> Vec<Float> {
        let sides: &[Side] = if r.is_zero() {
            &[Side::Right]
        } else {
            &[Side::Right, Side::Left]
        };
        sides
            .iter()
            .filter_map(|&s| map.preimage_radius(&point_at(r, s)))
            .collect()
    };
    let mut out: Vec<Float> = if radii.len() >= 1024 {
        radii.par_iter().flat_map_iter(children).collect()
    } else {
        radii.iter().flat_map(children).collect()
    };
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    out.dedup();
    out
}

/// Cutting times `<= max_depth` from the literal definition:
/// `S_0 = 1` and `S_i` is the least `k > S_{i-1}` whose nearest preimage
/// lies in the open interval spanned by the nearest pair at `S_{i-1}`.
pub fn preimage_cutting_times(map: &MapSpec, max_depth: usize) -> Result<CuttingSequence> {
    check_depth(max_depth)?;
    let tol = map.tolerance();
    let mut current = vec![Float::new(map.prec())];
    let mut times = Vec::new();
    let mut reference: Option<Float> = None;
    for k in 1..=max_depth {
        current = pull_back(map, &current);
        let Some(nearest) = current.first() else {
            break;
        };
        if let Some(second) = current.get(1) {
            if Float::with_val(map.prec(), second - nearest) < tol {
                return Err(Error::Invariant(format!(
                    "two distinct preimage pairs at depth {k} are nearest within tolerance"
                )));
            }
        }
        let cut = match &reference {
            None => true,
            Some(r) => {
                let gap = Float::with_val(map.prec(), nearest - r);
                if gap.cmp_abs(&tol) == Some(Ordering::Less) {
                    return Err(Error::Degenerate(format!(
                        "nearest preimage at depth {k} sits on the boundary of the reference interval"
                    )));
                }
                gap.is_sign_negative()
            }
        };
        if cut {
            times.push(k as u64);
            reference = Some(nearest.clone());
        }
    }
    Ok(CuttingSequence {
        times,
        computed_up_to: max_depth as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_is_the_first_cutting_time() {
        let m = MapSpec::from_f64(0.9, 2.0, 128).unwrap();
        assert_eq!(preimage_cutting_times(&m, 1).unwrap().times, [1]);
    }

    #[test]
    fn full_map_cuts_everywhere() {
        let m = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        assert_eq!(
            preimage_cutting_times(&m, 6).unwrap().times,
            [1, 2, 3, 4, 5, 6]
        );
    }

    #[test]
    fn depth_is_guarded() {
        let m = MapSpec::from_f64(1.0, 2.0, 128).unwrap();
        assert!(matches!(
            preimage_cutting_times(&m, 21),
            Err(Error::Budget(_))
        ));
        assert!(preimage_cutting_times(&m, 0).is_err());
    }

    #[test]
    fn fan_is_symmetric_and_maps_onto_c() {
        let m = MapSpec::from_f64(1.0, 2.0, 256).unwrap();
        let fan = PreimageFan::build(&m, 4).unwrap();
        // The full map is onto, so every level has exactly 2^j points.
        for j in 1..=4 {
            let pts = fan.points(j);
            assert_eq!(pts.len(), 1 << j);
            for x in &pts {
                let y = m.eval_n(x, j as u64).unwrap();
                assert!(Float::with_val(256, &y - 0.5).abs() < Float::with_val(64, 1e-60));
            }
        }
        assert!(fan.nearest(5).is_none());
    }
}
