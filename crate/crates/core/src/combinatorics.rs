//! Fibonacci numbers, Fibonacci-sum (Zeckendorf) decompositions and the
//! combinatorial order of the critical orbit of a Fibonacci map.
//!
//! Numbering follows the cutting-time convention `S_0 = 1, S_1 = 2,
//! S_{k+1} = S_k + S_{k-1}`, so every positive integer `m` has a unique
//! decomposition `m = S_{k_1} + S_{k_2} + ...` with `k_{i+1} >= k_i + 2`.
//!
//! For the Fibonacci map the position of `c_m = f^m(c)` relative to the
//! critical point is a function of that decomposition alone: the first
//! index fixes the side, and a lexicographic comparison with alternating
//! orientation fixes the distance order.

use std::cmp::Ordering;
use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `S_0, ..., S_{count-1}`.
pub fn fib_numbers(count: usize) -> Vec<Integer> {
    let mut out: Vec<Integer> = Vec::with_capacity(count);
    for k in 0..count {
        let next = match k {
            0 => Integer::from(1),
            1 => Integer::from(2),
            _ => Integer::from(&out[k - 1] + &out[k - 2]),
        };
        out.push(next);
    }
    out
}

/// `S_k` as a machine integer, or `None` once it no longer fits.
pub fn fib_u64(k: usize) -> Option<u64> {
    let (mut a, mut b) = (1u64, 2u64);
    for _ in 0..k {
        let next = a.checked_add(b)?;
        a = b;
        b = next;
    }
    Some(a)
}

/// Fibonacci cutting times `S_0..` that do not exceed `limit`.
pub fn fib_up_to(limit: u64) -> Vec<u64> {
    (0..)
        .map_while(fib_u64)
        .take_while(|&s| s <= limit)
        .collect()
}

/// Side of the critical point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A gap-≥2 Fibonacci sum, stored as its strictly increasing index list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibSum {
    indices: Vec<usize>,
}

impl FibSum {
    /// Validates the gap condition. The empty sum is rejected: it would
    /// stand for `m = 0`, i.e. the critical point itself.
    pub fn from_indices(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain(
                "a Fibonacci sum needs at least one summand".into(),
            ));
        }
        if let Some(w) = indices.windows(2).find(|w| w[1] < w[0] + 2) {
            return Err(Error::Domain(format!(
                "indices {} and {} violate the gap condition",
                w[0], w[1]
            )));
        }
        Ok(FibSum { indices })
    }

    /// Decomposition of a machine-sized positive integer.
    pub fn of(m: u64) -> Result<Self> {
        zeckendorf(&Integer::from(m))
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn leading(&self) -> usize {
        self.indices[0]
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn value(&self) -> Integer {
        let top = *self.indices.last().expect("nonempty by construction");
        let fibs = fib_numbers(top + 1);
        self.indices
            .iter()
            .fold(Integer::new(), |acc, &k| acc + &fibs[k])
    }
}

impl fmt::Display for FibSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|k| format!("S{k}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Greedy decomposition: repeatedly subtract the largest `S_k` that fits.
pub fn zeckendorf(m: &Integer) -> Result<FibSum> {
    if *m <= 0 {
        return Err(Error::Domain(format!("zeckendorf needs m >= 1, got {m}")));
    }
    let mut fibs = fib_numbers(2);
    while fibs.last().expect("nonempty") <= m {
        let k = fibs.len();
        let next = Integer::from(&fibs[k - 1] + &fibs[k - 2]);
        fibs.push(next);
    }
    let mut rest = m.clone();
    let mut indices = Vec::new();
    for k in (0..fibs.len()).rev() {
        if fibs[k] <= rest {
            rest -= &fibs[k];
            indices.push(k);
            if rest == 0 {
                break;
            }
        }
    }
    indices.reverse();
    FibSum::from_indices(indices)
}

/// Side of `c_m` for the Fibonacci map: `Left` iff `k_1 mod 4 ∈ {1, 2}`.
pub fn side_of(s: &FibSum) -> Side {
    match s.leading() % 4 {
        1 | 2 => Side::Left,
        _ => Side::Right,
    }
}

/// Orders `|c_m - c|` against `|c_n - c|` for the Fibonacci map.
///
/// The expansions are compared lexicographically. At the first position
/// `t` where they differ, `t` summands are shared; when `t` is odd a larger
/// next index means a larger distance, when `t` is even (including the
/// no-shared-prefix case) a larger next index means a smaller distance. An
/// expansion that ends at `t` is the prefix sum itself, which sits at the
/// far end of the chain in both cases, so it behaves like an infinite index.
///
/// The one exception is a pair led by `S_0` and `S_1`. Those two clusters
/// interleave in distance (e.g. `|c_4| < |c_2| < |c_6|`), so the pair is
/// decided through their images instead: `f` is strictly decreasing in the
/// distance to `c`, hence `|c_m| < |c_n|` iff `c_{m+1} > c_{n+1}`, and both
/// successors are led by an index of at least 2.
pub fn compare_abs(m: &FibSum, n: &FibSum) -> Ordering {
    let (a, b) = (m.indices(), n.indices());
    if a[0] != b[0] && a[0] + b[0] == 1 {
        let succ = |s: &FibSum| zeckendorf(&(s.value() + 1u32)).expect("successor is positive");
        return spatial_compare(&succ(m), &succ(n)).reverse();
    }
    let t = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let next = |s: &[usize]| s.get(t).copied().unwrap_or(usize::MAX);
    let (ja, jb) = (next(a), next(b));
    if ja == jb {
        return Ordering::Equal;
    }
    if t % 2 == 1 {
        ja.cmp(&jb)
    } else {
        jb.cmp(&ja)
    }
}

/// Orders `c_m` against `c_n` on the line.
pub fn spatial_compare(m: &FibSum, n: &FibSum) -> Ordering {
    match (side_of(m), side_of(n)) {
        (Side::Left, Side::Right) => Ordering::Less,
        (Side::Right, Side::Left) => Ordering::Greater,
        (Side::Left, Side::Left) => compare_abs(m, n).reverse(),
        (Side::Right, Side::Right) => compare_abs(m, n),
    }
}

/// The pair of relations the combinatorial order predicts for `(c_m, c_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitOrderDecision {
    pub m: u64,
    pub n: u64,
    pub distance: Ordering,
    pub position: Ordering,
}

pub fn decide(m: u64, n: u64) -> Result<OrbitOrderDecision> {
    let (sm, sn) = (FibSum::of(m)?, FibSum::of(n)?);
    Ok(OrbitOrderDecision {
        m,
        n,
        distance: compare_abs(&sm, &sn),
        position: spatial_compare(&sm, &sn),
    })
}

/// Indices `1..=count` sorted left to right by the combinatorial order.
pub fn orbit_order(count: u64) -> Result<Vec<u64>> {
    let mut keyed = (1..=count)
        .map(|m| FibSum::of(m).map(|s| (m, s)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|(_, a), (_, b)| spatial_compare(a, b));
    Ok(keyed.into_iter().map(|(m, _)| m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(ix: &[usize]) -> FibSum {
        FibSum::from_indices(ix.to_vec()).unwrap()
    }

    #[test]
    fn fib_prefixes() {
        assert_eq!(fib_numbers(3), [1, 2, 3]);
        assert_eq!(fib_numbers(1), [1]);
        assert_eq!(fib_numbers(13).last().unwrap(), &377);
        assert_eq!(fib_u64(12), Some(377));
        assert_eq!(
            fib_up_to(500),
            [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377]
        );
        assert!(fib_u64(200).is_none());
    }

    #[test]
    fn fib_13th_by_independent_summation() {
        // S_k = 2 + sum_{j <= k-2} S_j for k >= 2.
        let f = fib_numbers(13);
        let partial: Integer = f[..11].iter().sum();
        assert_eq!(f[12], Integer::from(2) + partial);
    }

    #[test]
    fn zeckendorf_examples() {
        assert_eq!(FibSum::of(1).unwrap().indices(), [0]);
        assert_eq!(FibSum::of(2).unwrap().indices(), [1]);
        assert_eq!(FibSum::of(4).unwrap().indices(), [0, 2]);
        assert_eq!(FibSum::of(12).unwrap().indices(), [0, 2, 4]);
        assert!(zeckendorf(&Integer::from(0)).is_err());
        assert!(zeckendorf(&Integer::from(-3)).is_err());
    }

    #[test]
    fn zeckendorf_handles_wide_integers() {
        let m = Integer::from(Integer::u_pow_u(10, 60));
        let s = zeckendorf(&m).unwrap();
        assert_eq!(s.value(), m);
    }

    #[test]
    fn gap_condition_is_enforced() {
        assert!(FibSum::from_indices(vec![0, 1]).is_err());
        assert!(FibSum::from_indices(vec![]).is_err());
        assert!(FibSum::from_indices(vec![3, 5]).is_ok());
    }

    #[test]
    fn sides_from_the_displayed_chain() {
        assert_eq!(side_of(&fs(&[1])), Side::Left);
        assert_eq!(side_of(&fs(&[0])), Side::Right);
        assert_eq!(side_of(&fs(&[3, 5])), Side::Right);
        assert_eq!(side_of(&fs(&[2])), Side::Left);
        assert_eq!(side_of(&fs(&[4])), Side::Right);
        assert_eq!(side_of(&fs(&[5])), Side::Left);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(compare_abs(&fs(&[1]), &fs(&[2])), Ordering::Greater);
        assert_eq!(compare_abs(&fs(&[1, 3]), &fs(&[1, 3])), Ordering::Equal);
        // c_7 = S_1+S_3 against c_10 = S_1+S_4: one shared summand.
        assert_eq!(compare_abs(&fs(&[1, 3]), &fs(&[1, 4])), Ordering::Less);
        // c_1 is the prefix of c_4 = S_0+S_2.
        assert_eq!(compare_abs(&fs(&[0]), &fs(&[0, 2])), Ordering::Greater);
        // Two shared summands: the prefix is the closest point.
        assert_eq!(compare_abs(&fs(&[0, 2]), &fs(&[0, 2, 4])), Ordering::Less);
        // S_0- and S_1-led clusters interleave: |c_4| < |c_2| < |c_6|.
        assert_eq!(compare_abs(&fs(&[0, 2]), &fs(&[1])), Ordering::Less);
        assert_eq!(compare_abs(&fs(&[1]), &fs(&[0, 3])), Ordering::Less);
        assert_eq!(compare_abs(&fs(&[0]), &fs(&[1])), Ordering::Greater);
    }

    #[test]
    fn position_examples() {
        let c = |m| FibSum::of(m).unwrap();
        assert_eq!(spatial_compare(&c(2), &c(1)), Ordering::Less);
        assert_eq!(spatial_compare(&c(2), &c(3)), Ordering::Less);
        assert_eq!(spatial_compare(&c(4), &c(1)), Ordering::Less);
    }

    #[test]
    fn decision_bundles_both_relations() {
        let d = decide(4, 1).unwrap();
        assert_eq!(d.distance, Ordering::Less);
        assert_eq!(d.position, Ordering::Less);
    }

    #[test]
    fn orbit_order_starts_with_c2_and_ends_with_c1() {
        let order = orbit_order(20).unwrap();
        assert_eq!(order.first(), Some(&2));
        assert_eq!(order.last(), Some(&1));
    }
}
