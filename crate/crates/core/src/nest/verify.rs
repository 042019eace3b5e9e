//! Finite-depth verifiers. Each check is a [`Clause`] carrying the depth
//! and tolerance it was evaluated at; a [`Report`] passes iff every clause
//! does. Structural failures (a missing bracket, an unexpected return
//! time) become failed clauses; precision and budget problems are errors.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::domains::{return_domains, DomainOptions, DomainSet};
use super::dynamics::{first_entry, is_nice};
use super::interval::{compare_with_margin, Interval, Membership};
use super::marked::{fib_times, marked_points, require_fibonacci, MarkedPointTable};
use super::principal::{check_level_budget, principal_nest, side_of_point, NestLevel};
use crate::combinatorics::{compare_abs, side_of, spatial_compare, FibSum};
use crate::error::{Error, Result};
use crate::kneading::{cutting_times_from_orbit, is_fibonacci};
use crate::numerics::{
    critical_orbit, critical_orbit_prefix, distance_to_c, side, tolerance, HpNum, MapSpec, Orbit,
};

/// Default length of the critical orbit used to witness return domains.
pub const DEFAULT_WITNESSES: usize = 10_000;
/// Endpoint agreement required between a central return domain and the
/// next nest level: `2^{-128}`.
pub const MATCH_BITS: i32 = 128;
/// Horizon for nice-interval checks of boundary orbits.
pub const NICE_HORIZON: u64 = 2_000;
/// Interior sample points per domain for return-time constancy.
pub const SAMPLES_PER_DOMAIN: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub level: Option<usize>,
    pub passed: bool,
    pub detail: String,
    /// Iterate or index horizon the clause was evaluated to.
    pub depth: u64,
    pub tolerance: HpNum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub parameter: HpNum,
    pub ell: f64,
    pub precision: u32,
    pub passed: bool,
    pub clauses: Vec<Clause>,
}

impl Report {
    fn new(suite: &str, map: &MapSpec, clauses: Vec<Clause>) -> Self {
        Report {
            suite: suite.into(),
            parameter: map.a_hp(),
            ell: map.ell(),
            precision: map.prec(),
            passed: clauses.iter().all(|c| c.passed),
            clauses,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }
}

/// Separation required between quantities compared by the verifiers:
/// `2^{-256}`, or the working tolerance if that is coarser.
pub fn margin(prec: u32) -> Float {
    let pinned = Float::with_val(prec.max(300), Float::i_exp(1, -256));
    let tol = tolerance(prec);
    if tol > pinned {
        tol
    } else {
        pinned
    }
}

fn match_tolerance(prec: u32) -> Float {
    Float::with_val(prec.max(300), Float::i_exp(1, -MATCH_BITS))
}

fn clause(
    name: &str,
    level: Option<usize>,
    passed: bool,
    detail: String,
    depth: u64,
    tol: &Float,
) -> Clause {
    Clause {
        name: name.into(),
        level,
        passed,
        detail,
        depth,
        tolerance: HpNum::new(tol.clone()),
    }
}

/// Errors that say the expected structure is absent, as opposed to the
/// computation being unable to decide.
fn structural(e: &Error) -> bool {
    matches!(
        e,
        Error::Bracketing(_)
            | Error::Monotonicity(_)
            | Error::Invariant(_)
            | Error::InsufficientData(_)
            | Error::NotFibonacci(_)
            | Error::Degenerate(_)
            | Error::Cap { .. }
    )
}

/// Either the value, or a failed clause describing a structural error.
fn or_clause<T>(
    r: Result<T>,
    name: &str,
    level: Option<usize>,
    depth: u64,
    tol: &Float,
) -> Result<std::result::Result<T, Clause>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if structural(&e) => Ok(Err(clause(name, level, false, e.to_string(), depth, tol))),
        Err(e) => Err(e),
    }
}

fn log2_gap(a: &Float, b: &Float) -> String {
    let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if d.is_zero() {
        "gap 0".into()
    } else {
        format!("gap 2^{:.2}", d.log2().to_f64())
    }
}

/// Combinatorial order of the critical orbit against numeric positions
/// and distances, for all pairs `1 <= m < n <= max_index`.
pub fn verify_lemma1(map: &MapSpec, max_index: u64) -> Result<Report> {
    let tol = margin(map.prec());
    let orbit = critical_orbit(map, max_index as usize)?;
    let sums: Vec<FibSum> = (1..=max_index).map(FibSum::of).collect::<Result<_>>()?;
    let dist: Vec<Float> = orbit.values().iter().map(distance_to_c).collect();

    let mut side_bad = Vec::new();
    for m in 1..=max_index as usize {
        match side(orbit.get(m)) {
            Some(s) if s == side_of(&sums[m - 1]) => {}
            _ => side_bad.push(m),
        }
    }
    let (mut pos_close, mut dist_close, mut pos_bad, mut dist_bad) =
        (0usize, 0usize, Vec::new(), Vec::new());
    let mut min_gap: Option<Float> = None;
    for m in 1..=max_index as usize {
        for n in m + 1..=max_index as usize {
            let (sm, sn) = (&sums[m - 1], &sums[n - 1]);
            match compare_with_margin(orbit.get(m), orbit.get(n), &tol) {
                None => pos_close += 1,
                Some(o) if o != spatial_compare(sm, sn) => pos_bad.push((m, n)),
                _ => {}
            }
            match compare_with_margin(&dist[m - 1], &dist[n - 1], &tol) {
                None => dist_close += 1,
                Some(o) if o != compare_abs(sm, sn) => dist_bad.push((m, n)),
                _ => {}
            }
            let g = Float::with_val(map.prec(), &dist[m - 1] - &dist[n - 1]).abs();
            if min_gap.as_ref().is_none_or(|b| g < *b) {
                min_gap = Some(g);
            }
        }
    }
    let depth = max_index;
    let pairs = max_index * (max_index - 1) / 2;
    let gap_text = min_gap
        .map(|g| format!("smallest distance gap 2^{:.2}", g.log2().to_f64()))
        .unwrap_or_default();
    let first = |v: &[(usize, usize)]| {
        v.first()
            .map(|(m, n)| format!(", first ({m}, {n})"))
            .unwrap_or_default()
    };
    let clauses = vec![
        clause(
            "side_rule",
            None,
            side_bad.is_empty(),
            format!(
                "{} of {max_index} sides disagree{}",
                side_bad.len(),
                side_bad
                    .first()
                    .map(|m| format!(", first {m}"))
                    .unwrap_or_default()
            ),
            depth,
            &tol,
        ),
        clause(
            "separation",
            None,
            pos_close == 0 && dist_close == 0,
            format!(
                "{pos_close} position and {dist_close} distance pairs within tolerance; {gap_text}"
            ),
            depth,
            &tol,
        ),
        clause(
            "spatial_order",
            None,
            pos_bad.is_empty(),
            format!(
                "{} of {pairs} pairs disagree{}",
                pos_bad.len(),
                first(&pos_bad)
            ),
            depth,
            &tol,
        ),
        clause(
            "distance_order",
            None,
            dist_bad.is_empty(),
            format!(
                "{} of {pairs} pairs disagree{}",
                dist_bad.len(),
                first(&dist_bad)
            ),
            depth,
            &tol,
        ),
    ];
    Ok(Report::new("lemma1", map, clauses))
}

/// Every `c_m` (`m <= max_index`) whose Fibonacci sum has at least two
/// summands and leading index `n <= max_leading` lies strictly between
/// `d_n` and `y_n`. The sum `S_n + S_{n+2}` itself is `y_n` and is skipped.
pub fn verify_corollary1(map: &MapSpec, max_index: u64, max_leading: usize) -> Result<Report> {
    let tol = margin(map.prec());
    let s = fib_times(max_leading + 2)?;
    let needed = (s[max_leading] + s[max_leading + 2]).max(max_index) as usize;
    let orbit = critical_orbit(map, needed)?;
    if let Err(c) = or_clause(
        require_fibonacci(&orbit, max_leading + 2),
        "fibonacci_precondition",
        None,
        needed as u64,
        &tol,
    )? {
        return Ok(Report::new("cor1", map, vec![c]));
    }
    let mut clauses = Vec::new();
    for n in 0..=max_leading {
        let d = orbit.get(s[n] as usize);
        let y = orbit.get((s[n] + s[n + 2]) as usize);
        let (lo, hi) = if d < y { (d, y) } else { (y, d) };
        let (mut checked, mut bad) = (0usize, Vec::new());
        for m in 1..=max_index {
            let sum = FibSum::of(m)?;
            if sum.len() < 2 || sum.leading() != n || m == s[n] + s[n + 2] {
                continue;
            }
            checked += 1;
            let x = orbit.get(m as usize);
            let inside = compare_with_margin(x, lo, &tol) == Some(Ordering::Greater)
                && compare_with_margin(hi, x, &tol) == Some(Ordering::Greater);
            if !inside {
                bad.push(m);
            }
        }
        clauses.push(clause(
            "between_d_and_y",
            Some(n),
            bad.is_empty(),
            format!(
                "{checked} iterates checked, {} outside{}",
                bad.len(),
                bad.first()
                    .map(|m| format!(", first {m}"))
                    .unwrap_or_default()
            ),
            max_index,
            &tol,
        ));
    }
    Ok(Report::new("cor1", map, clauses))
}

/// `|d_{n+1}| < |u_n| < |y_n| < |z_{n-1}| < |d_n|` for `n = 1..=levels`,
/// with `u_n` on the side of `d_n` and the pullback residual of `u_{n+1}`.
pub fn verify_lemma2(map: &MapSpec, levels: usize) -> Result<Report> {
    let tol = margin(map.prec());
    let table = match or_clause(
        marked_points(map, levels + 1),
        "fibonacci_precondition",
        None,
        levels as u64 + 1,
        &tol,
    )? {
        Ok(t) => t,
        Err(c) => return Ok(Report::new("lemma2", map, vec![c])),
    };
    let s = fib_times(levels + 1)?;
    let mut clauses = Vec::new();
    for n in 1..=levels {
        let cur = table.level(n);
        let next = table.level(n + 1);
        let z_prev = if n == 1 {
            table.z0_radius.as_float()
        } else {
            table.level(n - 1).z_radius.as_float()
        };
        let chain = [
            ("|d_{n+1}|", distance_to_c(next.d.as_float())),
            ("|u_n|", cur.u_radius.as_float().clone()),
            ("|y_n|", distance_to_c(cur.y.as_float())),
            ("|z_{n-1}|", z_prev.clone()),
            ("|d_n|", distance_to_c(cur.d.as_float())),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for w in chain.windows(2) {
            let holds = compare_with_margin(&w[1].1, &w[0].1, &tol) == Some(Ordering::Greater);
            ok &= holds;
            parts.push(format!(
                "{} < {}: {} ({})",
                w[0].0,
                w[1].0,
                holds,
                log2_gap(&w[1].1, &w[0].1)
            ));
        }
        clauses.push(clause(
            "ordering_chain",
            Some(n),
            ok,
            parts.join("; "),
            s[n + 1],
            &tol,
        ));
        let same_side = side(cur.u.as_float()) == side(cur.d.as_float());
        clauses.push(clause(
            "u_on_side_of_d",
            Some(n),
            same_side,
            String::new(),
            s[n],
            &tol,
        ));
        if n < levels {
            let image = map.eval_n(next.u.as_float(), s[n])?;
            let res = Float::with_val(map.prec(), &image - cur.u.as_float()).abs();
            let small = res < tolerance(map.prec());
            let detail = if res.is_zero() {
                "residual 0".into()
            } else {
                format!("residual 2^{:.2}", res.log2().to_f64())
            };
            clauses.push(clause(
                "pullback_residual",
                Some(n),
                small,
                detail,
                s[n],
                &tolerance(map.prec()),
            ));
        }
    }
    Ok(Report::new("lemma2", map, clauses))
}

fn witness_orbit(map: &MapSpec, witnesses: usize) -> Result<Orbit> {
    critical_orbit_prefix(map, witnesses)
}

/// Return-domain clauses of one nice interval: exactly two orbit-meeting
/// domains with the expected central and lateral return times, and
/// return-time constancy on interior samples.
fn domain_clauses(
    map: &MapSpec,
    j: &Interval,
    orbit: &Orbit,
    level: usize,
    central_time: u64,
    lateral_time: u64,
) -> Result<(Vec<Clause>, Option<DomainSet>)> {
    let tol = map.tolerance();
    let depth = orbit.len() as u64;
    let set = match or_clause(
        return_domains(map, j, orbit, DomainOptions::default()),
        "return_domains",
        Some(level),
        depth,
        &tol,
    )? {
        Ok(s) => s,
        Err(c) => return Ok((vec![c], None)),
    };
    let times: Vec<u64> = set.domains.iter().map(|d| d.return_time).collect();
    let mut out = vec![clause(
        "two_domains",
        Some(level),
        set.domains.len() == 2 && !set.truncated,
        format!("{} domains, return times {times:?}", set.domains.len()),
        depth,
        &tol,
    )];
    let central = set.central().map(|d| d.return_time);
    out.push(clause(
        "central_return_time",
        Some(level),
        central == Some(central_time),
        format!("expected {central_time}, found {central:?}"),
        depth,
        &tol,
    ));
    let lateral: Vec<u64> = set.lateral().map(|d| d.return_time).collect();
    out.push(clause(
        "lateral_return_time",
        Some(level),
        !lateral.is_empty() && lateral.iter().all(|&t| t == lateral_time),
        format!("expected {lateral_time}, found {lateral:?}"),
        depth,
        &tol,
    ));
    let cap = central_time.max(lateral_time) * 4 + 16;
    let mut bad = 0usize;
    for d in &set.domains {
        for x in d.interior_samples(SAMPLES_PER_DOMAIN, map.prec()) {
            match first_entry(map, j, &x, cap) {
                Ok(e) if e.time() == Some(d.return_time) => {}
                Ok(_) => bad += 1,
                Err(e) if structural(&e) => bad += 1,
                Err(e) => return Err(e),
            }
        }
    }
    out.push(clause(
        "return_time_constancy",
        Some(level),
        bad == 0,
        format!(
            "{bad} of {} samples disagree",
            SAMPLES_PER_DOMAIN * set.domains.len()
        ),
        cap,
        &tol,
    ));
    Ok((out, Some(set)))
}

fn nest_level_clauses(
    map: &MapSpec,
    orbit: &Orbit,
    nest: &[NestLevel],
    k: usize,
    s: &[u64],
) -> Result<Vec<Clause>> {
    let level = &nest[k - 1];
    let (mut clauses, set) = domain_clauses(map, &level.interval, orbit, k, s[k + 1], s[k])?;
    let Some(set) = set else { return Ok(clauses) };
    let mt = match_tolerance(map.prec());
    let next = &nest[k].interval;
    let matched = set.central().map(|d| {
        [(&d.lo, next.lo()), (&d.hi, next.hi())]
            .iter()
            .all(|(e, x)| {
                [e.inner.as_float(), e.outer.as_float()]
                    .iter()
                    .all(|v| Float::with_val(map.prec(), *v - *x).abs() < mt)
            })
    });
    clauses.push(clause(
        "central_domain_is_next_level",
        Some(k),
        matched == Some(true),
        String::new(),
        orbit.len() as u64,
        &mt,
    ));
    let idx_d = s[k + 1] as usize;
    let idx_y = (s[k + 1] + s[k + 3]) as usize;
    let lateral_has = idx_y <= orbit.len()
        && set
            .lateral()
            .any(|d| d.contains(orbit.get(idx_d)) && d.contains(orbit.get(idx_y)));
    clauses.push(clause(
        "lateral_contains_d_and_y",
        Some(k),
        lateral_has,
        format!("d_{} = c_{idx_d}, y_{} = c_{idx_y}", k + 1, k + 1),
        idx_y as u64,
        &map.tolerance(),
    ));
    Ok(clauses)
}

/// Return structure of `I^k` for `k = 1..=levels`: two orbit-meeting
/// domains, central return time `S_{k+1}` with the central domain equal to
/// `I^{k+1}`, lateral return time `S_k` on a domain containing `d_{k+1}`
/// and `y_{k+1}`.
pub fn verify_theorem1(map: &MapSpec, levels: usize, witnesses: usize) -> Result<Report> {
    let clauses = return_structure_clauses(map, levels, witnesses)?;
    Ok(Report::new("thm1", map, clauses))
}

fn return_structure_clauses(map: &MapSpec, levels: usize, witnesses: usize) -> Result<Vec<Clause>> {
    if levels == 0 {
        return Ok(Vec::new());
    }
    check_level_budget(levels + 1, map.prec())?;
    let tol = map.tolerance();
    let s = fib_times(levels + 3)?;
    let orbit = witness_orbit(map, witnesses.max((s[levels + 1] + s[levels + 3]) as usize))?;
    if let Err(c) = or_clause(
        require_fibonacci(&orbit, levels + 1),
        "fibonacci_precondition",
        None,
        orbit.len() as u64,
        &tol,
    )? {
        return Ok(vec![c]);
    }
    let nest = match or_clause(
        principal_nest(map, &orbit, levels + 1),
        "principal_nest",
        None,
        orbit.len() as u64,
        &tol,
    )? {
        Ok(n) => n,
        Err(c) => return Ok(vec![c]),
    };
    let per_level: Vec<Result<Vec<Clause>>> = (1..=levels)
        .into_par_iter()
        .map(|k| nest_level_clauses(map, &orbit, &nest, k, &s))
        .collect();
    let mut clauses = Vec::new();
    for r in per_level {
        clauses.extend(r?);
    }
    Ok(clauses)
}

/// The two-domain structure on `U^n = (u_n, û_n)` for `n = 1..=levels`:
/// central return time `S_{n+1}`, lateral `S_n`.
pub fn verify_proposition1(map: &MapSpec, levels: usize, witnesses: usize) -> Result<Report> {
    let tol = map.tolerance();
    let table: MarkedPointTable = match or_clause(
        marked_points(map, levels.max(1)),
        "fibonacci_precondition",
        None,
        levels as u64,
        &tol,
    )? {
        Ok(t) => t,
        Err(c) => return Ok(Report::new("prop1", map, vec![c])),
    };
    let s = fib_times(levels + 1)?;
    let orbit = witness_orbit(map, witnesses)?;
    let per_level: Vec<Result<Vec<Clause>>> = (1..=levels)
        .into_par_iter()
        .map(|n| {
            let j = Interval::symmetric(table.level(n).u_radius.as_float());
            let nice = is_nice(map, &j, NICE_HORIZON)?;
            let mut out = vec![clause(
                "nice",
                Some(n),
                nice.nice,
                format!("violation {:?}", nice.violation),
                NICE_HORIZON,
                &tol,
            )];
            out.extend(domain_clauses(map, &j, &orbit, n, s[n + 1], s[n])?.0);
            Ok(out)
        })
        .collect();
    let mut clauses = Vec::new();
    for r in per_level {
        clauses.extend(r?);
    }
    Ok(Report::new("prop1", map, clauses))
}

/// The main characterization to depth `levels`: the return structure of
/// [`verify_theorem1`], `d_k ∉ I^k`, and `|d_{k+1}| < |i_k| < |u_k|` with
/// `i_k` on the side of `u_k` for `k >= 3`.
pub fn verify_theorem3(map: &MapSpec, levels: usize, witnesses: usize) -> Result<Report> {
    if levels == 0 {
        return Ok(Report::new("thm3", map, Vec::new()));
    }
    let mut clauses = return_structure_clauses(map, levels, witnesses)?;
    let tol = margin(map.prec());
    let s = fib_times(levels + 3)?;
    let orbit = witness_orbit(map, witnesses.max((s[levels + 1] + s[levels + 3]) as usize))?;
    let nest = match or_clause(
        principal_nest(map, &orbit, levels + 1),
        "principal_nest",
        None,
        orbit.len() as u64,
        &tol,
    )? {
        Ok(n) => n,
        Err(c) => {
            clauses.push(c);
            return Ok(Report::new("thm3", map, clauses));
        }
    };
    let table = match or_clause(
        marked_points(map, levels),
        "fibonacci_precondition",
        None,
        levels as u64,
        &tol,
    )? {
        Ok(t) => t,
        Err(c) => {
            clauses.push(c);
            return Ok(Report::new("thm3", map, clauses));
        }
    };
    for k in 1..=levels {
        let d = orbit.get(s[k] as usize);
        let m = nest[k - 1].interval.classify(d, &tol);
        clauses.push(clause(
            "d_outside_nest_level",
            Some(k),
            m == Membership::Outside,
            format!("d_{k} is {m:?}"),
            s[k],
            &tol,
        ));
    }
    for k in 3..=levels {
        let r = nest[k - 1].radius();
        let dn = distance_to_c(orbit.get(s[k + 1] as usize));
        let u = table.level(k).u.as_float();
        let ur = distance_to_c(u);
        let below = compare_with_margin(r, &dn, &tol) == Some(Ordering::Greater);
        let above = compare_with_margin(&ur, r, &tol) == Some(Ordering::Greater);
        let dk_side = side_of_point(orbit.get(s[k] as usize))?;
        let endpoint_side = side(nest[k - 1].endpoint(dk_side));
        let same_side = endpoint_side == side(u);
        clauses.push(clause(
            "endpoint_between_d_and_u",
            Some(k),
            below && above && same_side,
            format!(
                "|d_{}| < |i_{k}|: {below} ({}); |i_{k}| < |u_{k}|: {above} ({}); same side as u: {same_side}",
                k + 1,
                log2_gap(r, &dn),
                log2_gap(&ur, r)
            ),
            s[k + 1],
            &tol,
        ));
    }
    Ok(Report::new("thm3", map, clauses))
}

/// Outcome of [`classify_by_nest`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub fibonacci_like: bool,
    pub depth: usize,
    pub failed_level: Option<usize>,
    pub reason: String,
}

impl Classification {
    fn fail(depth: usize, level: Option<usize>, reason: String) -> Self {
        Classification {
            fibonacci_like: false,
            depth,
            failed_level: level,
            reason,
        }
    }
}

/// Decides from the principal nest alone whether, for `k = 1..=levels`,
/// the central return time of `I^k` is `S_{k+1}`, the only other
/// orbit-meeting domain returns at `S_k`, the central domain is `I^{k+1}`,
/// and `d_k ∉ I^k`, with `S_k` the map's own cutting times.
pub fn classify_by_nest(map: &MapSpec, levels: usize, witnesses: usize) -> Result<Classification> {
    check_level_budget(levels + 1, map.prec())?;
    let tol = map.tolerance();
    let orbit = witness_orbit(map, witnesses)?;
    if orbit.is_empty() {
        return Ok(Classification::fail(levels, None, "no valid orbit".into()));
    }
    let times = match or_clause(
        cutting_times_from_orbit(&orbit, orbit.len() as u64),
        "cutting_times",
        None,
        0,
        &tol,
    )? {
        Ok(t) => t.times,
        Err(c) => return Ok(Classification::fail(levels, None, c.detail)),
    };
    if times.len() < levels + 2 {
        return Ok(Classification::fail(
            levels,
            None,
            format!(
                "only {} cutting times within {} iterates",
                times.len(),
                orbit.len()
            ),
        ));
    }
    let nest = match or_clause(
        principal_nest(map, &orbit, levels + 1),
        "principal_nest",
        None,
        0,
        &tol,
    )? {
        Ok(n) => n,
        Err(c) => return Ok(Classification::fail(levels, None, c.detail)),
    };
    let mt = match_tolerance(map.prec());
    for k in 1..=levels {
        let level = &nest[k - 1];
        let fail = |reason: String| Ok(Classification::fail(levels, Some(k), reason));
        if level.return_time != times[k + 1] {
            return fail(format!(
                "central return time {} is not S_{} = {}",
                level.return_time,
                k + 1,
                times[k + 1]
            ));
        }
        if level.interval.classify(orbit.get(times[k] as usize), &tol) != Membership::Outside {
            return fail(format!("d_{k} is not outside I^{k}"));
        }
        let set = match or_clause(
            return_domains(map, &level.interval, &orbit, DomainOptions::default()),
            "return_domains",
            Some(k),
            0,
            &tol,
        )? {
            Ok(s) => s,
            Err(c) => return fail(c.detail),
        };
        if set.domains.len() != 2 || set.truncated {
            return fail(format!(
                "{} orbit-meeting return domains",
                set.domains.len()
            ));
        }
        let Some(central) = set.central() else {
            return fail("no central domain".into());
        };
        let next_r = nest[k].radius();
        let (_, hi) = central.bounds(map.prec());
        let r = distance_to_c(&hi);
        if Float::with_val(map.prec(), &r - next_r).abs() >= mt {
            return fail("central domain differs from the next nest level".into());
        }
        if central.return_time != times[k + 1] {
            return fail(format!("central domain returns at {}", central.return_time));
        }
        if set.lateral().any(|d| d.return_time != times[k]) {
            return fail(format!(
                "lateral domain does not return at S_{k} = {}",
                times[k]
            ));
        }
    }
    Ok(Classification {
        fibonacci_like: true,
        depth: levels,
        failed_level: None,
        reason: String::new(),
    })
}

/// One sample of the converse sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub parameter: HpNum,
    pub by_nest: bool,
    pub by_cutting_times: bool,
    pub agree: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConverseReport {
    pub ell: f64,
    pub precision: u32,
    pub nest_levels: usize,
    pub cutting_depth: usize,
    pub agreement: usize,
    pub samples: Vec<SweepSample>,
    pub passed: bool,
}

/// `count - 1` evenly spaced parameters on `[0.55, 1]` followed by `extra`.
pub fn sweep_parameters(count: usize, prec: u32, extra: &Float) -> Vec<Float> {
    let n = count.saturating_sub(1);
    let mut out: Vec<Float> = (0..n)
        .map(|i| {
            if n == 1 {
                return Float::with_val(prec, 11) / 20u32;
            }
            let num = 55 * (n as u64 - 1) + 45 * i as u64;
            Float::with_val(prec, num) / (100 * (n as u64 - 1))
        })
        .collect();
    if count > 0 {
        out.push(Float::with_val(prec, extra));
    }
    out
}

/// Compares [`classify_by_nest`] with [`is_fibonacci`] across parameters,
/// one map per task.
pub fn converse_sweep(
    parameters: &[Float],
    ell: f64,
    prec: u32,
    nest_levels: usize,
    cutting_depth: usize,
    witnesses: usize,
) -> Result<ConverseReport> {
    let samples: Vec<Result<SweepSample>> = parameters
        .par_iter()
        .map(|a| {
            let map = MapSpec::new(a, ell, prec)?;
            let nest = classify_by_nest(&map, nest_levels, witnesses)?;
            let cut = match is_fibonacci(&map, cutting_depth) {
                Ok(b) => b,
                Err(e) if structural(&e) => false,
                Err(e) => return Err(e),
            };
            Ok(SweepSample {
                parameter: map.a_hp(),
                by_nest: nest.fibonacci_like,
                by_cutting_times: cut,
                agree: nest.fibonacci_like == cut,
                reason: nest.reason,
            })
        })
        .collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    let agreement = samples.iter().filter(|s| s.agree).count();
    Ok(ConverseReport {
        ell,
        precision: prec,
        nest_levels,
        cutting_depth,
        agreement,
        passed: agreement == samples.len(),
        samples,
    })
}
