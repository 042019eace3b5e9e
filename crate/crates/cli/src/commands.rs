//! One function per subcommand. Each returns the report bytes, whether the
//! run counts as passing, and any side files to write.

use std::path::PathBuf;

use fibnest_core::combinatorics::{fib_u64, orbit_order, side_of, FibSum};
use fibnest_core::kneading::{
    closest_returns, cutting_times, find_fibonacci_parameter, preimage_cutting_times, StopReason,
};
use fibnest_core::nest::verify::{
    converse_sweep, sweep_parameters, verify_corollary1, verify_lemma1, verify_lemma2,
    verify_proposition1, verify_theorem1, verify_theorem3, Report, DEFAULT_WITNESSES,
};
use fibnest_core::nest::{marked_points, principal_nest, return_domains, DomainOptions, Interval};
use fibnest_core::numerics::{critical_orbit_prefix, HpNum, MapSpec};
use serde::Serialize;

use crate::args::{Command, Format, MapArgs, Method, PlotTarget, Suite};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::plot::{render_csv, render_svg, sample_return_map};

#[derive(Debug)]
pub struct Output {
    pub report: Vec<u8>,
    pub passed: bool,
    pub files: Vec<(PathBuf, Vec<u8>)>,
}

impl Output {
    fn report(report: Vec<u8>) -> Self {
        Output {
            report,
            passed: true,
            files: Vec::new(),
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

pub(crate) fn csv_bytes(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(&row).map_err(to_io)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

fn hex(x: &HpNum) -> String {
    x.to_hex()
}

#[derive(Serialize)]
struct MapHeader {
    parameter: HpNum,
    ell: f64,
    precision: u32,
}

fn header(map: &MapSpec) -> MapHeader {
    MapHeader {
        parameter: map.a_hp(),
        ell: map.ell(),
        precision: map.prec(),
    }
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Output, CliError> {
    let f = &cfg.file;
    match cmd {
        Command::FindParam { ell, depth } => find_param(
            cfg,
            cfg.ell(*ell),
            depth.or(f.depth).or(f.search_depth).unwrap_or(13) as usize,
        ),
        Command::CuttingTimes {
            map,
            horizon,
            method,
        } => cutting(cfg, map, horizon.or(f.horizon).unwrap_or(500), *method),
        Command::ClosestReturns { map, horizon } => {
            closest(cfg, map, horizon.or(f.horizon).unwrap_or(500))
        }
        Command::OrbitOrder { count } => order(cfg, count.or(f.count).unwrap_or(20)),
        Command::MarkedPoints { map, levels } => {
            marked(cfg, map, levels.or(f.levels).unwrap_or(10) as usize)
        }
        Command::Nest {
            map,
            levels,
            witnesses,
        } => nest(
            cfg,
            map,
            levels.or(f.levels).unwrap_or(8) as usize,
            witnesses
                .or(f.witnesses)
                .unwrap_or(DEFAULT_WITNESSES as u64) as usize,
        ),
        Command::Verify {
            suite,
            map,
            levels,
            max_index,
            max_leading,
            witnesses,
            samples,
            cutting_depth,
        } => verify(
            cfg,
            *suite,
            map,
            VerifyDepths {
                levels: levels.or(f.levels).map(|v| v as usize),
                max_index: max_index.or(f.max_index).unwrap_or(150),
                max_leading: max_leading.or(f.max_leading).unwrap_or(8) as usize,
                witnesses: witnesses
                    .or(f.witnesses)
                    .unwrap_or(DEFAULT_WITNESSES as u64) as usize,
                samples: samples.or(f.samples).unwrap_or(40) as usize,
                cutting_depth: cutting_depth.or(f.cutting_depth).unwrap_or(8) as usize,
            },
        ),
        Command::PlotReturnMap {
            map,
            level,
            on,
            witnesses,
            csv,
        } => plot(
            cfg,
            map,
            *level as usize,
            *on,
            witnesses
                .or(f.witnesses)
                .unwrap_or(DEFAULT_WITNESSES as u64) as usize,
            csv.clone(),
        ),
    }
}

#[derive(Serialize)]
struct FindParamReport {
    a_hex: String,
    ell: f64,
    precision: u32,
    verified_prefix: usize,
    steps: u32,
    stop: StopReason,
    bracket_lo: HpNum,
    bracket_hi: HpNum,
}

fn find_param(cfg: &RunConfig, ell: f64, depth: usize) -> Result<Output, CliError> {
    let out = find_fibonacci_parameter(ell, depth, cfg.precision)?;
    let r = FindParamReport {
        a_hex: out.map.a_hp().to_hex(),
        ell,
        precision: cfg.precision,
        verified_prefix: out.verified_prefix,
        steps: out.steps,
        stop: out.stop,
        bracket_lo: out.lo,
        bracket_hi: out.hi,
    };
    let bytes = match cfg.format {
        Format::Json => json(&r)?,
        Format::Csv => csv_bytes(
            &["a_hex", "ell", "precision", "verified_prefix", "steps"],
            [vec![
                r.a_hex.clone(),
                ell.to_string(),
                r.precision.to_string(),
                r.verified_prefix.to_string(),
                r.steps.to_string(),
            ]],
        )?,
    };
    Ok(Output::report(bytes))
}

#[derive(Serialize)]
struct TimesReport {
    #[serde(flatten)]
    map: MapHeader,
    method: &'static str,
    horizon: u64,
    times: Vec<u64>,
    fibonacci_prefix: usize,
}

fn cutting(
    cfg: &RunConfig,
    args: &MapArgs,
    horizon: u64,
    method: Method,
) -> Result<Output, CliError> {
    let map = cfg.map(args)?;
    let (seq, name) = match method {
        Method::Tower => (cutting_times(&map, horizon)?, "tower"),
        Method::Preimage => (preimage_cutting_times(&map, horizon as usize)?, "preimage"),
    };
    let r = TimesReport {
        map: header(&map),
        method: name,
        horizon: seq.computed_up_to,
        fibonacci_prefix: seq.fibonacci_prefix_len(),
        times: seq.times,
    };
    let bytes = match cfg.format {
        Format::Json => json(&r)?,
        Format::Csv => csv_bytes(
            &["i", "cutting_time"],
            r.times
                .iter()
                .enumerate()
                .map(|(i, t)| vec![i.to_string(), t.to_string()]),
        )?,
    };
    Ok(Output::report(bytes))
}

#[derive(Serialize)]
struct ReturnRow {
    time: u64,
    distance: HpNum,
}

#[derive(Serialize)]
struct ClosestReport {
    #[serde(flatten)]
    map: MapHeader,
    horizon: u64,
    returns: Vec<ReturnRow>,
}

fn closest(cfg: &RunConfig, args: &MapArgs, horizon: u64) -> Result<Output, CliError> {
    let map = cfg.map(args)?;
    let seq = closest_returns(&map, horizon)?;
    let r = ClosestReport {
        map: header(&map),
        horizon: seq.computed_up_to,
        returns: seq
            .times
            .iter()
            .zip(seq.distances)
            .map(|(&time, distance)| ReturnRow { time, distance })
            .collect(),
    };
    let bytes = match cfg.format {
        Format::Json => json(&r)?,
        Format::Csv => csv_bytes(
            &["i", "time", "distance", "prec"],
            r.returns.iter().enumerate().map(|(i, row)| {
                vec![
                    i.to_string(),
                    row.time.to_string(),
                    hex(&row.distance),
                    row.distance.prec().to_string(),
                ]
            }),
        )?,
    };
    Ok(Output::report(bytes))
}

#[derive(Serialize)]
struct OrderRow {
    m: u64,
    fib_sum: String,
    side: String,
}

fn order(cfg: &RunConfig, count: u64) -> Result<Output, CliError> {
    let rows = orbit_order(count)?
        .into_iter()
        .map(|m| {
            let s = FibSum::of(m)?;
            Ok(OrderRow {
                m,
                fib_sum: s.to_string(),
                side: side_of(&s).to_string(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let bytes = match cfg.format {
        Format::Json => json(&serde_json::json!({ "count": count, "left_to_right": rows }))?,
        Format::Csv => csv_bytes(
            &["rank", "m", "fib_sum", "side"],
            rows.iter().enumerate().map(|(i, r)| {
                vec![
                    (i + 1).to_string(),
                    r.m.to_string(),
                    r.fib_sum.clone(),
                    r.side.clone(),
                ]
            }),
        )?,
    };
    Ok(Output::report(bytes))
}

fn marked(cfg: &RunConfig, args: &MapArgs, levels: usize) -> Result<Output, CliError> {
    let map = cfg.map(args)?;
    let table = marked_points(&map, levels)?;
    let bytes = match cfg.format {
        Format::Json => json(&serde_json::json!({ "map": header(&map), "table": table }))?,
        Format::Csv => csv_bytes(
            &["n", "d", "y", "z_radius", "u", "u_radius", "prec"],
            table.levels.iter().map(|l| {
                vec![
                    l.n.to_string(),
                    hex(&l.d),
                    hex(&l.y),
                    hex(&l.z_radius),
                    hex(&l.u),
                    hex(&l.u_radius),
                    map.prec().to_string(),
                ]
            }),
        )?,
    };
    Ok(Output::report(bytes))
}

#[derive(Serialize)]
struct NestRow {
    k: usize,
    lo: HpNum,
    hi: HpNum,
    radius: HpNum,
    central_return_time: Option<u64>,
    lateral_return_times: Vec<u64>,
    domains: usize,
}

fn nest(
    cfg: &RunConfig,
    args: &MapArgs,
    levels: usize,
    witnesses: usize,
) -> Result<Output, CliError> {
    let map = cfg.map(args)?;
    let orbit = critical_orbit_prefix(&map, witnesses)?;
    let nest = principal_nest(&map, &orbit, levels)?;
    let rows = nest
        .iter()
        .map(|level| {
            let set = return_domains(&map, &level.interval, &orbit, DomainOptions::default())?;
            let r = level.to_report();
            Ok(NestRow {
                k: level.k,
                lo: r.interval.lo,
                hi: r.interval.hi,
                radius: r.radius,
                central_return_time: set.central().map(|d| d.return_time),
                lateral_return_times: set.lateral().map(|d| d.return_time).collect(),
                domains: set.domains.len(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let bytes = match cfg.format {
        Format::Json => json(
            &serde_json::json!({ "map": header(&map), "witnesses": orbit.len(), "levels": rows }),
        )?,
        Format::Csv => csv_bytes(
            &[
                "k",
                "lo",
                "hi",
                "radius",
                "central_return_time",
                "lateral_return_time",
                "domains",
                "prec",
            ],
            rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    hex(&r.lo),
                    hex(&r.hi),
                    hex(&r.radius),
                    r.central_return_time
                        .map(|t| t.to_string())
                        .unwrap_or_default(),
                    r.lateral_return_times
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(" "),
                    r.domains.to_string(),
                    map.prec().to_string(),
                ]
            }),
        )?,
    };
    Ok(Output::report(bytes))
}

struct VerifyDepths {
    levels: Option<usize>,
    max_index: u64,
    max_leading: usize,
    witnesses: usize,
    samples: usize,
    cutting_depth: usize,
}

fn report_csv(r: &Report) -> Result<Vec<u8>, CliError> {
    csv_bytes(
        &[
            "suite",
            "clause",
            "level",
            "passed",
            "depth",
            "tolerance",
            "detail",
        ],
        r.clauses.iter().map(|c| {
            vec![
                r.suite.clone(),
                c.name.clone(),
                c.level.map(|l| l.to_string()).unwrap_or_default(),
                c.passed.to_string(),
                c.depth.to_string(),
                hex(&c.tolerance),
                c.detail.clone(),
            ]
        }),
    )
}

fn verify(
    cfg: &RunConfig,
    suite: Suite,
    args: &MapArgs,
    d: VerifyDepths,
) -> Result<Output, CliError> {
    let map = cfg.map(args)?;
    if suite == Suite::Converse {
        let levels = d.levels.unwrap_or(6);
        let params = sweep_parameters(d.samples, map.prec(), map.a());
        let r = converse_sweep(
            &params,
            map.ell(),
            map.prec(),
            levels,
            d.cutting_depth,
            d.witnesses,
        )?;
        let bytes = match cfg.format {
            Format::Json => json(&r)?,
            Format::Csv => csv_bytes(
                &[
                    "parameter",
                    "prec",
                    "by_nest",
                    "by_cutting_times",
                    "agree",
                    "reason",
                ],
                r.samples.iter().map(|s| {
                    vec![
                        hex(&s.parameter),
                        s.parameter.prec().to_string(),
                        s.by_nest.to_string(),
                        s.by_cutting_times.to_string(),
                        s.agree.to_string(),
                        s.reason.clone(),
                    ]
                }),
            )?,
        };
        return Ok(Output {
            report: bytes,
            passed: r.passed,
            files: Vec::new(),
        });
    }
    let report = match suite {
        Suite::Lemma1 => verify_lemma1(&map, d.max_index)?,
        Suite::Cor1 => verify_corollary1(&map, d.max_index, d.max_leading)?,
        Suite::Lemma2 => verify_lemma2(&map, d.levels.unwrap_or(10))?,
        Suite::Thm1 => verify_theorem1(&map, d.levels.unwrap_or(8), d.witnesses)?,
        Suite::Thm3 => verify_theorem3(&map, d.levels.unwrap_or(10), d.witnesses)?,
        Suite::Prop1 => verify_proposition1(&map, d.levels.unwrap_or(6), d.witnesses)?,
        Suite::Converse => unreachable!("handled above"),
    };
    let bytes = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => report_csv(&report)?,
    };
    Ok(Output {
        report: bytes,
        passed: report.passed,
        files: Vec::new(),
    })
}

#[derive(Serialize)]
struct PlotSummary {
    #[serde(flatten)]
    map: MapHeader,
    interval: String,
    level: usize,
    lo: HpNum,
    hi: HpNum,
    return_times: Vec<u64>,
    svg: PathBuf,
    csv: PathBuf,
}

fn plot(
    cfg: &RunConfig,
    args: &MapArgs,
    level: usize,
    on: PlotTarget,
    witnesses: usize,
    csv_path: Option<PathBuf>,
) -> Result<Output, CliError> {
    let map = cfg.map(args)?;
    let orbit = critical_orbit_prefix(&map, witnesses)?;
    let (j, name) = match on {
        PlotTarget::I => {
            let nest = principal_nest(&map, &orbit, level)?;
            (nest[level - 1].interval.clone(), format!("I^{level}"))
        }
        PlotTarget::U => {
            let table = marked_points(&map, level)?;
            (
                Interval::symmetric(table.level(level).u_radius.as_float()),
                format!("U^{level}"),
            )
        }
    };
    let set = return_domains(&map, &j, &orbit, DomainOptions::default())?;
    let mut marks = vec![("c".to_string(), map.critical_point())];
    if let (Some(s1), Some(s3)) = (fib_u64(level + 1), fib_u64(level + 3)) {
        let (id, iy) = (s1 as usize, (s1 + s3) as usize);
        if iy <= orbit.len() {
            marks.push((format!("d{}", level + 1), orbit.c(id)));
            marks.push((format!("y{}", level + 1), orbit.c(iy)));
        }
    }
    let samples = sample_return_map(&map, &set)?;
    let title = format!("First return map on {name}");
    let svg = render_svg(&title, &j, &samples, &marks);
    let csv = render_csv(&samples)?;
    let tag = match on {
        PlotTarget::I => "i",
        PlotTarget::U => "u",
    };
    let svg_path = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("return-map-{tag}{level}.svg")));
    let csv_path = csv_path.unwrap_or_else(|| svg_path.with_extension("csv"));
    let summary = PlotSummary {
        map: header(&map),
        interval: name,
        level,
        lo: HpNum::new(j.lo().clone()),
        hi: HpNum::new(j.hi().clone()),
        return_times: set.domains.iter().map(|d| d.return_time).collect(),
        svg: svg_path.clone(),
        csv: csv_path.clone(),
    };
    Ok(Output {
        report: json(&summary)?,
        passed: true,
        files: vec![(svg_path, svg.into_bytes()), (csv_path, csv)],
    })
}
