use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fibnest",
    version,
    about = "Fibonacci unimodal maps: cutting times, principal nests, return maps"
)]
pub struct Cli {
    /// Working precision in bits [env: FIBNEST_PRECISION; default 512].
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(32..=1_000_000))]
    pub precision: Option<u32>,

    /// TOML file with defaults for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for parallel suites [default: all cores].
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,

    /// Output format of the main report.
    #[arg(long, global = true)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Cor1,
    Thm1,
    Thm3,
    Prop1,
    Converse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotTarget {
    /// The principal nest level `I^k`.
    I,
    /// The marked-point interval `U^k`.
    U,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Tower,
    Preimage,
}

/// Selection of the map `x -> a(1 - |2x - 1|^ell)`.
#[derive(Debug, Args, Clone, Default)]
pub struct MapArgs {
    /// `frozen` (stored a* for ell = 2), `auto` (search), or a value in
    /// decimal or hex-float form [default: frozen].
    #[arg(long)]
    pub a: Option<String>,

    /// Critical order.
    #[arg(long)]
    pub ell: Option<f64>,

    /// Cutting-time depth for `--a auto` [default: 13].
    #[arg(long = "search-depth", value_parser = clap::value_parser!(u32).range(1..))]
    pub search_depth: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bisect for the parameter whose cutting times are Fibonacci.
    FindParam {
        #[arg(long)]
        ell: Option<f64>,
        /// Number of leading cutting times to match.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        depth: Option<u32>,
    },
    /// Cutting times up to a horizon.
    CuttingTimes {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: Option<u64>,
        /// Tower recursion, or the nearest-preimage definition (horizon
        /// is then the preimage depth).
        #[arg(long, value_enum, default_value = "tower")]
        method: Method,
    },
    /// Strict closest returns of the critical orbit.
    ClosestReturns {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: Option<u64>,
    },
    /// Left-to-right order of `c_1..c_count` from Fibonacci sums.
    OrbitOrder {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: Option<u64>,
    },
    /// Marked points `d_n, y_n, z_n, u_n`.
    MarkedPoints {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        levels: Option<u32>,
    },
    /// Principal nest levels with their return times.
    Nest {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        levels: Option<u32>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        witnesses: Option<u64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        map: MapArgs,
        /// Nest or marked-point levels (suite dependent default).
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..))]
        levels: Option<u32>,
        /// Largest orbit index for the ordering suites [default: 150].
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        max_index: Option<u64>,
        /// Largest leading summand index for cor1 [default: 8].
        #[arg(long)]
        max_leading: Option<u32>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        witnesses: Option<u64>,
        /// Parameters in the converse sweep, including a* [default: 40].
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        samples: Option<u32>,
        /// Cutting-time depth of the converse sweep [default: 8].
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        cutting_depth: Option<u32>,
    },
    /// SVG and CSV of the first return map on `I^k` or `U^k`.
    PlotReturnMap {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        level: u32,
        #[arg(long, value_enum, default_value = "i")]
        on: PlotTarget,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        witnesses: Option<u64>,
        /// CSV path [default: the SVG path with a .csv extension].
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}
