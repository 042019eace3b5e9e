//! Resolution of flags, config file and environment into one [`RunConfig`].
//! Precedence: flag, then config file, then `FIBNEST_PRECISION`, then the
//! built-in default.

use std::path::{Path, PathBuf};

use fibnest_core::kneading::{find_fibonacci_parameter, frozen_fibonacci_parameter};
use fibnest_core::numerics::{HpNum, MapSpec, DEFAULT_PRECISION};
use rug::Float;
use serde::Deserialize;

use crate::args::{Cli, Format, MapArgs};
use crate::error::CliError;

pub const PRECISION_ENV: &str = "FIBNEST_PRECISION";

/// Same keys as the long flags, all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub a: Option<String>,
    pub ell: Option<f64>,
    pub precision: Option<u32>,
    pub search_depth: Option<u32>,
    pub depth: Option<u32>,
    pub horizon: Option<u64>,
    pub count: Option<u64>,
    pub levels: Option<u32>,
    pub witnesses: Option<u64>,
    pub samples: Option<u32>,
    pub cutting_depth: Option<u32>,
    pub max_index: Option<u64>,
    pub max_leading: Option<u32>,
    pub workers: Option<u16>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Settings shared by every subcommand.
#[derive(Debug)]
pub struct RunConfig {
    pub precision: u32,
    pub workers: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub file: FileConfig,
}

impl RunConfig {
    pub fn resolve(cli: &Cli, env_precision: Option<String>) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let env = match env_precision {
            Some(s) if !s.trim().is_empty() => Some(s.trim().parse::<u32>().map_err(|_| {
                CliError::Usage(format!("{PRECISION_ENV} must be an integer, got {s:?}"))
            })?),
            _ => None,
        };
        let precision = cli
            .precision
            .or(file.precision)
            .or(env)
            .unwrap_or(DEFAULT_PRECISION);
        if precision < 32 {
            return Err(CliError::Usage(format!(
                "precision must be at least 32 bits, got {precision}"
            )));
        }
        let output = cli.output.clone().or_else(|| file.output.clone());
        if output.as_ref().is_some_and(|p| p.as_os_str().is_empty()) {
            return Err(CliError::Usage("empty output path".into()));
        }
        let workers = cli.workers.or(file.workers).map(usize::from);
        if workers == Some(0) {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        Ok(RunConfig {
            precision,
            workers,
            format: cli.format.or(file.format).unwrap_or(Format::Json),
            output,
            file,
        })
    }

    pub fn ell(&self, flag: Option<f64>) -> f64 {
        flag.or(self.file.ell).unwrap_or(2.0)
    }

    /// Builds the map selected by `--a`.
    pub fn map(&self, args: &MapArgs) -> Result<MapSpec, CliError> {
        let ell = self.ell(args.ell);
        let choice = args
            .a
            .clone()
            .or_else(|| self.file.a.clone())
            .unwrap_or_else(|| "frozen".into());
        let prec = self.precision;
        match choice.trim() {
            "frozen" => {
                if ell != 2.0 {
                    return Err(CliError::Usage(format!(
                        "no frozen parameter for ell = {ell}; use --a auto or a value"
                    )));
                }
                Ok(frozen_fibonacci_parameter(prec)?)
            }
            "auto" => {
                let depth = args.search_depth.or(self.file.search_depth).unwrap_or(13) as usize;
                Ok(find_fibonacci_parameter(ell, depth, prec)?.map)
            }
            text => {
                let a = parse_value(text, prec)?;
                MapSpec::new(&a, ell, prec).map_err(|e| CliError::Usage(e.to_string()))
            }
        }
    }
}

/// Decimal or hex-float literal at `prec` bits.
pub fn parse_value(text: &str, prec: u32) -> Result<Float, CliError> {
    let t = text.trim();
    if t.starts_with("0x") || t.starts_with("0X") {
        return HpNum::from_hex(t, prec.max(1))
            .map(HpNum::into_float)
            .map_err(|e| CliError::Usage(format!("bad parameter {t:?}: {e}")));
    }
    Float::parse(t)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| CliError::Usage(format!("bad parameter {t:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_and_hex_agree() {
        let d = parse_value("0.75", 128).unwrap();
        let h = parse_value("0x1.8p-1", 128).unwrap();
        assert_eq!(d, h);
        assert!(parse_value("three quarters", 128).is_err());
    }

    #[test]
    fn config_file_keys_mirror_flags() {
        let c: FileConfig =
            toml::from_str("a = \"0.9\"\nprecision = 256\nformat = \"csv\"\nmax-index = 40\n")
                .unwrap();
        assert_eq!(c.precision, Some(256));
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.max_index, Some(40));
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
    }
}
