//! Flat `key = value` run configuration, merged under command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Md,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(format!("unknown format {s:?} (expected json or md)")),
        }
    }
}

/// Settings a config file may provide. Unset keys stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileConfig {
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub report: Option<PathBuf>,
    pub format: Option<Format>,
    pub exclude_axes: Option<bool>,
    pub parallel: Option<usize>,
    pub timings: Option<bool>,
    pub structures: Option<Vec<String>>,
    pub connections: Option<Vec<String>>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("line {line}: invalid value {value:?} for {key}"))),
    }
}

fn parse_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl FileConfig {
    /// Parses `key = value` lines; `#` starts a comment. Keys mirror the
    /// long flags, with `-` or `_` accepted.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = FileConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line}: expected key = value")))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "points" => c.points = Some(parse_value(&key, value, line)?),
                "seed" => c.seed = Some(parse_value(&key, value, line)?),
                "report" => c.report = Some(PathBuf::from(value)),
                "format" => {
                    c.format = Some(value.parse().map_err(|e| CliError::Config(format!("line {line}: {e}")))?)
                }
                "exclude_axes" => c.exclude_axes = Some(parse_bool(&key, value, line)?),
                "parallel" => c.parallel = Some(parse_value(&key, value, line)?),
                "timings" => c.timings = Some(parse_bool(&key, value, line)?),
                "structures" | "structure" => c.structures = Some(parse_list(value)),
                "connections" | "connection" => c.connections = Some(parse_list(value)),
                _ => return Err(CliError::Config(format!("line {line}: unknown key {key:?}"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        FileConfig::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = FileConfig::parse(
            "# run settings\npoints = 12\nseed=7\nexclude-axes = yes\nformat = md\nstructures = std, sq\n\nreport = out.md # trailing\n",
        )
        .unwrap();
        assert_eq!(c.points, Some(12));
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.exclude_axes, Some(true));
        assert_eq!(c.format, Some(Format::Md));
        assert_eq!(c.structures, Some(vec!["std".to_string(), "sq".to_string()]));
        assert_eq!(c.report, Some(PathBuf::from("out.md")));
        assert_eq!(c.parallel, None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(FileConfig::parse("points 3"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse("points = many"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse("colour = red"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse("timings = maybe"), Err(CliError::Config(_))));
    }
}
