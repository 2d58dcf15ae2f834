//! Line-oriented run configuration.
//!
//! ```text
//! # comments run from '#' to end of line
//! [link]                  # optional, at most once
//! g_t = 10
//! ...
//! [experiment sfg_bpsk]   # repeatable; the label is optional
//! receiver = sfg
//! alphabet = bpsk
//! ...
//! [output]                # optional, at most once
//! path = sfg_bpsk.csv
//! format = csv
//! ```
//!
//! Every key is documented in the README. Unknown sections or keys, duplicate
//! keys and malformed values are rejected with the offending line number.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::link::{AlphabetKind, LinkBudget};
use crate::montecarlo::ExperimentConfig;
use crate::receivers::{ReceiverKind, ReceiverSpec};

/// Trials per point when an experiment block has no `trials` key.
pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, key: Option<&str>, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            key: key.map(str::to_owned),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "line {}: key `{}`: {}", self.line, k, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentBlock {
    pub name: String,
    /// Line of the section header, for later diagnostics.
    pub line: usize,
    pub config: ExperimentConfig,
    /// Whether the block set `seed` itself.
    pub explicit_seed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub experiments: Vec<ExperimentBlock>,
    pub link: Option<LinkBudget>,
    pub output: OutputSpec,
}

/// `a:b:n` (n evenly spaced points, ends included) or a comma-separated list.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected s_min:s_max:n, got `{text}`"));
        }
        let lo: f64 = parse_num(parts[0])?;
        let hi: f64 = parse_num(parts[1])?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| format!("point count `{}` is not a positive integer", parts[2]))?;
        return match n {
            0 => Err("point count must be at least 1".into()),
            1 if lo == hi => Ok(vec![lo]),
            1 => Err("a single point needs s_min = s_max".into()),
            _ if !(hi > lo) => Err(format!("s_max ({hi}) must exceed s_min ({lo})")),
            _ => Ok((0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()),
        };
    }
    let values = text
        .split(',')
        .map(|v| parse_num(v.trim()))
        .collect::<Result<Vec<f64>, _>>()?;
    if values.is_empty() {
        return Err("sweep is empty".into());
    }
    Ok(values)
}

fn parse_num<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse()
        .map_err(|_| format!("cannot parse `{v}` as a number"))
}

fn parse_finite(v: &str) -> Result<f64, String> {
    let x: f64 = parse_num(v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{v}` is not finite"))
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{v}`")),
    }
}

fn parse_receiver(v: &str) -> Result<ReceiverKind, String> {
    match v {
        "heterodyne" => Ok(ReceiverKind::Heterodyne),
        "pa" => Ok(ReceiverKind::Pa),
        "sfg" => Ok(ReceiverKind::Sfg),
        _ => Err(format!("expected heterodyne, pa or sfg, got `{v}`")),
    }
}

fn parse_alphabet(v: &str) -> Result<AlphabetKind, String> {
    match v {
        "pam" => Ok(AlphabetKind::Pam),
        "bpsk" => Ok(AlphabetKind::Bpsk),
        "qpsk" => Ok(AlphabetKind::Qpsk),
        _ => Err(format!("expected pam, bpsk or qpsk, got `{v}`")),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SectionKind {
    Experiment,
    Link,
    Output,
}

const EXPERIMENT_KEYS: &[&str] = &[
    "receiver",
    "alphabet",
    "n_s",
    "n_z",
    "m",
    "sweep",
    "trials",
    "seed",
    "pa_epsilon_sq",
    "sfg_tau",
    "sfg_capture_eps",
    "thermal_residual",
];
const LINK_KEYS: &[&str] = &[
    "g_t",
    "g_r",
    "f_hz",
    "r_t",
    "r_r",
    "sigma_q",
    "temperature",
    "bandwidth",
    "symbol_duration",
    "tag_phase",
];
const OUTPUT_KEYS: &[&str] = &["path", "format"];

struct Section {
    kind: SectionKind,
    label: Option<String>,
    line: usize,
    entries: HashMap<String, (usize, String)>,
}

impl Section {
    fn get<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => parse(v)
                .map(Some)
                .map_err(|m| ConfigError::new(*line, Some(key), m)),
        }
    }

    fn require<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<T, ConfigError> {
        self.get(key, parse)?
            .ok_or_else(|| ConfigError::new(self.line, Some(key), "required key is missing"))
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::new(line_no, None, "unterminated section header"))?
                .trim();
            let mut words = inner.split_whitespace();
            let head = words.next().unwrap_or("");
            let label = words.next().map(str::to_owned);
            if words.next().is_some() {
                return Err(ConfigError::new(
                    line_no,
                    None,
                    "section label must be one word",
                ));
            }
            let kind = match head {
                "experiment" => SectionKind::Experiment,
                "link" => SectionKind::Link,
                "output" => SectionKind::Output,
                other => {
                    return Err(ConfigError::new(
                        line_no,
                        None,
                        format!("unknown section `[{other}]`"),
                    ))
                }
            };
            if kind != SectionKind::Experiment {
                if label.is_some() {
                    return Err(ConfigError::new(
                        line_no,
                        None,
                        format!("`[{head}]` takes no label"),
                    ));
                }
                if sections.iter().any(|s| s.kind == kind) {
                    return Err(ConfigError::new(
                        line_no,
                        None,
                        format!("duplicate `[{head}]` section"),
                    ));
                }
            }
            sections.push(Section {
                kind,
                label,
                line: line_no,
                entries: HashMap::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(line_no, None, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let section = sections
            .last_mut()
            .ok_or_else(|| ConfigError::new(line_no, Some(key), "key outside any section"))?;
        let allowed = match section.kind {
            SectionKind::Experiment => EXPERIMENT_KEYS,
            SectionKind::Link => LINK_KEYS,
            SectionKind::Output => OUTPUT_KEYS,
        };
        if !allowed.contains(&key) {
            return Err(ConfigError::new(line_no, Some(key), "unknown key"));
        }
        if value.is_empty() {
            return Err(ConfigError::new(line_no, Some(key), "empty value"));
        }
        if let Some((first, _)) = section.entries.get(key) {
            return Err(ConfigError::new(
                line_no,
                Some(key),
                format!("duplicate key (first set on line {first})"),
            ));
        }
        section
            .entries
            .insert(key.to_owned(), (line_no, value.to_owned()));
    }
    Ok(sections)
}

fn link_from(section: &Section) -> Result<LinkBudget, ConfigError> {
    let f_hz = section.require("f_hz", parse_finite)?;
    Ok(LinkBudget {
        g_t: section.require("g_t", parse_finite)?,
        g_r: section.require("g_r", parse_finite)?,
        omega: std::f64::consts::TAU * f_hz,
        r_t: section.require("r_t", parse_finite)?,
        r_r: section.require("r_r", parse_finite)?,
        sigma_q: section.require("sigma_q", parse_finite)?,
        temperature: section.require("temperature", parse_finite)?,
        bandwidth: section.require("bandwidth", parse_finite)?,
        symbol_duration: section.require("symbol_duration", parse_finite)?,
        tag_phase: section.get("tag_phase", parse_finite)?.unwrap_or(0.0),
    })
}

fn experiment_from(
    section: &Section,
    index: usize,
    link: Option<&LinkBudget>,
    default_seed: u64,
) -> Result<ExperimentBlock, ConfigError> {
    let mut receiver = ReceiverSpec::new(section.require("receiver", parse_receiver)?);
    let alphabet = section.require("alphabet", parse_alphabet)?;
    let n_s = section.require("n_s", parse_finite)?;
    receiver.pa_epsilon_sq = section.get("pa_epsilon_sq", parse_finite)?;
    receiver.sfg_tau = section.get("sfg_tau", parse_finite)?;
    if let Some(eps) = section.get("sfg_capture_eps", parse_finite)? {
        receiver.sfg_capture_eps = eps;
    }
    if let Some(flag) = section.get("thermal_residual", parse_bool)? {
        receiver.include_thermal_residual = flag;
    }
    let derived = |key: &str| {
        ConfigError::new(
            section.line,
            Some(key),
            "required key is missing (a [link] block could supply it)",
        )
    };
    let n_z = match section.get("n_z", parse_finite)? {
        Some(v) => v,
        None => {
            let lb = link.ok_or_else(|| derived("n_z"))?;
            lb.thermal_occupancy()
                .map_err(|e| ConfigError::new(section.line, Some("n_z"), e.to_string()))?
        }
    };
    let m = match section.get("m", parse_num::<u64>)? {
        Some(v) => v,
        None => {
            let lb = link.ok_or_else(|| derived("m"))?;
            lb.mode_pairs()
                .map_err(|e| ConfigError::new(section.line, Some("m"), e.to_string()))?
        }
    };
    let seed = section.get("seed", parse_num::<u64>)?;
    let config = ExperimentConfig {
        alphabet,
        receiver,
        n_s,
        n_z,
        m,
        sweep: section.require("sweep", parse_sweep)?,
        trials_per_point: section
            .get("trials", parse_num::<u64>)?
            .unwrap_or(DEFAULT_TRIALS),
        master_seed: seed.unwrap_or(default_seed),
    };
    Ok(ExperimentBlock {
        name: section
            .label
            .clone()
            .unwrap_or_else(|| format!("experiment{}", index + 1)),
        line: section.line,
        config,
        explicit_seed: seed.is_some(),
    })
}

impl RunConfig {
    /// Parses a configuration; experiments without a `seed` key get `default_seed`.
    pub fn parse(text: &str, default_seed: u64) -> Result<RunConfig, ConfigError> {
        let sections = split_sections(text)?;
        let link = sections
            .iter()
            .find(|s| s.kind == SectionKind::Link)
            .map(link_from)
            .transpose()?;
        let mut experiments = Vec::new();
        let mut names: HashMap<String, usize> = HashMap::new();
        for s in sections
            .iter()
            .filter(|s| s.kind == SectionKind::Experiment)
        {
            let block = experiment_from(s, experiments.len(), link.as_ref(), default_seed)?;
            if let Some(first) = names.insert(block.name.clone(), block.line) {
                return Err(ConfigError::new(
                    s.line,
                    None,
                    format!(
                        "experiment `{}` already defined on line {first}",
                        block.name
                    ),
                ));
            }
            experiments.push(block);
        }
        let output = match sections.iter().find(|s| s.kind == SectionKind::Output) {
            Some(s) => OutputSpec {
                path: s.get("path", |v| Ok(PathBuf::from(v)))?,
                format: s.get("format", Format::from_str)?,
            },
            None => OutputSpec::default(),
        };
        Ok(RunConfig {
            experiments,
            link,
            output,
        })
    }
}
