//! Algorithm configurations as flat `key=value` text, one configuration per line:
//!
//! ```text
//! # comments and blank lines are ignored
//! name=jacobi-c algo=c
//! name=g-small algo=g eps=0.02 max_sweeps=50
//! name=pc algo=pc delta0=1e-3 tol=1e-12
//! ```
//!
//! Keys: `name`, `algo` (`c`, `g`, `gmax`, `cthresh`, `pc`), `eps`, `delta0`,
//! `thresh`, `max_sweeps`, `tol`, `record_every`, `angle` (`algebraic` or
//! `oracle`). Unset parameters take size-dependent defaults in [`AlgoParams::to_config`].

use std::fmt;
use std::str::FromStr;

use tensor_jacobi_core::{AngleMethod, PairSelector, RunConfig};

use crate::error::{CliError, Result};

/// Default `ε` as a fraction of its upper bound `2/n`.
pub const DEFAULT_EPS_FRACTION: f64 = 0.1;
/// Default `δ₀` relative to `Σ‖A⁽ˡ⁾‖²`.
pub const DEFAULT_DELTA0_RELATIVE: f64 = 1e-3;
/// Default threshold `δ` relative to `sqrt(Σ‖A⁽ˡ⁾‖²)`.
pub const DEFAULT_THRESH_RELATIVE: f64 = 1e-10;
/// Grid size used by the oracle angle mode.
pub const ORACLE_GRID: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    C,
    G,
    GMax,
    CThresh,
    Pc,
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "c" => Ok(Algo::C),
            "g" => Ok(Algo::G),
            "gmax" => Ok(Algo::GMax),
            "cthresh" => Ok(Algo::CThresh),
            "pc" => Ok(Algo::Pc),
            _ => Err(format!("unknown algorithm '{s}' (expected c, g, gmax, cthresh or pc)")),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::C => "c",
            Algo::G => "g",
            Algo::GMax => "gmax",
            Algo::CThresh => "cthresh",
            Algo::Pc => "pc",
        })
    }
}

/// User-facing algorithm parameters before defaults are resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoParams {
    pub algo: Algo,
    pub eps: Option<f64>,
    pub delta0: Option<f64>,
    pub thresh: Option<f64>,
    pub max_sweeps: Option<usize>,
    pub tol: Option<f64>,
    pub record_every: Option<usize>,
    pub oracle: bool,
}

impl AlgoParams {
    pub fn new(algo: Algo) -> Self {
        Self {
            algo,
            eps: None,
            delta0: None,
            thresh: None,
            max_sweeps: None,
            tol: None,
            record_every: None,
            oracle: false,
        }
    }

    /// Resolves defaults for a problem of dimension `n` and total squared norm
    /// `total`, rejecting parameters that do not belong to the algorithm.
    pub fn to_config(&self, n: usize, total: f64) -> Result<RunConfig> {
        let stray = |name: &str| CliError::parse(0, format!("'{name}' does not apply to algo={}", self.algo));
        if self.eps.is_some() && self.algo != Algo::G {
            return Err(stray("eps"));
        }
        if self.delta0.is_some() && self.algo != Algo::Pc {
            return Err(stray("delta0"));
        }
        if self.thresh.is_some() && self.algo != Algo::CThresh {
            return Err(stray("thresh"));
        }
        let mut cfg = match self.algo {
            Algo::C => RunConfig::jacobi_c(),
            Algo::G => {
                let eps = self.eps.unwrap_or(DEFAULT_EPS_FRACTION * 2.0 / n as f64);
                RunConfig { selector: PairSelector::gradient(eps, n)?, ..RunConfig::default() }
            }
            Algo::GMax => RunConfig::jacobi_g_max(),
            Algo::CThresh => {
                RunConfig::jacobi_c_threshold(self.thresh.unwrap_or(DEFAULT_THRESH_RELATIVE * total.sqrt()))
            }
            Algo::Pc => RunConfig::jacobi_pc(self.delta0.unwrap_or(DEFAULT_DELTA0_RELATIVE * total)),
        };
        if let Some(s) = self.max_sweeps {
            cfg.max_sweeps = s;
        }
        cfg.stationarity_tol = self.tol;
        if let Some(r) = self.record_every {
            cfg.record_every = r;
        }
        if self.oracle {
            cfg.angle_method = AngleMethod::Oracle { grid_points: ORACLE_GRID };
        }
        cfg.validate(n)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub name: String,
    pub params: AlgoParams,
}

impl SuiteEntry {
    pub fn new(name: impl Into<String>, params: AlgoParams) -> Self {
        Self { name: name.into(), params }
    }
}

pub fn parse_suite(text: &str) -> Result<Vec<SuiteEntry>> {
    let mut entries: Vec<SuiteEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let entry = parse_line(line).map_err(|msg| CliError::parse(line_no, msg))?;
        if entries.iter().any(|e| e.name == entry.name) {
            return Err(CliError::parse(line_no, format!("duplicate name '{}'", entry.name)));
        }
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(CliError::parse(0, "suite has no configurations"));
    }
    Ok(entries)
}

fn parse_line(line: &str) -> std::result::Result<SuiteEntry, String> {
    let mut name = None;
    let mut algo = None;
    let mut rest = Vec::new();
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got '{tok}'"))?;
        match k {
            "name" => name = Some(v.to_string()),
            "algo" => algo = Some(v.parse::<Algo>()?),
            _ => rest.push((k, v)),
        }
    }
    let algo = algo.ok_or("missing algo")?;
    let mut p = AlgoParams::new(algo);
    for (k, v) in rest {
        let float = || v.parse::<f64>().map_err(|_| format!("bad number for {k}: '{v}'"));
        let int = || v.parse::<usize>().map_err(|_| format!("bad integer for {k}: '{v}'"));
        match k {
            "eps" => p.eps = Some(float()?),
            "delta0" => p.delta0 = Some(float()?),
            "thresh" => p.thresh = Some(float()?),
            "tol" => p.tol = Some(float()?),
            "max_sweeps" => p.max_sweeps = Some(int()?),
            "record_every" => p.record_every = Some(int()?),
            "angle" => {
                p.oracle = match v {
                    "algebraic" => false,
                    "oracle" => true,
                    _ => return Err(format!("unknown angle method '{v}'")),
                }
            }
            _ => return Err(format!("unknown key '{k}'")),
        }
    }
    let name = name.unwrap_or_else(|| algo.to_string());
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
        return Err(format!("name '{name}' must be nonempty and use [A-Za-z0-9._-]"));
    }
    Ok(SuiteEntry { name, params: p })
}

/// Jacobi-C, Jacobi-G (`ε = 2/n` and `ε = 0.02`), Jacobi-G-max,
/// Jacobi-C-threshold (`δ = 1e-10`) and Jacobi-PC (`δ₀ = 1e-3` and `1e-1`).
pub fn default_suite() -> Vec<SuiteEntry> {
    let with = |algo, f: fn(&mut AlgoParams)| {
        let mut p = AlgoParams::new(algo);
        f(&mut p);
        p
    };
    vec![
        SuiteEntry::new("jacobi-c", AlgoParams::new(Algo::C)),
        SuiteEntry::new("jacobi-g-2n", AlgoParams::new(Algo::G)),
        SuiteEntry::new("jacobi-g-0.02", with(Algo::G, |p| p.eps = Some(0.02))),
        SuiteEntry::new("jacobi-g-max", AlgoParams::new(Algo::GMax)),
        SuiteEntry::new("jacobi-c-thresh", with(Algo::CThresh, |p| p.thresh = Some(1e-10))),
        SuiteEntry::new("jacobi-pc-1e-3", with(Algo::Pc, |p| p.delta0 = Some(1e-3))),
        SuiteEntry::new("jacobi-pc-1e-1", with(Algo::Pc, |p| p.delta0 = Some(1e-1))),
    ]
}

/// [`default_suite`] resolved for dimension `n`; `jacobi-g-2n` gets `ε = 2/n`.
pub fn default_configs(n: usize, total: f64) -> Result<Vec<(String, RunConfig)>> {
    default_suite()
        .into_iter()
        .map(|mut e| {
            if e.name == "jacobi-g-2n" {
                e.params.eps = Some(2.0 / n as f64);
            }
            Ok((e.name, e.params.to_config(n, total)?))
        })
        .collect()
}
