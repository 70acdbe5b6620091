//! Run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crgeom::constructions::KahlerKind;
use crgeom::sampling::{DEFAULT_POINTS, DEFAULT_SEED};

use crate::checks::{self, Suite};
use crate::error::VerifyError;

/// One example at one complex dimension.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub example: KahlerKind,
    pub m: usize,
    pub suites: Vec<Suite>,
    pub points: usize,
    pub seed: u64,
    /// Per-check tolerance overrides, keyed by check name.
    pub tol_overrides: BTreeMap<String, f64>,
    pub out_path: Option<PathBuf>,
}

/// Supported complex dimensions of the base.
pub const SUPPORTED_M: [usize; 2] = [1, 2];

impl SuiteConfig {
    pub fn new(example: KahlerKind, m: usize) -> Self {
        SuiteConfig {
            example,
            m,
            suites: Suite::ALL.to_vec(),
            points: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
            tol_overrides: BTreeMap::new(),
            out_path: None,
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if !KahlerKind::CATALOG.contains(&self.example) {
            return Err(VerifyError::Usage(format!("`{}` is not a catalog example", self.example)));
        }
        if !SUPPORTED_M.contains(&self.m) {
            return Err(VerifyError::Usage(format!("m = {} not supported (use 1 or 2)", self.m)));
        }
        if self.points == 0 {
            return Err(VerifyError::Usage("points must be at least 1".into()));
        }
        if self.suites.is_empty() {
            return Err(VerifyError::Usage("no suites selected".into()));
        }
        for (name, tol) in &self.tol_overrides {
            if checks::find(name).is_none() {
                return Err(VerifyError::Usage(format!("unknown check `{name}` in tolerance override")));
            }
            if !tol.is_finite() || *tol < 0.0 {
                return Err(VerifyError::Usage(format!("tolerance for `{name}` must be finite and non-negative")));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, spec: &checks::CheckSpec) -> f64 {
        self.tol_overrides.get(spec.name).copied().unwrap_or(spec.tolerance)
    }
}

/// Parses `example` ids; `all` expands to the catalog.
pub fn parse_examples(s: &str) -> Result<Vec<KahlerKind>, VerifyError> {
    if s == "all" {
        return Ok(KahlerKind::CATALOG.to_vec());
    }
    match KahlerKind::from_id(s) {
        Some(k) if KahlerKind::CATALOG.contains(&k) => Ok(vec![k]),
        _ => Err(VerifyError::Usage(format!("unknown example `{s}`"))),
    }
}

/// Parses `name=value`.
pub fn parse_override(s: &str) -> Result<(String, f64), VerifyError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| VerifyError::Usage(format!("expected name=value, got `{s}`")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| VerifyError::Usage(format!("bad tolerance `{value}`")))?;
    Ok((name.trim().to_string(), v))
}
