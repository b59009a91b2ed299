//! Optional JSON run configuration. Every key mirrors a command-line flag;
//! flags win over file values.

use std::path::{Path, PathBuf};

use cpt_core::Tolerances;
use serde::Deserialize;

use crate::{CliError, Format, RetroVariant};

/// Name of the environment variable that overrides the CPT pass tolerance.
pub const TOLERANCE_ENV: &str = "CPT_TOLERANCE";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub tolerances: Option<Tolerances>,
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub k: Option<f64>,
    pub n: Option<OneOrMany>,
    pub max_c: Option<f64>,
    pub signs: Option<bool>,
    #[serde(rename = "N", alias = "depth")]
    pub depth: Option<usize>,
    pub matrix: Option<bool>,
    pub budget: Option<u64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub absolute_time: Option<bool>,
    pub format: Option<Format>,
    pub variant: Option<RetroVariant>,
}

/// `n` is a single dimension for most commands and a list for `suite`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn single(&self) -> Result<usize, CliError> {
        match self {
            Self::One(n) => Ok(*n),
            Self::Many(v) if v.len() == 1 => Ok(v[0]),
            Self::Many(_) => Err(CliError::usage("config field `n`: expected a single dimension")),
        }
    }

    pub fn list(&self) -> Vec<usize> {
        match self {
            Self::One(n) => vec![*n],
            Self::Many(v) => v.clone(),
        }
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
    }
}

/// Tolerances with precedence: flag, then environment, then config file,
/// then built-in defaults. The flag and the environment variable only set
/// the CPT pass tolerance.
pub fn resolve_tolerances(
    flag: Option<f64>,
    env: Option<String>,
    file: Option<Tolerances>,
) -> Result<Tolerances, CliError> {
    let mut tol = file.unwrap_or_default();
    let env = match env {
        Some(raw) => Some(
            raw.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("{TOLERANCE_ENV}: cannot parse {raw:?} as a number")))?,
        ),
        None => None,
    };
    if let Some(cpt) = flag.or(env) {
        tol.cpt = cpt;
    }
    for (name, v) in [("hermitian", tol.hermitian), ("unitary", tol.unitary), ("cpt", tol.cpt)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::usage(format!("tolerance `{name}` must be a positive number, got {v}")));
        }
    }
    Ok(tol)
}
