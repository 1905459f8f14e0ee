//! Run configuration read from a single JSON file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::complexifier::{Complexifier, ComplexifierSpec, Tau};
use crate::error::{Error, Result};
use crate::group::{GroupModel, IrrepLabel};
use crate::quadrature::QuadratureSpec;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub geometry: Option<PathBuf>,
    pub norms: Option<PathBuf>,
    /// Norm table cache, read before and rewritten after every run that
    /// needs norms.
    pub cache: Option<PathBuf>,
    pub transform: Option<PathBuf>,
    pub semigroup: Option<PathBuf>,
    pub limit: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `"s1"`, `"torus:<n>"` or `"su2"`.
    pub model: String,
    pub complexifier: ComplexifierSpec,
    pub taus: Vec<Tau>,
    #[serde(default = "default_cutoff")]
    pub irrep_cutoff: f64,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    /// Random phase-space points per `τ` in `geometry-check`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Half-width of the fibre box the sample points are drawn from.
    #[serde(default = "default_half_width")]
    pub sample_half_width: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: OutputPaths,
}

fn default_cutoff() -> f64 {
    2.0
}

fn default_samples() -> usize {
    20
}

fn default_half_width() -> f64 {
    1.2
}

/// A configuration with every referenced object constructed and checked.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub config: RunConfig,
    pub model: GroupModel,
    pub complexifier: Complexifier,
    pub irreps: Vec<IrrepLabel>,
    /// Distinct `τ₂` values of `taus`, increasing.
    pub tau2s: Vec<f64>,
    base_dir: PathBuf,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Prepared> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text)?.prepare(base)
    }

    /// Validates every field; relative output paths are resolved against
    /// `base_dir`.
    pub fn prepare(self, base_dir: PathBuf) -> Result<Prepared> {
        let model = GroupModel::from_name(&self.model)?;
        let complexifier = Complexifier::new(self.complexifier.clone(), &model)?;
        if self.taus.is_empty() {
            return Err(Error::InvalidConfig("taus must not be empty".into()));
        }
        for t in &self.taus {
            Tau::new(t.tau1, t.tau2)?;
            if t.tau2 <= 0.0 {
                return Err(Error::InvalidConfig(format!("tau2 must be positive, got {}", t.tau2)));
            }
        }
        if !(self.irrep_cutoff >= 0.0 && self.irrep_cutoff.is_finite()) {
            return Err(Error::InvalidConfig(format!("irrep_cutoff must be nonnegative, got {}", self.irrep_cutoff)));
        }
        self.quadrature.validate()?;
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be positive".into()));
        }
        if !(self.sample_half_width > 0.0 && self.sample_half_width.is_finite()) {
            return Err(Error::InvalidConfig("sample_half_width must be positive".into()));
        }
        let irreps = model.catalog(self.irrep_cutoff);
        let tau2s: BTreeSet<u64> = self.taus.iter().map(|t| t.tau2.to_bits()).collect();
        let tau2s = tau2s.into_iter().map(f64::from_bits).collect();
        Ok(Prepared { config: self, model, complexifier, irreps, tau2s, base_dir })
    }
}

impl Prepared {
    pub fn resolve(&self, path: &Option<PathBuf>) -> Option<PathBuf> {
        path.as_ref().map(|p| if p.is_absolute() { p.clone() } else { self.base_dir.join(p) })
    }
}
