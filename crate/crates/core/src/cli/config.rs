//! JSON run configuration files.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{RunConfig, DEFAULT_BINS};
use crate::pf::{BeamSpec, SlitGeometry};
use crate::sampler::DEFAULT_CDF_RESOLUTION;
use crate::trajectory::PropagationMode;
use crate::wavefield::{DensityMode, FieldParams, DEFAULT_EPSILON};

pub const ELECTRON_JSON: &str = include_str!("../../configs/electron.json");
pub const NEON_JSON: &str = include_str!("../../configs/neon.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda0_m: f64,
    pub mass_kg: f64,
    pub a0: f64,
    /// Entire-field amplitude; defaults to `1e-4 λ₀`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_f_m: Option<f64>,
    pub slit_width_m: f64,
    pub slit_separation_m: f64,
    pub screen_distance_m: f64,
    pub theta_max_rad: f64,
    pub n_particles: u64,
    pub seed: u64,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_density_mode")]
    pub density_mode: DensityMode,
    #[serde(default = "default_propagation_mode")]
    pub propagation_mode: PropagationMode,
}

fn default_bins() -> usize {
    DEFAULT_BINS
}

fn default_density_mode() -> DensityMode {
    DensityMode::Approximate
}

fn default_propagation_mode() -> PropagationMode {
    PropagationMode::Paper
}

impl ConfigFile {
    /// Parses JSON text. Errors quote the offending line.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let line = e.line();
            let context = text.lines().nth(line.saturating_sub(1)).unwrap_or("").trim();
            Error::Parse(format!("line {line}, column {}: {e} (near `{context}`)", e.column()))
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds and validates the run configuration.
    pub fn to_run_config(&self) -> Result<RunConfig> {
        let input = |e: Error| Error::Config(e.to_string());
        let beam = BeamSpec::new(self.lambda0_m, self.mass_kg, self.a0).map_err(input)?;
        if !(self.slit_separation_m >= 0.0) {
            return Err(Error::Config(format!(
                "slit_separation_m must be non-negative, got {}",
                self.slit_separation_m
            )));
        }
        let geometry = SlitGeometry::symmetric(self.slit_width_m, self.slit_separation_m, self.screen_distance_m)
            .map_err(input)?;
        let field = match self.c_f_m {
            Some(c_f) => FieldParams::new(c_f, DEFAULT_EPSILON).map_err(input)?,
            None => FieldParams::default_for(&beam),
        };
        let config = RunConfig {
            beam,
            geometry,
            field,
            theta_max: self.theta_max_rad,
            n_particles: self.n_particles,
            seed: self.seed,
            density_mode: self.density_mode,
            propagation_mode: self.propagation_mode,
            bins: self.bins,
            cdf_resolution: DEFAULT_CDF_RESOLUTION,
        };
        config.validate()?;
        Ok(config)
    }
}
