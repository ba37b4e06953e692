//! Versioned model persistence. Bundles are TOML text with every float
//! written in the shortest decimal form that parses back to the identical
//! bits, so save/load round-trips are exact.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use garmex_core::bench::{FittedModels, VarianceModel};
use garmex_core::gegenbauer::GarmaModel;
use garmex_core::ggarch::GGarchModel;
use garmex_core::llwnn::LlwnnModel;
use garmex_core::timeseries::MinMaxScaler;

use crate::failure::{CliFailure, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    /// SHA-256 of the input file the models were fitted on.
    pub input_digest: String,
    /// Seed as text (TOML integers are signed 64-bit).
    pub seed: String,
    pub created: String,
    pub config_digest: String,
    pub config: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LlwnnBundle {
    pub model: LlwnnModel,
    pub scaler: MinMaxScaler,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelBundle {
    pub schema_version: u32,
    pub label: String,
    /// Sampling step of the training input, seconds.
    pub step_seconds: i64,
    /// Truncation used for residual extraction and mean forecasts.
    pub truncation: usize,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub garma: Option<GarmaModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ggarch: Option<GGarchModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub llwnn: Option<LlwnnBundle>,
}

impl ModelBundle {
    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string_pretty(self)
            .map_err(|e| CliFailure::Numerical(format!("cannot serialize bundle: {e}")))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_toml()?)
            .map_err(|e| CliFailure::Data(format!("cannot write {}: {e}", path.display())))?;
        Ok(())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliFailure::Data(format!("cannot read {}: {e}", path.display())))?;
        let bundle: ModelBundle = toml::from_str(&text)
            .map_err(|e| CliFailure::Data(format!("{} is not a valid bundle: {e}", path.display())))?;
        if bundle.schema_version != SCHEMA_VERSION {
            return Err(CliFailure::Data(format!(
                "unknown bundle schema version {} (this build reads {})",
                bundle.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(bundle)
    }

    /// Reconstruct the runnable model pair from the persisted pieces.
    pub fn fitted_models(&self) -> CliResult<FittedModels> {
        let garma = self
            .garma
            .clone()
            .ok_or_else(|| CliFailure::Data("bundle holds no mean model".into()))?;
        let variance = if let Some(g) = &self.ggarch {
            VarianceModel::GGarch(g.clone())
        } else if let Some(l) = &self.llwnn {
            VarianceModel::Llwnn { model: l.model.clone(), scaler: l.scaler }
        } else {
            return Err(CliFailure::Data("bundle holds no variance model".into()));
        };
        Ok(FittedModels {
            garma,
            variance,
            label: self.label.clone(),
            truncation: self.truncation,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use garmex_core::gegenbauer::GegenbauerFactor;
    use garmex_core::ggarch::GGarchModel;

    fn sample_bundle() -> ModelBundle {
        let garma = GarmaModel {
            mu: -6.24e-5,
            ar: vec![0.0357],
            ma: vec![],
            factors: vec![
                GegenbauerFactor { d: 0.2657, nu: (2.0 * std::f64::consts::PI * 0.1295).cos() },
                GegenbauerFactor { d: 0.1238, nu: 1.0 / 3.0 },
            ],
            sigma2: 0.0835f64.powi(2),
        };
        let mut ggarch = GGarchModel::constant(0.0004);
        ggarch.beta = vec![0.1652];
        ggarch.psi = vec![0.1341];
        ggarch.variance_factors = vec![GegenbauerFactor { d: 0.2492, nu: 0.9937 }];
        ModelBundle {
            schema_version: SCHEMA_VERSION,
            label: "garma-ggarch".into(),
            step_seconds: 3600,
            truncation: 2000,
            provenance: Provenance {
                tool_version: "0.1.0".into(),
                input_digest: "sha256:abc".into(),
                seed: "42".into(),
                created: "2026-01-01T00:00:00".into(),
                config_digest: "sha256:def".into(),
                config: BTreeMap::new(),
            },
            garma: Some(garma),
            ggarch: Some(ggarch),
            llwnn: None,
        }
    }

    #[test]
    fn toml_round_trip_is_bit_exact() {
        let bundle = sample_bundle();
        let text = bundle.to_toml().unwrap();
        let reloaded: ModelBundle = toml::from_str(&text).unwrap();
        let garma_a = bundle.garma.as_ref().unwrap();
        let garma_b = reloaded.garma.as_ref().unwrap();
        assert_eq!(garma_a.mu.to_bits(), garma_b.mu.to_bits());
        assert_eq!(garma_a.sigma2.to_bits(), garma_b.sigma2.to_bits());
        for (a, b) in garma_a.factors.iter().zip(&garma_b.factors) {
            assert_eq!(a.d.to_bits(), b.d.to_bits());
            assert_eq!(a.nu.to_bits(), b.nu.to_bits());
        }
        // and the text itself is a fixed point of save(load(.))
        let second = reloaded.to_toml().unwrap();
        assert_eq!(text, second);
    }

    #[test]
    fn unknown_schema_is_rejected() {
        let mut bundle = sample_bundle();
        bundle.schema_version = 99;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.toml");
        std::fs::write(&path, bundle.to_toml().unwrap()).unwrap();
        assert!(ModelBundle::load(&path).is_err());
    }
}
