//! JSON run configuration.
//!
//! Precedence is command-line flag > configuration file > built-in default.
//! Every section is optional; any key not listed here is rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cavity_modes::CylinderGeometry;
use crate::constants::{
    He3Properties, HeliumProperties, MaterialOverride, MaterialRegistry, HELIUM4,
};
use crate::error::{positive, ModelError, Result};
use crate::microwave::{MicrowaveCavity, NoiseBudgetCalibration};
use crate::thermal::{ThermalNetwork, WireGeometry};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Text,
}

/// Assumed fridge plate temperatures behind the two heat-leak anchors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeatLeakBases {
    pub heatleak_base_40mk: f64,
    pub heatleak_base_10mk: f64,
}

impl Default for HeatLeakBases {
    fn default() -> Self {
        Self {
            heatleak_base_40mk: 0.020,
            heatleak_base_10mk: 0.006,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Overrides of registry solids, keyed by material name.
    pub materials: BTreeMap<String, MaterialOverride>,
    pub helium4: HeliumProperties,
    pub he3: He3Properties,
    pub geometry: CylinderGeometry,
    pub wire: WireGeometry,
    pub cavity: MicrowaveCavity,
    pub noise: NoiseBudgetCalibration,
    pub bases: HeatLeakBases,
    pub output: OutputFormat,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| ModelError::Configuration(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.materials.contains_key(HELIUM4) {
            return Err(ModelError::Configuration(
                "set helium-4 parameters in the `helium4` section, not under `materials`".into(),
            ));
        }
        self.registry()?;
        self.geometry.validate()?;
        self.wire.validate()?;
        self.cavity.validate()?;
        self.noise.validate()?;
        positive("heatleak_base_40mk", self.bases.heatleak_base_40mk)?;
        positive("heatleak_base_10mk", self.bases.heatleak_base_10mk)?;
        Ok(())
    }

    pub fn registry(&self) -> Result<MaterialRegistry> {
        MaterialRegistry::default()
            .with_helium(self.helium4, self.he3)?
            .with_overrides(&self.materials)
    }

    pub fn thermal_network(&self) -> Result<ThermalNetwork> {
        let reg = self.registry()?;
        ThermalNetwork::new(
            self.geometry,
            self.wire.clone(),
            reg.lookup_material(&self.wire.material)?,
            reg.lookup_material(crate::constants::NIOBIUM)?,
            self.helium4,
        )
    }

    /// Fully resolved configuration: every registry entry spelled out.
    pub fn resolved(&self) -> Result<Self> {
        let reg = self.registry()?;
        Ok(Self {
            materials: reg.solid_overrides(),
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn partial_sections_fill_from_defaults() {
        let cfg = RunConfig::from_json(
            r#"{"he3": {"concentration_x": 2e-10}, "geometry": {"radius": 0.02}}"#,
        )
        .unwrap();
        assert_eq!(cfg.he3.concentration_x, 2e-10);
        assert_eq!(cfg.he3.sigma, 6e-20);
        assert_eq!(cfg.geometry.radius, 0.02);
        assert_eq!(cfg.geometry.length, 0.04);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"geometry": {"radius": 0.02, "height": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"colour": "red"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"materials": {"lead": {"rho": 1}}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"materials": {"helium4": {"rho": 1}}}"#).is_err());
    }

    #[test]
    fn invariants_enforced() {
        assert!(RunConfig::from_json(r#"{"geometry": {"radius": -1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"helium4": {"eps_r": 0.5}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"materials": {"copper": {"rrr": 0}}}"#).is_err());
    }

    #[test]
    fn resolved_round_trip() {
        let cfg = RunConfig::from_json(r#"{"materials": {"copper": {"rrr": 300}}}"#).unwrap();
        let dumped = cfg.resolved().unwrap().to_json();
        let again = RunConfig::from_json(&dumped).unwrap();
        assert_eq!(again.registry().unwrap(), cfg.registry().unwrap());
        assert_eq!(again.resolved().unwrap().to_json(), dumped);
    }
}
