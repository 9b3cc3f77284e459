//! Physical constants, fluid parameters and the solid-material registry.
//!
//! All quantities are SI. Every parameter used by the attenuation, cavity,
//! thermal and readout models is read from a value defined here, so a
//! configuration override in one place reaches every formula.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{positive, ModelError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Speed of light in vacuum, m/s.
    pub c_light: f64,
    /// Unified atomic mass unit, kg.
    pub atomic_mass_unit: f64,
    /// Sommerfeld value of the Lorenz number, W·Ω/K².
    pub lorenz_number: f64,
}

/// CODATA 2018 values.
pub const UNIVERSAL: UniversalConstants = UniversalConstants {
    hbar: 1.054_571_817e-34,
    k_b: 1.380_649e-23,
    c_light: 299_792_458.0,
    atomic_mass_unit: 1.660_539_066_60e-27,
    lorenz_number: 2.44e-8,
};

/// Bulk superfluid helium-4 parameters, treated as temperature independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeliumProperties {
    /// Density, kg/m³.
    pub rho4: f64,
    /// First-sound velocity, m/s.
    pub c4: f64,
    #[serde(rename = "gruneisen_G")]
    pub gruneisen: f64,
    /// Dispersion curvature of low-momentum phonons, (s/(kg·m))². Negative.
    pub gamma_dispersion: f64,
    /// Thermal phonon relaxation rate coefficient: 1/τ = tau_coeff·T⁵, s⁻¹K⁻⁵.
    pub tau_coeff: f64,
    /// Relative microwave permittivity of the liquid.
    pub eps_r: f64,
    /// Atomic mass of ⁴He, kg.
    pub m4: f64,
}

impl Default for HeliumProperties {
    fn default() -> Self {
        Self {
            rho4: 145.0,
            c4: 238.0,
            gruneisen: 2.84,
            gamma_dispersion: -1.0e48,
            tau_coeff: 0.9e7,
            // Places the filled TE011 resonance at 10.53 GHz for the default cell.
            eps_r: 1.0565,
            m4: 4.002_602 * UNIVERSAL.atomic_mass_unit,
        }
    }
}

impl HeliumProperties {
    pub fn validate(&self) -> Result<()> {
        positive("rho4", self.rho4)?;
        positive("c4", self.c4)?;
        positive("gruneisen_G", self.gruneisen)?;
        positive("tau_coeff", self.tau_coeff)?;
        positive("m4", self.m4)?;
        if !(self.gamma_dispersion.is_finite() && self.gamma_dispersion < 0.0) {
            return Err(ModelError::Domain {
                what: "gamma_dispersion",
                requirement: "finite and < 0",
                value: self.gamma_dispersion,
            });
        }
        if !(self.eps_r.is_finite() && self.eps_r >= 1.0) {
            return Err(ModelError::Domain {
                what: "eps_r",
                requirement: ">= 1",
                value: self.eps_r,
            });
        }
        Ok(())
    }

    /// Number density of ⁴He atoms, m⁻³.
    pub fn number_density(&self) -> f64 {
        self.rho4 / self.m4
    }

    /// The liquid seen as an acoustic medium.
    pub fn as_material(&self) -> MaterialProperties {
        MaterialProperties {
            name: HELIUM4.to_string(),
            rho: self.rho4,
            c_sound: self.c4,
            rrr: None,
            resistivity_300k: None,
        }
    }
}

/// Dilute ³He impurity parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct He3Properties {
    /// Scattering cross section πd², m².
    pub sigma: f64,
    /// m₃*/m₃ at zero concentration.
    pub mass_ratio_effective: f64,
    /// Bare atomic mass of ³He, kg.
    pub m3: f64,
    /// Number ratio n₃/n₄.
    pub concentration_x: f64,
}

impl Default for He3Properties {
    fn default() -> Self {
        Self {
            sigma: 6.0e-20,
            mass_ratio_effective: 2.34,
            m3: 3.016_029 * UNIVERSAL.atomic_mass_unit,
            // natural abundance
            concentration_x: 1.0e-6,
        }
    }
}

impl He3Properties {
    pub fn validate(&self) -> Result<()> {
        positive("sigma", self.sigma)?;
        positive("mass_ratio_effective", self.mass_ratio_effective)?;
        positive("m3", self.m3)?;
        if !(self.concentration_x.is_finite() && (0.0..=1.0).contains(&self.concentration_x)) {
            return Err(ModelError::Domain {
                what: "concentration_x",
                requirement: "within [0, 1]",
                value: self.concentration_x,
            });
        }
        Ok(())
    }

    pub fn effective_mass(&self) -> f64 {
        self.mass_ratio_effective * self.m3
    }

    pub fn with_concentration(self, concentration_x: f64) -> Self {
        Self {
            concentration_x,
            ..self
        }
    }
}

/// A solid (or fluid seen as a solid-like acoustic medium) in the registry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialProperties {
    pub name: String,
    /// Mass density, kg/m³.
    pub rho: f64,
    /// Longitudinal sound velocity, m/s.
    pub c_sound: f64,
    /// Residual resistivity ratio (metals only).
    pub rrr: Option<f64>,
    /// Room-temperature electrical resistivity, Ω·m (metals only).
    pub resistivity_300k: Option<f64>,
}

impl MaterialProperties {
    pub fn validate(&self) -> Result<()> {
        positive("rho", self.rho)?;
        positive("c_sound", self.c_sound)?;
        if let Some(rrr) = self.rrr {
            positive("rrr", rrr)?;
        }
        if let Some(r) = self.resistivity_300k {
            positive("resistivity_300k", r)?;
        }
        Ok(())
    }
}

pub const HELIUM4: &str = "helium4";
pub const NIOBIUM: &str = "niobium";
pub const COPPER: &str = "copper";

/// Partial update of a registry entry, as read from a configuration file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_sound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rrr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resistivity_300k: Option<f64>,
}

/// Immutable lookup table of material parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRegistry {
    helium4: HeliumProperties,
    helium3: He3Properties,
    solids: BTreeMap<String, MaterialProperties>,
}

impl Default for MaterialRegistry {
    fn default() -> Self {
        let mut solids = BTreeMap::new();
        solids.insert(
            NIOBIUM.to_string(),
            MaterialProperties {
                name: NIOBIUM.to_string(),
                rho: 8570.0,
                c_sound: 3480.0,
                rrr: None,
                resistivity_300k: None,
            },
        );
        solids.insert(
            COPPER.to_string(),
            MaterialProperties {
                name: COPPER.to_string(),
                rho: 8960.0,
                c_sound: 4760.0,
                // reproduces a ~1e4 K/W suspension wire at 40 mK
                rrr: Some(90.0),
                resistivity_300k: Some(1.7e-8),
            },
        );
        Self {
            helium4: HeliumProperties::default(),
            helium3: He3Properties::default(),
            solids,
        }
    }
}

impl MaterialRegistry {
    /// Builds a registry from explicit parts, validating every entry.
    pub fn new(
        helium4: HeliumProperties,
        helium3: He3Properties,
        solids: impl IntoIterator<Item = MaterialProperties>,
    ) -> Result<Self> {
        helium4.validate()?;
        helium3.validate()?;
        let mut map = BTreeMap::new();
        for m in solids {
            m.validate()?;
            if m.name == HELIUM4 {
                return Err(ModelError::Configuration(
                    "helium4 is defined by the helium4 section, not as a solid".into(),
                ));
            }
            map.insert(m.name.clone(), m);
        }
        Ok(Self {
            helium4,
            helium3,
            solids: map,
        })
    }

    pub fn lookup_material(&self, name: &str) -> Result<MaterialProperties> {
        if name == HELIUM4 {
            return Ok(self.helium4.as_material());
        }
        self.solids
            .get(name)
            .cloned()
            .ok_or_else(|| ModelError::UnknownMaterial(name.to_string()))
    }

    pub fn helium4(&self) -> &HeliumProperties {
        &self.helium4
    }

    pub fn helium3(&self) -> &He3Properties {
        &self.helium3
    }

    /// Registered solid names, in sorted order. Does not include helium4.
    pub fn solid_names(&self) -> impl Iterator<Item = &str> {
        self.solids.keys().map(String::as_str)
    }

    /// Returns a copy with `overrides` applied on top of the existing entries.
    ///
    /// A `helium4` key updates `rho4`/`c4`. Unknown names are rejected.
    pub fn with_overrides(&self, overrides: &BTreeMap<String, MaterialOverride>) -> Result<Self> {
        let mut next = self.clone();
        for (name, ov) in overrides {
            if name == HELIUM4 {
                if ov.rrr.is_some() || ov.resistivity_300k.is_some() {
                    return Err(ModelError::Configuration(
                        "helium4 accepts only rho and c_sound overrides".into(),
                    ));
                }
                if let Some(rho) = ov.rho {
                    next.helium4.rho4 = rho;
                }
                if let Some(c) = ov.c_sound {
                    next.helium4.c4 = c;
                }
                next.helium4.validate()?;
                continue;
            }
            let entry = next
                .solids
                .get_mut(name)
                .ok_or_else(|| ModelError::UnknownMaterial(name.clone()))?;
            if let Some(v) = ov.rho {
                entry.rho = v;
            }
            if let Some(v) = ov.c_sound {
                entry.c_sound = v;
            }
            if ov.rrr.is_some() {
                entry.rrr = ov.rrr;
            }
            if ov.resistivity_300k.is_some() {
                entry.resistivity_300k = ov.resistivity_300k;
            }
            entry.validate()?;
        }
        Ok(next)
    }

    pub fn with_helium(
        mut self,
        helium4: HeliumProperties,
        helium3: He3Properties,
    ) -> Result<Self> {
        helium4.validate()?;
        helium3.validate()?;
        self.helium4 = helium4;
        self.helium3 = helium3;
        Ok(self)
    }

    /// Every solid entry as a full override, suitable for dumping.
    pub fn solid_overrides(&self) -> BTreeMap<String, MaterialOverride> {
        self.solids
            .iter()
            .map(|(k, m)| {
                (
                    k.clone(),
                    MaterialOverride {
                        rho: Some(m.rho),
                        c_sound: Some(m.c_sound),
                        rrr: m.rrr,
                        resistivity_300k: m.resistivity_300k,
                    },
                )
            })
            .collect()
    }
}
