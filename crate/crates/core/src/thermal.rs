//! Thermalization of the helium sample.
//!
//! The cell is modeled as a series network from the fridge plate to the
//! liquid: suspension wire, niobium wall (taken as a perfect conductor) and
//! the Kapitza boundary between wall and helium. Both active resistances fall
//! with temperature; each is evaluated at the mean temperature of its segment.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cavity_modes::CylinderGeometry;
use crate::constants::{HeliumProperties, MaterialProperties, COPPER, UNIVERSAL};
use crate::error::{positive, ModelError, Result};

pub const STEADY_STATE_REL_TOL: f64 = 1e-6;
pub const STEADY_STATE_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WireGeometry {
    pub diameter: f64,
    pub length: f64,
    /// Registry name of the wire metal.
    pub material: String,
}

impl Default for WireGeometry {
    fn default() -> Self {
        Self {
            diameter: 0.0013,
            length: 0.067,
            material: COPPER.to_string(),
        }
    }
}

impl WireGeometry {
    pub fn validate(&self) -> Result<()> {
        positive("wire diameter", self.diameter)?;
        positive("wire length", self.length)?;
        Ok(())
    }

    pub fn cross_section(&self) -> f64 {
        PI * self.diameter * self.diameter / 4.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalReport {
    pub r_kapitza: f64,
    pub r_wire: f64,
    pub heat_capacity: f64,
    pub time_constant: f64,
    pub t_helium: f64,
    pub q_dot: f64,
}

/// Acoustic-mismatch boundary resistance between a solid and the liquid, K/W.
pub fn kapitza_resistance(
    temperature: f64,
    area: f64,
    solid: &MaterialProperties,
    fluid: &HeliumProperties,
) -> Result<f64> {
    positive("temperature", temperature)?;
    positive("area", area)?;
    let (hbar, kb) = (UNIVERSAL.hbar, UNIVERSAL.k_b);
    Ok(15.0 * hbar.powi(3) * solid.rho * solid.c_sound.powi(3)
        / (2.0 * PI * PI * kb.powi(4) * temperature.powi(3) * fluid.rho4 * fluid.c4 * area))
}

/// Phonon heat capacity of a volume of liquid, J/K.
pub fn helium_heat_capacity(
    temperature: f64,
    volume: f64,
    fluid: &HeliumProperties,
) -> Result<f64> {
    positive("temperature", temperature)?;
    positive("volume", volume)?;
    let x = UNIVERSAL.k_b * temperature / (UNIVERSAL.hbar * fluid.c4);
    Ok(2.0 * PI * PI / 15.0 * UNIVERSAL.k_b * x.powi(3) * volume)
}

/// Wiedemann–Franz thermal resistance of a normal-metal wire, K/W.
pub fn wire_thermal_resistance(
    temperature: f64,
    wire: &WireGeometry,
    metal: &MaterialProperties,
) -> Result<f64> {
    positive("temperature", temperature)?;
    wire.validate()?;
    let (rrr, rho300) = match (metal.rrr, metal.resistivity_300k) {
        (Some(r), Some(p)) => (r, p),
        _ => {
            return Err(ModelError::Configuration(format!(
                "material `{}` needs rrr and resistivity_300k for a wire",
                metal.name
            )))
        }
    };
    let residual = rho300 / rrr;
    let kappa = UNIVERSAL.lorenz_number * temperature / residual;
    Ok(wire.length / (kappa * wire.cross_section()))
}

/// `R_k·C` for the cell; independent of temperature.
pub fn thermal_time_constant(
    temperature: f64,
    geom: &CylinderGeometry,
    solid: &MaterialProperties,
    fluid: &HeliumProperties,
) -> Result<f64> {
    geom.validate()?;
    Ok(
        kapitza_resistance(temperature, geom.wetted_area(), solid, fluid)?
            * helium_heat_capacity(temperature, geom.volume(), fluid)?,
    )
}

/// Series network fridge plate → wire → wall → Kapitza boundary → helium.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalNetwork {
    pub geometry: CylinderGeometry,
    pub wire: WireGeometry,
    pub wire_metal: MaterialProperties,
    pub wall: MaterialProperties,
    pub fluid: HeliumProperties,
}

impl ThermalNetwork {
    pub fn new(
        geometry: CylinderGeometry,
        wire: WireGeometry,
        wire_metal: MaterialProperties,
        wall: MaterialProperties,
        fluid: HeliumProperties,
    ) -> Result<Self> {
        geometry.validate()?;
        wire.validate()?;
        // fail early on a metal without transport data
        wire_thermal_resistance(1.0, &wire, &wire_metal)?;
        Ok(Self {
            geometry,
            wire,
            wire_metal,
            wall,
            fluid,
        })
    }

    pub fn r_wire(&self, temperature: f64) -> Result<f64> {
        wire_thermal_resistance(temperature, &self.wire, &self.wire_metal)
    }

    pub fn r_kapitza(&self, temperature: f64) -> Result<f64> {
        kapitza_resistance(
            temperature,
            self.geometry.wetted_area(),
            &self.wall,
            &self.fluid,
        )
    }

    /// Heat carried by a segment whose resistance is evaluated at the mean temperature.
    fn segment_flow(&self, kapitza: bool, cold: f64, hot: f64) -> Result<f64> {
        let mean = 0.5 * (cold + hot);
        let r = if kapitza {
            self.r_kapitza(mean)?
        } else {
            self.r_wire(mean)?
        };
        Ok((hot - cold) / r)
    }

    /// Hot-side temperature of one segment carrying `q_dot` from `cold`.
    ///
    /// `hot − cold − q·R(mean)` is strictly increasing in `hot` because R falls
    /// with temperature, so the root is bracketed and bisected.
    fn segment_hot_side(&self, kapitza: bool, cold: f64, q_dot: f64) -> Result<f64> {
        if q_dot == 0.0 {
            return Ok(cold);
        }
        let residual = |hot: f64| -> Result<f64> {
            let mean = 0.5 * (cold + hot);
            let r = if kapitza {
                self.r_kapitza(mean)?
            } else {
                self.r_wire(mean)?
            };
            Ok(hot - cold - q_dot * r)
        };
        let mut hi = cold * 2.0;
        let mut grow = 0;
        while residual(hi)? < 0.0 {
            hi *= 2.0;
            grow += 1;
            if grow > 200 {
                return Err(ModelError::Convergence {
                    routine: "thermal segment bracketing",
                    iterations: grow,
                });
            }
        }
        let mut lo = cold;
        for _ in 0..STEADY_STATE_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if residual(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= STEADY_STATE_REL_TOL * mid {
                return Ok(0.5 * (lo + hi));
            }
        }
        Err(ModelError::Convergence {
            routine: "thermal segment solve",
            iterations: STEADY_STATE_MAX_ITER,
        })
    }

    /// Helium temperature when `q_dot` flows into the sample from a plate at `base`.
    pub fn steady_state_temperature(&self, base: f64, q_dot: f64) -> Result<f64> {
        positive("base temperature", base)?;
        crate::error::non_negative("heat load", q_dot)?;
        let wall = self.segment_hot_side(false, base, q_dot)?;
        self.segment_hot_side(true, wall, q_dot)
    }

    /// Heat load that holds the helium at `target` above a plate at `base`.
    pub fn required_heat_leak(&self, target: f64, base: f64) -> Result<f64> {
        positive("base temperature", base)?;
        positive("target temperature", target)?;
        if target <= base {
            return Err(ModelError::Domain {
                what: "target temperature",
                requirement: "above the base temperature",
                value: target,
            });
        }
        // Balance the two segment flows on the wall temperature.
        let imbalance = |wall: f64| -> Result<f64> {
            Ok(self.segment_flow(true, wall, target)? - self.segment_flow(false, base, wall)?)
        };
        let (mut lo, mut hi) = (base, target);
        for _ in 0..STEADY_STATE_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if imbalance(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= STEADY_STATE_REL_TOL * mid {
                // the boundary flow is the better-conditioned of the two
                return self.segment_flow(true, 0.5 * (lo + hi), target);
            }
        }
        Err(ModelError::Convergence {
            routine: "required heat leak",
            iterations: STEADY_STATE_MAX_ITER,
        })
    }

    pub fn time_constant(&self, temperature: f64) -> Result<f64> {
        thermal_time_constant(temperature, &self.geometry, &self.wall, &self.fluid)
    }

    /// Full budget for holding the helium at `target` above `base`.
    pub fn report(&self, target: f64, base: f64) -> Result<ThermalReport> {
        Ok(ThermalReport {
            r_kapitza: self.r_kapitza(target)?,
            r_wire: self.r_wire(target)?,
            heat_capacity: helium_heat_capacity(target, self.geometry.volume(), &self.fluid)?,
            time_constant: self.time_constant(target)?,
            t_helium: target,
            q_dot: self.required_heat_leak(target, base)?,
        })
    }
}
