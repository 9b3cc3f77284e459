//! Microwave readout: pump frequency plan, intracavity photon number and the
//! phase-noise floor needed to resolve thermal motion.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::UNIVERSAL;
use crate::error::{non_negative, positive, Result};

/// Loss rates are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MicrowaveCavity {
    pub omega_c: f64,
    pub kappa_int: f64,
    pub kappa_in: f64,
    pub kappa_out: f64,
}

impl Default for MicrowaveCavity {
    fn default() -> Self {
        Self {
            omega_c: 2.0 * PI * 10.6e9,
            kappa_int: 2.0 * PI * 31.0,
            kappa_in: 2.0 * PI * 230.0,
            kappa_out: 2.0 * PI * 230.0,
        }
    }
}

impl MicrowaveCavity {
    pub fn validate(&self) -> Result<()> {
        positive("omega_c", self.omega_c)?;
        positive("kappa_int", self.kappa_int)?;
        positive("kappa_in", self.kappa_in)?;
        positive("kappa_out", self.kappa_out)?;
        Ok(())
    }

    pub fn kappa_total(&self) -> f64 {
        self.kappa_int + self.kappa_in + self.kappa_out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyPlan {
    /// Red-detuned pump, rad/s.
    pub pump: f64,
    /// Upconverted sideband, rad/s; lands on the cavity resonance.
    pub sideband: f64,
    /// Pump coincides with the cavity (zero acoustic frequency).
    pub degenerate: bool,
}

pub fn frequency_plan(cavity: &MicrowaveCavity, f_he: f64) -> Result<FrequencyPlan> {
    non_negative("acoustic frequency", f_he)?;
    Ok(FrequencyPlan {
        pump: cavity.omega_c - 2.0 * PI * f_he,
        sideband: cavity.omega_c,
        degenerate: f_he == 0.0,
    })
}

/// Steady-state photon number for a drive of `power_in` watts at detuning
/// `detuning = ω_c − ω_p` through the input port.
pub fn intracavity_photons(power_in: f64, detuning: f64, cavity: &MicrowaveCavity) -> Result<f64> {
    non_negative("input power", power_in)?;
    let omega_p = cavity.omega_c - detuning;
    positive("pump frequency", omega_p)?;
    let flux = power_in / (UNIVERSAL.hbar * omega_p);
    let kt = cavity.kappa_total();
    Ok(flux * 4.0 * cavity.kappa_in / (kt * kt + 4.0 * detuning * detuning))
}

/// Reference point for the thermal-motion phase-noise requirement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseBudgetCalibration {
    pub t_ref: f64,
    pub q_ref: f64,
    /// dBc/Hz.
    pub l_ref: f64,
    pub offset_hz: f64,
}

impl Default for NoiseBudgetCalibration {
    fn default() -> Self {
        Self {
            t_ref: 0.014,
            q_ref: 1e10,
            l_ref: -143.0,
            offset_hz: 8000.0,
        }
    }
}

impl NoiseBudgetCalibration {
    pub fn validate(&self) -> Result<()> {
        positive("t_ref", self.t_ref)?;
        positive("q_ref", self.q_ref)?;
        positive("offset_hz", self.offset_hz)?;
        Ok(())
    }
}

/// Allowed source phase noise (dBc/Hz at the calibration offset).
///
/// The thermal sideband peak density grows as `T·Q_m` for a fixed mode, so
/// the tolerable noise floor moves 10 dB per decade of `T·Q_m`.
pub fn phase_noise_requirement(
    temperature: f64,
    q_m: f64,
    cal: &NoiseBudgetCalibration,
) -> Result<f64> {
    positive("temperature", temperature)?;
    positive("q_m", q_m)?;
    cal.validate()?;
    Ok(cal.l_ref + 10.0 * ((temperature * q_m) / (cal.t_ref * cal.q_ref)).log10())
}
