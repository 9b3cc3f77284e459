//! Analytic eigenmodes of the rigid right-circular cylinder.
//!
//! Acoustic pressure modes satisfy Neumann conditions on every wall, so the
//! radial wavenumber is `j'_{m,n}/R`. The electromagnetic TE011 mode of the
//! same cylinder uses the same root `j'_{0,1}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_prime_zero, bessel_zero, MAX_ORDER, MAX_ROOT_INDEX};
use crate::constants::UNIVERSAL;
use crate::error::{positive, ModelError, Result};

/// Longitudinal index ceiling for mode tables.
pub const MAX_LONGITUDINAL: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CylinderGeometry {
    pub radius: f64,
    pub length: f64,
}

impl Default for CylinderGeometry {
    fn default() -> Self {
        Self {
            radius: 0.018,
            length: 0.040,
        }
    }
}

impl CylinderGeometry {
    pub fn new(radius: f64, length: f64) -> Result<Self> {
        let g = Self { radius, length };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        positive("radius", self.radius)?;
        positive("length", self.length)?;
        Ok(())
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    /// Side wall plus both end caps, m².
    pub fn wetted_area(&self) -> f64 {
        2.0 * PI * self.radius * self.length + 2.0 * PI * self.radius * self.radius
    }

    pub fn volume(&self) -> f64 {
        PI * self.radius * self.radius * self.length
    }
}

/// Acoustic mode `(m, n, l)`: azimuthal, radial and longitudinal indices.
///
/// `n = 0` is only valid with `m = 0` and denotes the trivial radial root,
/// i.e. a pure longitudinal (plane-wave) mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcousticMode {
    pub m: u32,
    pub n: u32,
    pub l: u32,
    pub frequency_hz: f64,
    pub radial_node_radii: Vec<f64>,
}

fn radial_root(m: u32, n: u32) -> Result<f64> {
    if n == 0 {
        if m == 0 {
            return Ok(0.0);
        }
        return Err(ModelError::Range(format!(
            "radial index n=0 is only defined for m=0, got m={m}"
        )));
    }
    bessel_prime_zero(m, n)
}

pub fn acoustic_mode_frequency(
    geom: &CylinderGeometry,
    c: f64,
    m: u32,
    n: u32,
    l: u32,
) -> Result<f64> {
    geom.validate()?;
    positive("sound speed", c)?;
    let root = radial_root(m, n)?;
    if root == 0.0 && l == 0 {
        return Err(ModelError::Range("mode (0,0,0) has zero wavenumber".into()));
    }
    let kr = root / geom.radius;
    let kz = PI * l as f64 / geom.length;
    Ok(c / (2.0 * PI) * (kr * kr + kz * kz).sqrt())
}

/// Radii strictly inside the cell where the `(m, n)` pressure pattern vanishes.
pub fn radial_pressure_nodes(geom: &CylinderGeometry, m: u32, n: u32) -> Result<Vec<f64>> {
    geom.validate()?;
    let root = radial_root(m, n)?;
    let mut nodes = Vec::new();
    for k in 1..=MAX_ROOT_INDEX {
        let z = bessel_zero(m, k)?;
        if z >= root {
            break;
        }
        nodes.push(geom.radius * z / root);
    }
    Ok(nodes)
}

/// All supported modes with frequency at or below `f_max`, ascending.
pub fn acoustic_mode_table(
    geom: &CylinderGeometry,
    c: f64,
    f_max: f64,
) -> Result<Vec<AcousticMode>> {
    positive("f_max", f_max)?;
    let mut modes = Vec::new();
    for m in 0..=MAX_ORDER {
        let n_min = if m == 0 { 0 } else { 1 };
        for n in n_min..=MAX_ROOT_INDEX {
            for l in 0..=MAX_LONGITUDINAL {
                if m == 0 && n == 0 && l == 0 {
                    continue;
                }
                let f = acoustic_mode_frequency(geom, c, m, n, l)?;
                if f > f_max {
                    break;
                }
                modes.push(AcousticMode {
                    m,
                    n,
                    l,
                    frequency_hz: f,
                    radial_node_radii: radial_pressure_nodes(geom, m, n)?,
                });
            }
        }
    }
    modes.sort_by(|a, b| {
        a.frequency_hz
            .total_cmp(&b.frequency_hz)
            .then((a.m, a.n, a.l).cmp(&(b.m, b.n, b.l)))
    });
    Ok(modes)
}

/// TE011 resonance of the cylinder filled with a dielectric of permittivity `eps_r`.
pub fn te011_frequency(geom: &CylinderGeometry, eps_r: f64) -> Result<f64> {
    geom.validate()?;
    if !(eps_r.is_finite() && eps_r >= 1.0) {
        return Err(ModelError::Domain {
            what: "eps_r",
            requirement: ">= 1",
            value: eps_r,
        });
    }
    let kr = bessel_prime_zero(0, 1)? / geom.radius;
    let kz = PI / geom.length;
    Ok(UNIVERSAL.c_light / (2.0 * PI * eps_r.sqrt()) * (kr * kr + kz * kz).sqrt())
}
