use std::f64::consts::PI;

use super::config::RunConfig;
use super::table::{Cell, Table};
use super::{CliError, Command, ConfigCommand, RingdownCommand};
use crate::attenuation::{combined_q, temperature_from_q, ModePoint};
use crate::cavity_modes::{acoustic_mode_table, radial_pressure_nodes, te011_frequency};
use crate::error::{positive, ModelError};
use crate::microwave::{intracavity_photons, phase_noise_requirement};
use crate::ringdown::{
    drop_filter_transient, envelope, fit_decay, synthesize, RingdownTrace, SynthesisMode,
    SynthesisParams,
};

type CmdResult = Result<String, CliError>;

pub(super) fn dispatch(cmd: &Command, cfg: &RunConfig) -> CmdResult {
    let table = match cmd {
        Command::Qcurve {
            freq,
            tmin,
            tmax,
            points,
            x3,
            size,
        } => qcurve(cfg, *freq, *tmin, *tmax, *points, *x3, *size)?,
        Command::InvertQ { q, freq } => {
            let t = temperature_from_q(*q, *freq, &cfg.helium4)?;
            let mut table = Table::new(&["Q", "freq_hz", "T_K"]);
            table.push(vec![(*q).into(), (*freq).into(), t.into()]);
            table
        }
        Command::Modes { fmax } => {
            let mut table = Table::new(&["m", "n", "l", "frequency_hz", "node_radii_m"]);
            for mode in acoustic_mode_table(&cfg.geometry, cfg.helium4.c4, *fmax)? {
                table.push(vec![
                    mode.m.into(),
                    mode.n.into(),
                    mode.l.into(),
                    mode.frequency_hz.into(),
                    Cell::NumList(mode.radial_node_radii),
                ]);
            }
            table
        }
        Command::Nodes { m, n } => {
            let mut table = Table::new(&["m", "n", "node", "radius_m", "radius_over_R"]);
            for (k, r) in radial_pressure_nodes(&cfg.geometry, *m, *n)?
                .into_iter()
                .enumerate()
            {
                table.push(vec![
                    (*m).into(),
                    (*n).into(),
                    (k + 1).into(),
                    r.into(),
                    (r / cfg.geometry.radius).into(),
                ]);
            }
            table
        }
        Command::Te011 { eps_r } => {
            let eps = eps_r.unwrap_or(cfg.helium4.eps_r);
            let mut table = Table::new(&["eps_r", "frequency_hz"]);
            table.push(vec![
                eps.into(),
                te011_frequency(&cfg.geometry, eps)?.into(),
            ]);
            table
        }
        Command::Thermal { temperature, base } => thermal(cfg, *temperature, *base)?,
        Command::Photons { power, detuning_hz } => {
            let detuning = 2.0 * PI * detuning_hz;
            let n = intracavity_photons(*power, detuning, &cfg.cavity)?;
            let mut table = Table::new(&["power_W", "detuning_hz", "pump_hz", "photons"]);
            table.push(vec![
                (*power).into(),
                (*detuning_hz).into(),
                ((cfg.cavity.omega_c - detuning) / (2.0 * PI)).into(),
                n.into(),
            ]);
            table
        }
        Command::NoiseBudget { temperature, q } => {
            let l = phase_noise_requirement(*temperature, *q, &cfg.noise)?;
            let mut table = Table::new(&["T_K", "Q", "offset_hz", "phase_noise_dBc_Hz"]);
            table.push(vec![
                (*temperature).into(),
                (*q).into(),
                cfg.noise.offset_hz.into(),
                l.into(),
            ]);
            table
        }
        Command::Ringdown(RingdownCommand::Simulate {
            freq,
            q,
            a0,
            fs,
            duration,
            noise,
            seed,
            envelope,
        }) => {
            let trace = synthesize(&SynthesisParams {
                frequency_hz: *freq,
                q: *q,
                amplitude0: *a0,
                sample_rate: *fs,
                duration: *duration,
                noise_rms: *noise,
                seed: *seed,
                mode: if *envelope {
                    SynthesisMode::Envelope
                } else {
                    SynthesisMode::Carrier
                },
            })?;
            let mut table = Table::new(&["time_s", "amplitude"]);
            for (t, a) in trace.times().zip(&trace.samples) {
                table.push(vec![t.into(), (*a).into()]);
            }
            table
        }
        Command::Ringdown(RingdownCommand::Fit {
            input,
            freq,
            demod_bandwidth,
        }) => {
            let text = std::fs::read_to_string(input).map_err(|source| CliError::Io {
                path: input.display().to_string(),
                source,
            })?;
            let mut trace = RingdownTrace::from_csv(&text)?;
            if let Some(bw) = demod_bandwidth {
                trace = drop_filter_transient(&envelope(&trace, *freq, *bw)?, *bw)?;
            }
            let fit = fit_decay(&trace, *freq)?;
            let mut table = Table::new(&[
                "tau_s",
                "Q",
                "amplitude0",
                "sigma_tau_s",
                "sigma_Q",
                "rms_residual",
                "points",
            ]);
            table.push(vec![
                fit.tau_amp.into(),
                fit.q.into(),
                fit.amplitude0.into(),
                fit.sigma_tau.into(),
                fit.sigma_q.into(),
                fit.rms_residual.into(),
                fit.points_used.into(),
            ]);
            table
        }
        Command::Config(ConfigCommand::Dump) => return Ok(cfg.resolved()?.to_json()),
    };
    Ok(table.render(cfg.output))
}

/// Log-spaced temperatures from `tmin` to exactly `tmax`.
pub(super) fn log_sweep(tmin: f64, tmax: f64, points: usize) -> Result<Vec<f64>, ModelError> {
    positive("tmin", tmin)?;
    positive("tmax", tmax)?;
    if points < 2 || tmax <= tmin {
        return Err(ModelError::Range(format!(
            "sweep needs tmin < tmax and at least 2 points, got [{tmin}, {tmax}] with {points}"
        )));
    }
    let ratio = (tmax / tmin).ln();
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                tmax
            } else {
                tmin * (ratio * i as f64 / last).exp()
            }
        })
        .collect())
}

fn qcurve(
    cfg: &RunConfig,
    freq: f64,
    tmin: f64,
    tmax: f64,
    points: usize,
    x3: Option<f64>,
    size: Option<f64>,
) -> Result<Table, CliError> {
    let he3 = match x3 {
        Some(x) => cfg.he3.with_concentration(x),
        None => cfg.he3,
    };
    he3.validate()?;
    let d = size.unwrap_or(cfg.geometry.diameter());
    let mut table = Table::new(&[
        "T_K",
        "alpha_3pp",
        "alpha_he3",
        "Q_3pp",
        "Q_he3",
        "Q_total",
        "validity",
    ]);
    for t in log_sweep(tmin, tmax, points)? {
        let point = ModePoint::new(freq, t)?;
        let c = combined_q(&point, &he3, &cfg.helium4, d)?;
        let (p3, h3) = (&c.mechanisms[0], &c.mechanisms[1]);
        table.push(vec![
            t.into(),
            p3.alpha.into(),
            h3.alpha.into(),
            p3.q.into(),
            h3.q.into(),
            c.total.q.into(),
            c.total.validity.as_str().into(),
        ]);
    }
    Ok(table)
}

fn thermal(
    cfg: &RunConfig,
    temperature: Option<f64>,
    base: Option<f64>,
) -> Result<Table, CliError> {
    let net = cfg.thermal_network()?;
    let cases = match temperature {
        Some(t) => vec![(t, base.unwrap_or(cfg.bases.heatleak_base_40mk))],
        None => vec![
            (0.040, cfg.bases.heatleak_base_40mk),
            (0.010, cfg.bases.heatleak_base_10mk),
        ],
    };
    let mut table = Table::new(&[
        "T_K",
        "base_K",
        "R_kapitza_K_per_W",
        "R_wire_K_per_W",
        "C_J_per_K",
        "tau_s",
        "heat_leak_W",
    ]);
    for (t, b) in cases {
        let r = net.report(t, b)?;
        table.push(vec![
            t.into(),
            b.into(),
            r.r_kapitza.into(),
            r.r_wire.into(),
            r.heat_capacity.into(),
            r.time_constant.into(),
            r.q_dot.into(),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_endpoints_exact() {
        let t = log_sweep(0.04, 0.7, 200).unwrap();
        assert_eq!(t.len(), 200);
        assert_eq!(t[0], 0.04);
        assert_eq!(t[199], 0.7);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        // constant ratio between neighbours
        let r0 = t[1] / t[0];
        assert!(t
            .windows(2)
            .all(|w| ((w[1] / w[0]) / r0 - 1.0).abs() < 1e-12));
    }

    #[test]
    fn sweep_rejects_degenerate() {
        assert!(log_sweep(0.04, 0.7, 1).is_err());
        assert!(log_sweep(0.7, 0.04, 10).is_err());
        assert!(log_sweep(0.0, 0.7, 10).is_err());
    }
}
