//! Free-decay (ringdown) measurement of an acoustic quality factor.
//!
//! Traces are uniformly sampled. A trace holds either the raw oscillation or
//! an amplitude envelope; `fit_decay` expects an envelope. The quality factor
//! convention is `Q = π·f·τ`, where `τ` is the amplitude 1/e time.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{non_negative, positive, ModelError, Result};
use crate::numfmt::sci;

pub const MIN_SAMPLES: usize = 16;
pub const CSV_HEADER: &str = "time_s,amplitude";

/// Reweighting passes after the initial sample-weighted fit.
const REWEIGHT_PASSES: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingdownTrace {
    pub sample_rate: f64,
    pub samples: Vec<f64>,
    pub start_time: f64,
}

impl RingdownTrace {
    pub fn new(sample_rate: f64, samples: Vec<f64>, start_time: f64) -> Result<Self> {
        positive("sample_rate", sample_rate)?;
        if !start_time.is_finite() {
            return Err(ModelError::Data("start_time must be finite".into()));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(ModelError::Data(format!(
                "trace has {} samples, need at least {MIN_SAMPLES}",
                samples.len()
            )));
        }
        Ok(Self {
            sample_rate,
            samples,
            start_time,
        })
    }

    pub fn time(&self, index: usize) -> f64 {
        self.start_time + index as f64 / self.sample_rate
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(|i| self.time(i))
    }

    pub fn with_start_time(mut self, start_time: f64) -> Self {
        self.start_time = start_time;
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.samples.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (t, a) in self.times().zip(&self.samples) {
            let _ = writeln!(out, "{},{}", sci(t), sci(*a));
        }
        out
    }

    /// Parses the `time_s,amplitude` format. The sample rate is recovered from
    /// the first and last time stamps; spacing must be uniform.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(ModelError::Data(format!(
                    "expected header `{CSV_HEADER}`, found {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut times = Vec::new();
        let mut samples = Vec::new();
        for (row, line) in lines.enumerate() {
            let mut cols = line.split(',');
            let (Some(t), Some(a), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(ModelError::Data(format!(
                    "row {}: expected 2 columns",
                    row + 1
                )));
            };
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| ModelError::Data(format!("row {}: {e}", row + 1)))
            };
            times.push(parse(t)?);
            samples.push(parse(a)?);
        }
        if times.len() < MIN_SAMPLES {
            return Err(ModelError::Data(format!(
                "trace has {} samples, need at least {MIN_SAMPLES}",
                times.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ModelError::Data(
                "time column is not strictly increasing".into(),
            ));
        }
        let n = times.len();
        let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
        let uniform = times
            .iter()
            .enumerate()
            .all(|(i, &t)| (t - (times[0] + i as f64 * dt)).abs() <= 1e-3 * dt);
        if !uniform {
            return Err(ModelError::Data(
                "time column is not uniformly spaced".into(),
            ));
        }
        Self::new(1.0 / dt, samples, times[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisMode {
    /// Sample the oscillation itself; needs `fs > 2f`.
    Carrier,
    /// Emit the decaying amplitude directly, at any sample rate.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisParams {
    pub frequency_hz: f64,
    pub q: f64,
    pub amplitude0: f64,
    pub sample_rate: f64,
    pub duration: f64,
    pub noise_rms: f64,
    pub seed: u64,
    pub mode: SynthesisMode,
}

/// Amplitude 1/e time of a mode with quality factor `q`.
pub fn decay_time(frequency_hz: f64, q: f64) -> f64 {
    q / (PI * frequency_hz)
}

pub fn synthesize(p: &SynthesisParams) -> Result<RingdownTrace> {
    positive("frequency_hz", p.frequency_hz)?;
    positive("q", p.q)?;
    positive("sample_rate", p.sample_rate)?;
    positive("duration", p.duration)?;
    non_negative("noise_rms", p.noise_rms)?;
    if p.mode == SynthesisMode::Carrier && p.sample_rate <= 2.0 * p.frequency_hz {
        return Err(ModelError::Configuration(format!(
            "carrier synthesis needs sample_rate > 2·f ({} Hz), got {} Hz",
            2.0 * p.frequency_hz,
            p.sample_rate
        )));
    }
    let n = (p.duration * p.sample_rate).floor() as usize + 1;
    if n < MIN_SAMPLES {
        return Err(ModelError::Configuration(format!(
            "duration·sample_rate gives {n} samples, need at least {MIN_SAMPLES}"
        )));
    }

    let tau = decay_time(p.frequency_hz, p.q);
    let omega = 2.0 * PI * p.frequency_hz;
    let mut samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / p.sample_rate;
            let env = p.amplitude0 * (-t / tau).exp();
            match p.mode {
                SynthesisMode::Carrier => env * (omega * t).sin(),
                SynthesisMode::Envelope => env,
            }
        })
        .collect();

    if p.noise_rms > 0.0 {
        let normal =
            Normal::new(0.0, p.noise_rms).map_err(|e| ModelError::Configuration(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        for s in &mut samples {
            *s += normal.sample(&mut rng);
        }
    }
    RingdownTrace::new(p.sample_rate, samples, 0.0)
}

/// Lock-in style amplitude detection: quadrature demodulation at `f_ref`,
/// single-pole low-pass of corner `bandwidth`, then magnitude.
///
/// The output is decimated but keeps at least 8 samples per filter time
/// constant. It includes the filter's start-up transient.
pub fn envelope(trace: &RingdownTrace, f_ref: f64, bandwidth: f64) -> Result<RingdownTrace> {
    positive("f_ref", f_ref)?;
    positive("bandwidth", bandwidth)?;
    if bandwidth >= f_ref / 4.0 {
        return Err(ModelError::Configuration(format!(
            "bandwidth {bandwidth} Hz must be below f_ref/4 = {} Hz",
            f_ref / 4.0
        )));
    }
    if trace.sample_rate <= 2.0 * f_ref {
        return Err(ModelError::Configuration(format!(
            "sample rate {} Hz cannot carry a {f_ref} Hz reference",
            trace.sample_rate
        )));
    }
    let dt = 1.0 / trace.sample_rate;
    let tau_filter = 1.0 / (2.0 * PI * bandwidth);
    let gain = 1.0 - (-dt / tau_filter).exp();
    let step = ((tau_filter * trace.sample_rate / 8.0).floor() as usize).max(1);

    let omega = 2.0 * PI * f_ref;
    let (mut in_phase, mut quadrature) = (0.0, 0.0);
    let mut out = Vec::with_capacity(trace.samples.len() / step + 1);
    for (i, &s) in trace.samples.iter().enumerate() {
        let phase = omega * trace.time(i);
        in_phase += gain * (2.0 * s * phase.sin() - in_phase);
        quadrature += gain * (2.0 * s * phase.cos() - quadrature);
        if i % step == 0 {
            out.push(in_phase.hypot(quadrature));
        }
    }
    RingdownTrace::new(trace.sample_rate / step as f64, out, trace.start_time)
}

/// Filter time constants discarded by [`drop_filter_transient`]; the start-up
/// error has decayed to `e^-8 ≈ 3e-4` by then.
pub const SETTLE_TIME_CONSTANTS: f64 = 8.0;

/// Drops the start-up transient of an [`envelope`] output made with `bandwidth`.
pub fn drop_filter_transient(env: &RingdownTrace, bandwidth: f64) -> Result<RingdownTrace> {
    positive("bandwidth", bandwidth)?;
    let settle = SETTLE_TIME_CONSTANTS / (2.0 * PI * bandwidth);
    let skip = (settle * env.sample_rate).ceil() as usize;
    if skip >= env.samples.len() {
        return Err(ModelError::Data(format!(
            "trace of {:.6e} s is shorter than the {settle:.6e} s filter settling time",
            env.samples.len() as f64 / env.sample_rate
        )));
    }
    RingdownTrace::new(
        env.sample_rate,
        env.samples[skip..].to_vec(),
        env.time(skip),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Amplitude 1/e time, s.
    pub tau_amp: f64,
    pub q: f64,
    /// Fitted amplitude at t = 0.
    pub amplitude0: f64,
    pub sigma_tau: f64,
    pub sigma_q: f64,
    /// RMS of `sample − model` over the fit window.
    pub rms_residual: f64,
    pub points_used: usize,
}

struct LineFit {
    slope: f64,
    intercept: f64,
    slope_se: f64,
}

fn weighted_line(t: &[f64], y: &[f64], w: &[f64]) -> LineFit {
    let sw: f64 = w.iter().sum();
    let tm = w.iter().zip(t).map(|(w, t)| w * t).sum::<f64>() / sw;
    let ym = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for ((&ti, &yi), &wi) in t.iter().zip(y).zip(w) {
        sxx += wi * (ti - tm) * (ti - tm);
        sxy += wi * (ti - tm) * (yi - ym);
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * tm;
    let dof = t.len().saturating_sub(2);
    let slope_se = if dof == 0 {
        f64::NAN
    } else {
        let chi2: f64 = t
            .iter()
            .zip(y)
            .zip(w)
            .map(|((&ti, &yi), &wi)| {
                let r = yi - (intercept + slope * ti);
                wi * r * r
            })
            .sum();
        (chi2 / dof as f64 / sxx).sqrt()
    };
    LineFit {
        slope,
        intercept,
        slope_se,
    }
}

/// Exponential decay fit on `(time, amplitude)` pairs by weighted linear least
/// squares on `ln(amplitude)`.
///
/// Weights are the squared amplitudes, which undoes the variance stretching of
/// the log transform; after a first pass on the sampled amplitudes the weights
/// are recomputed from the fitted curve. Needs at least two strictly positive
/// points; with exactly two the standard errors are NaN.
pub fn fit_exponential(times: &[f64], amplitudes: &[f64], f_mode: f64) -> Result<DecayFit> {
    positive("f_mode", f_mode)?;
    if times.len() != amplitudes.len() {
        return Err(ModelError::Data("time and amplitude lengths differ".into()));
    }
    if times.len() < 2 {
        return Err(ModelError::Fit(format!(
            "{} points, need at least 2",
            times.len()
        )));
    }
    if amplitudes.iter().any(|&a| a <= 0.0 || !a.is_finite()) {
        return Err(ModelError::Data("amplitudes must be positive".into()));
    }

    let logs: Vec<f64> = amplitudes.iter().map(|a| a.ln()).collect();
    let mut weights: Vec<f64> = amplitudes.iter().map(|a| a * a).collect();
    let mut line = weighted_line(times, &logs, &weights);
    for _ in 0..REWEIGHT_PASSES {
        for (w, &t) in weights.iter_mut().zip(times) {
            *w = (2.0 * (line.intercept + line.slope * t)).exp();
        }
        line = weighted_line(times, &logs, &weights);
    }

    if line.slope.is_nan() || line.slope >= 0.0 {
        return Err(ModelError::Fit(format!(
            "amplitude does not decay (log slope {})",
            line.slope
        )));
    }
    let tau = -1.0 / line.slope;
    let amplitude0 = line.intercept.exp();
    let sigma_tau = line.slope_se / (line.slope * line.slope);
    let rms_residual = (times
        .iter()
        .zip(amplitudes)
        .map(|(&t, &a)| {
            let r = a - amplitude0 * (-t / tau).exp();
            r * r
        })
        .sum::<f64>()
        / times.len() as f64)
        .sqrt();

    Ok(DecayFit {
        tau_amp: tau,
        q: PI * f_mode * tau,
        amplitude0,
        sigma_tau,
        sigma_q: PI * f_mode * sigma_tau,
        rms_residual,
        points_used: times.len(),
    })
}

/// Fits an envelope trace, truncating it at the first non-positive sample.
pub fn fit_decay(envelope: &RingdownTrace, f_mode: f64) -> Result<DecayFit> {
    let valid = envelope
        .samples
        .iter()
        .position(|&a| a.is_nan() || a <= 0.0)
        .unwrap_or(envelope.samples.len());
    if valid == 0 {
        return Err(ModelError::Data(
            "envelope is non-positive from the first sample".into(),
        ));
    }
    if valid < MIN_SAMPLES {
        return Err(ModelError::Fit(format!(
            "only {valid} positive samples before truncation, need at least {MIN_SAMPLES}"
        )));
    }
    let times: Vec<f64> = envelope.times().take(valid).collect();
    fit_exponential(&times, &envelope.samples[..valid], f_mode)
}
