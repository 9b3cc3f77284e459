//! First-sound attenuation in superfluid ⁴He.
//!
//! Two loss channels are modeled: the three-phonon process (3PP), which
//! dominates the temperature dependence below a few hundred millikelvin, and
//! viscous damping by dilute ³He quasiparticles. Attenuation `alpha` is the
//! energy attenuation coefficient per unit length, so the quality factor of a
//! mode at angular frequency ω is `Q = ω / (c₄·alpha)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{He3Properties, HeliumProperties, UNIVERSAL};
use crate::error::{positive, ModelError, Result};

/// Above this temperature the phonon-only picture is flagged as doubtful.
pub const VALIDITY_WARN_K: f64 = 0.5;
/// Hard ceiling: roton scattering is not modeled.
pub const VALIDITY_MAX_K: f64 = 0.7;

/// Monotonic branch of the 3PP Q(T) curve used for inversion.
pub const INVERSION_T_MIN_K: f64 = 0.005;
pub const INVERSION_T_MAX_K: f64 = 0.45;
pub const INVERSION_REL_TOL: f64 = 1e-4;
pub const INVERSION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    Ok,
    Warn,
}

impl Validity {
    pub fn as_str(self) -> &'static str {
        match self {
            Validity::Ok => "ok",
            Validity::Warn => "warn",
        }
    }
}

/// A mode frequency evaluated at a helium temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePoint {
    pub frequency_hz: f64,
    pub temperature: f64,
}

impl ModePoint {
    pub fn new(frequency_hz: f64, temperature: f64) -> Result<Self> {
        positive("frequency_hz", frequency_hz)?;
        positive("temperature", temperature)?;
        if temperature > VALIDITY_MAX_K {
            return Err(ModelError::Validity {
                temperature,
                limit: VALIDITY_MAX_K,
            });
        }
        Ok(Self {
            frequency_hz,
            temperature,
        })
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency_hz
    }

    pub fn validity(&self) -> Validity {
        if self.temperature > VALIDITY_WARN_K {
            Validity::Warn
        } else {
            Validity::Ok
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mechanism {
    ThreePhonon,
    He3Viscous,
    Combined,
}

/// Transport regime of the ³He quasiparticle gas relative to the cell size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum He3Regime {
    Hydrodynamic,
    Ballistic,
}

/// Intermediate quantities of a loss calculation; populated per mechanism.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Intermediates {
    /// Thermal phonon lifetime, s.
    pub tau_ph: Option<f64>,
    /// Energy mismatch of the 3PP, rad/s.
    pub delta_e: Option<f64>,
    /// Mean thermal phonon momentum, kg·m/s.
    pub rho_bar: Option<f64>,
    /// `arctan(2ωτ) − arctan(ΔE·τ)`, rad.
    pub bracket: Option<f64>,
    pub regime: Option<He3Regime>,
    /// ³He mean free path, m.
    pub mean_free_path: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttenuationBreakdown {
    /// Energy attenuation coefficient, 1/m.
    pub alpha: f64,
    pub q: f64,
    pub mechanism: Mechanism,
    pub intermediates: Intermediates,
    pub validity: Validity,
}

fn breakdown(
    point: &ModePoint,
    helium: &HeliumProperties,
    alpha: f64,
    mechanism: Mechanism,
    intermediates: Intermediates,
) -> AttenuationBreakdown {
    AttenuationBreakdown {
        alpha,
        q: q_from_alpha(point.omega(), helium.c4, alpha),
        mechanism,
        intermediates,
        validity: point.validity(),
    }
}

/// `Q = ω/(c·α)`; infinite for a lossless channel.
pub fn q_from_alpha(omega: f64, c4: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        f64::INFINITY
    } else {
        omega / (c4 * alpha)
    }
}

/// Thermal phonon lifetime `τ = 1/(tau_coeff·T⁵)`, in seconds.
pub fn phonon_lifetime(temperature: f64, helium: &HeliumProperties) -> Result<f64> {
    positive("temperature", temperature)?;
    Ok(1.0 / (helium.tau_coeff * temperature.powi(5)))
}

/// Three-phonon attenuation of first sound.
pub fn three_phonon(point: &ModePoint, helium: &HeliumProperties) -> Result<AttenuationBreakdown> {
    let ModePoint { temperature, .. } = *point;
    let omega = point.omega();
    let hbar = UNIVERSAL.hbar;
    let kt = UNIVERSAL.k_b * temperature;

    let tau = phonon_lifetime(temperature, helium)?;
    let rho_bar = 3.0 * kt / helium.c4;
    let delta_e = 3.0 * helium.gamma_dispersion * rho_bar * rho_bar * omega;
    let bracket = (2.0 * omega * tau).atan() - (delta_e * tau).atan();

    let g1 = helium.gruneisen + 1.0;
    let prefactor = PI * PI / 60.0 * g1 * g1 / (helium.rho4 * hbar.powi(3) * helium.c4.powi(6));
    let alpha = prefactor * kt.powi(4) * omega * bracket;

    Ok(breakdown(
        point,
        helium,
        alpha,
        Mechanism::ThreePhonon,
        Intermediates {
            tau_ph: Some(tau),
            delta_e: Some(delta_e),
            rho_bar: Some(rho_bar),
            bracket: Some(bracket),
            ..Default::default()
        },
    ))
}

/// Mean free path `1/(n₃σ)` of ³He quasiparticles, in meters.
pub fn he3_mean_free_path(he3: &He3Properties, helium: &HeliumProperties) -> Result<f64> {
    positive("concentration_x", he3.concentration_x)?;
    let n3 = he3.concentration_x * helium.number_density();
    Ok(1.0 / (n3 * he3.sigma))
}

/// Concentration at which the mean free path equals the cell dimension `d`.
pub fn crossover_concentration(
    d: f64,
    he3: &He3Properties,
    helium: &HeliumProperties,
) -> Result<f64> {
    positive("container dimension", d)?;
    Ok(1.0 / (he3.sigma * d * helium.number_density()))
}

pub fn regime(mean_free_path: f64, d: f64) -> He3Regime {
    if mean_free_path > d {
        He3Regime::Ballistic
    } else {
        He3Regime::Hydrodynamic
    }
}

/// Viscous attenuation from ³He impurities in a cell of size `d`.
///
/// In the hydrodynamic regime the result does not depend on concentration.
/// Once the mean free path exceeds `d` the gas is collisionless and the
/// hydrodynamic value is scaled by `x/x_c(d)`; this ballistic rule is an
/// approximation.
pub fn he3_attenuation(
    point: &ModePoint,
    he3: &He3Properties,
    helium: &HeliumProperties,
    d: f64,
) -> Result<AttenuationBreakdown> {
    positive("container dimension", d)?;
    let lambda = he3_mean_free_path(he3, helium)?;
    let omega = point.omega();

    let hydro = 7.0 / 3.0 * (UNIVERSAL.k_b * he3.effective_mass() / PI).sqrt()
        / he3.sigma
        / (helium.rho4 * helium.c4.powi(3))
        * point.temperature.sqrt()
        * omega
        * omega;

    let reg = regime(lambda, d);
    let alpha = match reg {
        He3Regime::Hydrodynamic => hydro,
        He3Regime::Ballistic => {
            hydro * he3.concentration_x / crossover_concentration(d, he3, helium)?
        }
    };

    Ok(breakdown(
        point,
        helium,
        alpha,
        Mechanism::He3Viscous,
        Intermediates {
            regime: Some(reg),
            mean_free_path: Some(lambda),
            ..Default::default()
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinedQ {
    pub mechanisms: Vec<AttenuationBreakdown>,
    pub total: AttenuationBreakdown,
}

/// Adds independent loss channels: `1/Q_total = Σ 1/Q_i`.
pub fn combine(
    point: &ModePoint,
    helium: &HeliumProperties,
    mechanisms: Vec<AttenuationBreakdown>,
) -> CombinedQ {
    let alpha: f64 = mechanisms.iter().map(|b| b.alpha).sum();
    let total = breakdown(
        point,
        helium,
        alpha,
        Mechanism::Combined,
        Intermediates::default(),
    );
    CombinedQ { mechanisms, total }
}

/// 3PP and ³He losses of one mode, individually and combined.
pub fn combined_q(
    point: &ModePoint,
    he3: &He3Properties,
    helium: &HeliumProperties,
    d: f64,
) -> Result<CombinedQ> {
    let parts = vec![
        three_phonon(point, helium)?,
        he3_attenuation(point, he3, helium, d)?,
    ];
    Ok(combine(point, helium, parts))
}

fn three_phonon_q(frequency_hz: f64, temperature: f64, helium: &HeliumProperties) -> Result<f64> {
    Ok(three_phonon(&ModePoint::new(frequency_hz, temperature)?, helium)?.q)
}

/// Helium temperature at which the 3PP alone gives quality factor `q`.
///
/// Only the monotonic branch `[INVERSION_T_MIN_K, INVERSION_T_MAX_K]` is searched.
pub fn temperature_from_q(q: f64, frequency_hz: f64, helium: &HeliumProperties) -> Result<f64> {
    positive("q", q)?;
    positive("frequency_hz", frequency_hz)?;
    let mut lo = INVERSION_T_MIN_K;
    let mut hi = INVERSION_T_MAX_K;
    let q_max = three_phonon_q(frequency_hz, lo, helium)?;
    let q_min = three_phonon_q(frequency_hz, hi, helium)?;
    if !(q_min..=q_max).contains(&q) {
        return Err(ModelError::QOutOfRange { q, q_min, q_max });
    }

    // Q falls with T on this branch.
    for _ in 0..INVERSION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if three_phonon_q(frequency_hz, mid, helium)? > q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= INVERSION_REL_TOL * 0.5 * (lo + hi) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(ModelError::Convergence {
        routine: "temperature_from_q",
        iterations: INVERSION_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn he() -> HeliumProperties {
        HeliumProperties::default()
    }

    fn tp(f: f64, t: f64) -> AttenuationBreakdown {
        three_phonon(&ModePoint::new(f, t).unwrap(), &he()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn phonon_lifetime_values() {
        // 1/(0.9e7 · T⁵) evaluated by hand
        assert!(rel(phonon_lifetime(0.1, &he()).unwrap(), 1.0 / 90.0) < 1e-12);
        assert!(rel(phonon_lifetime(0.082, &he()).unwrap(), 3.0e-2) < 2e-3);
        assert!(rel(phonon_lifetime(1.0, &he()).unwrap(), 1.0 / 0.9e7) < 1e-15);
        assert!(phonon_lifetime(0.0, &he()).is_err());
        assert!(phonon_lifetime(-0.1, &he()).is_err());
    }

    #[test]
    fn quality_factor_anchors() {
        assert!(rel(tp(8111.0, 0.082).q, 1.4e7) < 0.10);
        assert!(rel(tp(8111.0, 0.044).q, 1.35e8) < 0.10);
    }

    #[test]
    fn bracket_doubles_by_40_mk() {
        let b = tp(8112.0, 0.040).intermediates.bracket.unwrap();
        assert!(rel(b, PI) < 0.10, "bracket = {b}");
        // second arctan already contributes at 100 mK with the printed γ
        let b100 = tp(8112.0, 0.100).intermediates.bracket.unwrap();
        assert!(b100 > PI / 2.0 + 0.4 && b100 < PI / 2.0 + 0.55, "{b100}");
    }

    #[test]
    fn attenuation_vanishes_at_zero_temperature() {
        let a = tp(8112.0, 1e-6).alpha;
        assert!(a / tp(8112.0, 0.04).alpha < 1e-17);
        assert!(tp(8112.0, 1e-4).alpha < tp(8112.0, 1e-3).alpha);
    }

    #[test]
    fn validity_clamp() {
        assert_eq!(
            ModePoint::new(8112.0, 0.71).unwrap_err(),
            ModelError::Validity {
                temperature: 0.71,
                limit: 0.7
            }
        );
        assert_eq!(tp(8112.0, 0.6).validity, Validity::Warn);
        assert_eq!(tp(8112.0, 0.5).validity, Validity::Ok);
        assert_eq!(tp(8112.0, 0.7).validity, Validity::Warn);
        assert!(matches!(
            ModePoint::new(8112.0, 0.0),
            Err(ModelError::Domain { .. })
        ));
        assert!(matches!(
            ModePoint::new(-1.0, 0.1),
            Err(ModelError::Domain { .. })
        ));
    }

    #[test]
    fn q_minimum_near_450_mk() {
        let (t_best, _) = (0..=400)
            .map(|i| 0.3 + 0.001 * i as f64)
            .map(|t| (t, tp(8112.0, t).alpha))
            .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!((t_best - 0.45).abs() <= 0.05, "{t_best}");
    }

    #[test]
    fn attenuation_peak_location() {
        // golden-section reference: peak of alpha at 8112 Hz is 0.447608 K
        let a = |t: f64| tp(8112.0, t).alpha;
        assert!(a(0.4476) > a(0.4466) && a(0.4476) > a(0.4486));
        assert!(a(0.45) < a(0.4476));
    }

    #[test]
    fn mean_free_path_crossover() {
        // hand evaluation: 1/(σ·D·n₄), n₄ = 145/(4.002602 u)
        let n4 = 145.0 / (4.002_602 * 1.660_539_066_60e-27);
        let oracle = 1.0 / (6.0e-20 * 0.036 * n4);
        let xc = crossover_concentration(0.036, &He3Properties::default(), &he()).unwrap();
        assert!(rel(xc, oracle) < 1e-12);
        assert!(rel(xc, 2.122e-8) < 1e-3);

        let he3 = He3Properties::default().with_concentration(2e-10);
        let lambda = he3_mean_free_path(&he3, &he()).unwrap();
        assert!(rel(lambda / 0.036, 100.0) < 0.25);
        assert_eq!(regime(lambda, 0.036), He3Regime::Ballistic);

        let dense = He3Properties::default().with_concentration(1.0);
        let lam_dense = he3_mean_free_path(&dense, &he()).unwrap();
        assert!(lam_dense < lambda);
        assert_eq!(regime(lam_dense, 0.036), He3Regime::Hydrodynamic);

        assert!(
            he3_mean_free_path(&He3Properties::default().with_concentration(0.0), &he()).is_err()
        );
    }

    #[test]
    fn he3_hydrodynamic_magnitude() {
        // independent hand evaluation of the viscous-gas formula
        let kb = 1.380_649e-23;
        let m3s = 2.34 * 3.016_029 * 1.660_539_066_60e-27;
        let w = 2.0 * PI * 8112.0;
        let oracle = (7.0 / 3.0)
            * (kb * m3s / PI).sqrt()
            * (1.0 / 6.0e-20)
            * (1.0 / (145.0 * 238.0_f64.powi(3)))
            * 0.044_f64.sqrt()
            * w
            * w;
        let p = ModePoint::new(8112.0, 0.044).unwrap();
        let b = he3_attenuation(&p, &He3Properties::default(), &he(), 0.036).unwrap();
        assert!(rel(b.alpha, oracle) < 1e-12);
        assert!(rel(b.alpha, 2.46e-6) < 0.01);
        assert!(rel(b.q, 8.70e7) < 0.01);
        assert_eq!(b.intermediates.regime, Some(He3Regime::Hydrodynamic));
    }

    #[test]
    fn he3_vanishes_at_low_frequency() {
        let p = ModePoint::new(1e-6, 0.044).unwrap();
        let b = he3_attenuation(&p, &He3Properties::default(), &he(), 0.036).unwrap();
        assert!(b.alpha < 1e-25);
    }

    #[test]
    fn he3_ballistic_scaling() {
        let p = ModePoint::new(8112.0, 0.044).unwrap();
        let hydro = he3_attenuation(&p, &He3Properties::default(), &he(), 0.036).unwrap();
        let he3 = He3Properties::default().with_concentration(2e-10);
        let ball = he3_attenuation(&p, &he3, &he(), 0.036).unwrap();
        assert_eq!(ball.intermediates.regime, Some(He3Regime::Ballistic));
        let ratio = ball.q / hydro.q;
        let lambda_over_d = ball.intermediates.mean_free_path.unwrap() / 0.036;
        assert!(rel(ratio, lambda_over_d) < 1e-12);
        assert!(rel(ratio, 100.0) < 0.25);
    }

    #[test]
    fn hydrodynamic_independent_of_concentration() {
        let p = ModePoint::new(8112.0, 0.044).unwrap();
        let a = he3_attenuation(
            &p,
            &He3Properties::default().with_concentration(1e-7),
            &he(),
            0.036,
        )
        .unwrap()
        .alpha;
        let b = he3_attenuation(
            &p,
            &He3Properties::default().with_concentration(1e-6),
            &he(),
            0.036,
        )
        .unwrap()
        .alpha;
        assert_eq!(a, b);
    }

    #[test]
    fn combination_rules() {
        let p = ModePoint::new(8112.0, 0.1).unwrap();
        let c = combined_q(&p, &He3Properties::default(), &he(), 0.036).unwrap();
        let q_min = c
            .mechanisms
            .iter()
            .map(|b| b.q)
            .fold(f64::INFINITY, f64::min);
        assert!(c.total.q < q_min);
        let inv: f64 = c.mechanisms.iter().map(|b| 1.0 / b.q).sum();
        assert!(rel(c.total.q, 1.0 / inv) < 1e-12);
        assert_eq!(c.total.mechanism, Mechanism::Combined);

        let one = tp(8112.0, 0.1);
        let single = combine(&p, &he(), vec![one]);
        assert!(rel(single.total.q, one.q) < 1e-15);

        let double = combine(&p, &he(), vec![one, one]);
        assert!(rel(double.total.q, one.q / 2.0) < 1e-15);
    }

    #[test]
    fn inversion_anchors() {
        let t82 = temperature_from_q(1.4e7, 8111.0, &he()).unwrap();
        let t44 = temperature_from_q(1.35e8, 8111.0, &he()).unwrap();
        assert!(rel(t82, 0.082) < 0.05, "{t82}");
        assert!(rel(t44, 0.044) < 0.05, "{t44}");
    }

    #[test]
    fn inversion_round_trips() {
        // includes the 61 mK / 122 mK microwave-heating fixtures
        for t in [0.02, 0.061, 0.1, 0.122, 0.3] {
            let q = tp(8112.0, t).q;
            let back = temperature_from_q(q, 8112.0, &he()).unwrap();
            assert!(rel(back, t) < 1e-4, "{t} -> {back}");
        }
    }

    #[test]
    fn inversion_out_of_range() {
        match temperature_from_q(1e3, 8112.0, &he()) {
            Err(ModelError::QOutOfRange { q_min, q_max, .. }) => assert!(q_min < q_max),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            temperature_from_q(1e30, 8112.0, &he()),
            Err(ModelError::QOutOfRange { .. })
        ));
    }

    proptest! {
        #[test]
        fn q_alpha_consistency(f in 10.0f64..1e5, t in 0.005f64..0.7) {
            let b = tp(f, t);
            let w = 2.0 * PI * f;
            prop_assert!(rel(b.q * b.alpha, w / 238.0) < 1e-14);
        }

        #[test]
        fn three_phonon_monotone_below_peak(t in 0.001f64..0.4466, step in 1e-4f64..1e-3) {
            prop_assert!(tp(8112.0, t + step).alpha > tp(8112.0, t).alpha);
        }

        #[test]
        fn bracket_bounds(f in 10.0f64..1e5, t in 0.001f64..0.7) {
            let b = tp(f, t).intermediates.bracket.unwrap();
            prop_assert!(b > 0.0 && b <= PI);
        }

        #[test]
        fn he3_q_alpha_consistency(t in 0.005f64..0.7, x in 1e-12f64..1e-3) {
            let p = ModePoint::new(8112.0, t).unwrap();
            let b = he3_attenuation(&p, &He3Properties::default().with_concentration(x), &he(), 0.036).unwrap();
            prop_assert!(rel(b.q * b.alpha, 2.0 * PI * 8112.0 / 238.0) < 1e-14);
        }
    }

    #[test]
    fn bracket_tends_to_pi_at_low_temperature() {
        let b = tp(8112.0, 0.005).intermediates.bracket.unwrap();
        assert!(PI - b < 1e-3);
    }
}
