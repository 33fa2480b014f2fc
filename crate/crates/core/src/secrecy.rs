//! Closed-form secrecy metrics.
//!
//! Each metric is an integral over the eavesdropper power `x = ρ_E` (or over
//! the SNDR for the capacity terms) evaluated with the Chebyshev-node rule of
//! [`crate::quadrature`], with the Poisson/incomplete-gamma series of
//! [`crate::channel`] inside the integrand.
//!
//! SOP follows from rewriting the outage event as
//! `ρ_D < (θ₁ρ_E + ϑ)/(θ₃ − θ₂ρ_E)`. When `θ₂ > 0` and `ρ_E ≥ θ₃/θ₂` the
//! right-hand side is unbounded, i.e. outage is certain; that probability
//! mass, `e^{−θ₃/(θ₂λ_E)}`, is added to the integral over `[0, θ₃/θ₂]`.

use serde::{Deserialize, Serialize};

use crate::channel::{self, CdfMethod, ChannelStats, SystemParams};
use crate::error::{Error, Result};
use crate::quadrature::{ChebyshevQuadrature, ChebyshevRule};
use crate::specfun::{self, SeriesControl};

/// `θ₂` at or below this is treated as zero (no finite certain-outage point).
pub const THETA2_FLOOR: f64 = 1e-12;

/// Coefficients of the rewritten outage event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSet {
    /// `γ_th = 2^{C_th}`
    pub gamma_th: f64,
    /// `ϑ = γ_th − 1`
    pub vartheta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    /// High-SNR coefficient `γ_th κ_D − κ_E`.
    pub theta4: f64,
}

pub fn theta_coefficients(params: &SystemParams) -> ThetaSet {
    let gamma_th = params.gamma_th();
    let vartheta = gamma_th - 1.0;
    let kd = params.kappa_d_sum();
    let ke = params.kappa_e_sum();
    ThetaSet {
        gamma_th,
        vartheta,
        theta1: vartheta * ke + gamma_th,
        theta2: vartheta * ke * kd + gamma_th * kd - ke,
        theta3: 1.0 - vartheta * kd,
        theta4: gamma_th * kd - ke,
    }
}

/// Numerical settings shared by all closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsConfig {
    /// Number of Chebyshev nodes `Q`.
    pub quad_order: usize,
    pub series: SeriesControl,
    pub rule: ChebyshevRule,
    /// Exponential-tail truncation level for unbounded integration ranges.
    pub tail_eps: f64,
    /// Integrate numerically when `κ_D = 0` instead of failing.
    pub ideal_hardware_fallback: bool,
    /// In sweeps, add the Monte Carlo counterpart of every analytical metric.
    pub mc_check: bool,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            quad_order: 100,
            series: SeriesControl::default(),
            rule: ChebyshevRule::Fejer,
            tail_eps: 1e-12,
            ideal_hardware_fallback: true,
            mc_check: false,
        }
    }
}

impl NumericsConfig {
    pub fn with_quad_order(mut self, q: usize) -> Self {
        self.quad_order = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.quad_order < 2 {
            return Err(Error::invalid("numerics.quad_order", "must be at least 2"));
        }
        self.series
            .validate()
            .map_err(|reason| Error::invalid("numerics.series", reason))?;
        if !(self.tail_eps > 0.0 && self.tail_eps <= 1e-3) {
            return Err(Error::invalid("numerics.tail_eps", "must lie in (0, 1e-3]"));
        }
        Ok(())
    }

    fn quadrature(&self) -> ChebyshevQuadrature {
        ChebyshevQuadrature::new(self.quad_order, self.rule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutageRegime {
    /// Integrated up to the certain-outage point.
    Bounded,
    /// No certain-outage point within reach; range cut where the
    /// exponential weight falls below `tail_eps`.
    Truncated,
    /// `θ₃ ≤ 0`: the target exceeds what the saturated SNDR can support.
    Saturated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outage {
    pub probability: f64,
    pub regime: OutageRegime,
    /// Probability of the eavesdropper power alone forcing outage.
    pub certain_mass: f64,
}

/// `P(ρ_D < g(ρ_E))` where `g` blows up at `certain_from`.
fn outage_integral<G>(
    g: G,
    certain_from: Option<f64>,
    params: &SystemParams,
    stats: &ChannelStats,
    numerics: &NumericsConfig,
) -> Result<Outage>
where
    G: Fn(f64) -> f64,
{
    let lambda_e = stats.lambda_e;
    let snr_d = params.snr_d_linear();
    let x_cut = lambda_e * (1.0 / numerics.tail_eps).ln();
    let certain_mass = certain_from.map_or(0.0, |l| (-l / lambda_e).exp());
    let (upper, regime) = match certain_from {
        Some(l) if l <= x_cut => (l, OutageRegime::Bounded),
        _ => (x_cut, OutageRegime::Truncated),
    };
    let integral = numerics.quadrature().integrate(0.0, upper, |x| -> Result<f64> {
        let threshold = g(x);
        let f = if threshold.is_finite() && threshold >= 0.0 {
            channel::cdf_rho_d(threshold, stats, snr_d, &numerics.series, CdfMethod::Series)?
        } else {
            1.0
        };
        Ok(f * channel::pdf_rho_e(x, stats))
    })?;
    Ok(Outage {
        probability: (integral + certain_mass).clamp(0.0, 1.0),
        regime,
        certain_mass,
    })
}

/// Secrecy outage probability `P(R_S < C_th)`.
pub fn sop(params: &SystemParams, stats: &ChannelStats, numerics: &NumericsConfig) -> Result<Outage> {
    numerics.validate()?;
    let t = theta_coefficients(params);
    if t.theta3 <= 0.0 {
        return Ok(Outage {
            probability: 1.0,
            regime: OutageRegime::Saturated,
            certain_mass: 1.0,
        });
    }
    let certain_from = (t.theta2 > THETA2_FLOOR).then(|| t.theta3 / t.theta2);
    outage_integral(
        |x| (t.theta1 * x + t.vartheta) / (t.theta3 - t.theta2 * x),
        certain_from,
        params,
        stats,
        numerics,
    )
}

/// High-SNR approximation `P(γ_D/γ_E < γ_th)`; needs `θ₄ > 0`.
pub fn sop_asymptotic(params: &SystemParams, stats: &ChannelStats, numerics: &NumericsConfig) -> Result<f64> {
    numerics.validate()?;
    let t = theta_coefficients(params);
    if t.theta4 <= 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "asymptotic SOP needs θ₄ = γ_th κ_D − κ_E > 0, got {}",
            t.theta4
        )));
    }
    let out = outage_integral(
        |x| t.gamma_th * x / (1.0 - t.theta4 * x),
        Some(1.0 / t.theta4),
        params,
        stats,
        numerics,
    )?;
    Ok(out.probability)
}

/// Average secrecy capacity `R_D − R_E` in bits/s/Hz. The difference of
/// ergodic rates is not clipped at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyCapacity {
    pub total: f64,
    pub r_d: f64,
    pub r_e: f64,
}

pub fn avg_secrecy_capacity(
    params: &SystemParams,
    stats: &ChannelStats,
    numerics: &NumericsConfig,
) -> Result<SecrecyCapacity> {
    let r_d = legitimate_rate(params, stats, numerics)?;
    let r_e = eavesdropper_rate(params, stats)?;
    Ok(SecrecyCapacity {
        total: r_d - r_e,
        r_d,
        r_e,
    })
}

/// Ergodic rate `E[log₂(1+γ_D)] = (1/ln2)∫ (1−F_{γ_D}(x))/(1+x) dx`.
///
/// With impairments the range ends at the saturation level `1/κ_D`. Ideal
/// hardware (`κ_D = 0`) integrates over `t = ln(1+x)` up to the point where
/// `1 − F_{ρ_D}` falls below `tail_eps`, if the fallback is enabled.
pub fn legitimate_rate(params: &SystemParams, stats: &ChannelStats, numerics: &NumericsConfig) -> Result<f64> {
    numerics.validate()?;
    let kd = params.kappa_d_sum();
    let snr_d = params.snr_d_linear();
    let ctl = &numerics.series;
    let quad = numerics.quadrature();
    let integral = if kd > 0.0 {
        quad.integrate(0.0, 1.0 / kd, |x| -> Result<f64> {
            let rho = x / (1.0 - kd * x);
            Ok(channel::ccdf_rho_d_series(rho, stats, snr_d, ctl)? / (1.0 + x))
        })?
    } else {
        if !numerics.ideal_hardware_fallback {
            return Err(Error::UnsupportedRegime(
                "κ_D = 0 gives an unbounded integration range; enable ideal_hardware_fallback".into(),
            ));
        }
        let mut x_max = snr_d * (stats.lambda.sqrt() + stats.sigma2.sqrt()).powi(2);
        while channel::ccdf_rho_d_series(x_max, stats, snr_d, ctl)? > numerics.tail_eps {
            x_max *= 2.0;
        }
        quad.integrate(0.0, x_max.ln_1p(), |t| channel::ccdf_rho_d_series(t.exp_m1(), stats, snr_d, ctl))?
    };
    Ok(integral / std::f64::consts::LN_2)
}

/// `(1/ln2)∫₀^{1/κ_E} e^{−x/λ_E}/(1+x) dx` in closed form through the
/// exponential integral:
/// `e^{1/λ_E}[Ei(−(1+1/κ_E)/λ_E) − Ei(−1/λ_E)]/ln2`, evaluated with the
/// scaled `e^t E₁(t)` so that small `λ_E` does not overflow.
pub fn eavesdropper_rate(params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    let a = 1.0 / stats.lambda_e;
    let ke = params.kappa_e_sum();
    let head = specfun::scaled_e1(a)?;
    let tail = if ke > 0.0 {
        let c = a * (1.0 + 1.0 / ke);
        (-a / ke).exp() * specfun::scaled_e1(c)?
    } else {
        0.0
    };
    Ok((head - tail) / std::f64::consts::LN_2)
}
