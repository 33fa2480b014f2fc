//! Reference values by adaptive quadrature.
//!
//! Every function here recomputes a metric of [`crate::secrecy`] along an
//! independent route: Gauss–Kronrod instead of fixed Chebyshev nodes, the
//! Marcum-Q form of `F_{ρ_D}` instead of the Poisson series, the full
//! integration range instead of the `tail_eps` truncation, and direct
//! integration instead of the exponential-integral identity for `R_E`.
//! Slow, and meant for tests and the self-check.

use crate::channel::{self, CdfMethod, ChannelStats, SystemParams};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, AdaptiveOptions};
use crate::secrecy::{theta_coefficients, THETA2_FLOOR};
use crate::specfun::SeriesControl;

/// Beyond `45·scale` an `e^{−x/scale}` weight is below `3e-20`.
const EXP_TAIL_SCALES: f64 = 45.0;

fn opts() -> AdaptiveOptions {
    AdaptiveOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_intervals: 20_000,
    }
}

/// `∫₀^upper f` for an integrand decaying like `e^{−x/scale}`, split at a few
/// multiples of `scale` so the adaptive rule sees the bulk first.
fn integrate_decaying<F>(mut f: F, scale: f64, upper: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut cuts = vec![0.0];
    for m in [1.0, 4.0, 12.0] {
        if m * scale < upper {
            cuts.push(m * scale);
        }
    }
    cuts.push(upper);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += adaptive::<_, Error>(&mut f, w[0], w[1], &opts())?;
    }
    Ok(total)
}

fn marcum_cdf(x: f64, params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    channel::cdf_rho_d(
        x,
        stats,
        params.snr_d_linear(),
        &SeriesControl::default(),
        CdfMethod::Marcum,
    )
}

fn outage<G>(g: G, certain_from: Option<f64>, params: &SystemParams, stats: &ChannelStats) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let le = stats.lambda_e;
    let far = EXP_TAIL_SCALES * le;
    let (upper, mass) = match certain_from {
        Some(l) => (l.min(far), (-l / le).exp()),
        None => (far, 0.0),
    };
    let v = integrate_decaying(
        |x| {
            let t = g(x);
            let f = if t.is_finite() && t >= 0.0 {
                marcum_cdf(t, params, stats)?
            } else {
                1.0
            };
            Ok(f * (-x / le).exp() / le)
        },
        le,
        upper,
    )?;
    Ok((v + mass).clamp(0.0, 1.0))
}

pub fn sop(params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    let t = theta_coefficients(params);
    if t.theta3 <= 0.0 {
        return Ok(1.0);
    }
    let certain_from = (t.theta2 > THETA2_FLOOR).then(|| t.theta3 / t.theta2);
    outage(
        |x| (t.theta1 * x + t.vartheta) / (t.theta3 - t.theta2 * x),
        certain_from,
        params,
        stats,
    )
}

pub fn sop_asymptotic(params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    let t = theta_coefficients(params);
    if t.theta4 <= 0.0 {
        return Err(Error::UnsupportedRegime("θ₄ ≤ 0".into()));
    }
    outage(|x| t.gamma_th * x / (1.0 - t.theta4 * x), Some(1.0 / t.theta4), params, stats)
}

/// `E[log₂(1+γ_D)]`.
pub fn legitimate_rate(params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    let kd = params.kappa_d_sum();
    let snr = params.snr_d_linear();
    // ρ_D = snr·X², X ~ N(√λ, σ²); nine deviations out the mass is < 1e-19
    let x_far = snr * (stats.lambda.sqrt() + 9.0 * stats.sigma2.sqrt()).powi(2);
    let ccdf = |rho: f64| -> Result<f64> { Ok(1.0 - marcum_cdf(rho, params, stats)?) };
    let v = if kd > 0.0 {
        // γ_D is supported on [0, 1/κ_D); beyond the ρ_D bulk the integrand vanishes
        let upper = (x_far / (1.0 + kd * x_far)).min(1.0 / kd);
        adaptive::<_, Error>(|x| Ok(ccdf(x / (1.0 - kd * x))? / (1.0 + x)), 0.0, upper, &opts())?
    } else {
        adaptive::<_, Error>(|t: f64| ccdf(t.exp_m1()), 0.0, x_far.ln_1p(), &opts())?
    };
    Ok(v / std::f64::consts::LN_2)
}

/// `E[log₂(1+γ_E)]` by direct integration of the exponential survival.
pub fn eavesdropper_rate(params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    let ke = params.kappa_e_sum();
    let le = stats.lambda_e;
    let far = EXP_TAIL_SCALES * le;
    let upper = if ke > 0.0 { (1.0 / ke).min(far) } else { far };
    let v = integrate_decaying(|x| Ok((-x / le).exp() / (1.0 + x)), le, upper)?;
    Ok(v / std::f64::consts::LN_2)
}

pub fn avg_secrecy_capacity(params: &SystemParams, stats: &ChannelStats) -> Result<f64> {
    Ok(legitimate_rate(params, stats)? - eavesdropper_rate(params, stats)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::derive_stats;
    use crate::secrecy::{self, NumericsConfig};

    #[test]
    fn eavesdropper_rate_matches_exponential_integral_form() {
        for n in [1, 5, 32] {
            for snr_e in [-20.0, -10.0, 0.0, 10.0] {
                for k2 in [0.0, 0.01, 0.1] {
                    let p = SystemParams::new(n, 0.0, snr_e).with_uniform_impairment(k2);
                    let s = derive_stats(&p);
                    let a = eavesdropper_rate(&p, &s).unwrap();
                    let b = secrecy::eavesdropper_rate(&p, &s).unwrap();
                    assert!((a - b).abs() < 1e-9 * a.max(1e-3), "{n} {snr_e} {k2}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn ideal_hardware_rate_agrees() {
        for snr in [-10.0, 10.0, 30.0] {
            let p = SystemParams::new(5, snr, -10.0);
            let s = derive_stats(&p);
            let a = legitimate_rate(&p, &s).unwrap();
            let b = secrecy::legitimate_rate(&p, &s, &NumericsConfig::default()).unwrap();
            assert!((a - b).abs() < 1e-6, "{snr}: {a} {b}");
        }
    }

    fn grid() -> impl Iterator<Item = SystemParams> {
        [5, 10].into_iter().flat_map(|n| {
            [0.0, 10.0, 20.0].into_iter().flat_map(move |d| {
                [-10.0, 0.0]
                    .into_iter()
                    .map(move |e| SystemParams::new(n, d, e).with_uniform_impairment(0.01))
            })
        })
    }

    #[test]
    fn closed_forms_agree_on_grid() {
        let num = NumericsConfig::default();
        for p in grid() {
            let s = derive_stats(&p);
            let a = sop(&p, &s).unwrap();
            let b = secrecy::sop(&p, &s, &num).unwrap().probability;
            assert!((a - b).abs() < 1e-6, "{p:?}: sop {a} {b}");
            let a = avg_secrecy_capacity(&p, &s).unwrap();
            let b = secrecy::avg_secrecy_capacity(&p, &s, &num).unwrap().total;
            assert!((a - b).abs() < 1e-6, "{p:?}: asc {a} {b}");
        }
    }

    #[test]
    fn steep_scenario_needs_more_nodes() {
        // ρ_D so strong that the outage CDF steps up right at the certain-outage point
        let p = SystemParams::new(20, 30.0, 10.0).with_uniform_impairment(0.01);
        let s = derive_stats(&p);
        let want = sop(&p, &s).unwrap();
        let err = |q| {
            let num = NumericsConfig::default().with_quad_order(q);
            (secrecy::sop(&p, &s, &num).unwrap().probability - want).abs()
        };
        assert!(err(400) < 1e-6, "{}", err(400));
        assert!(err(400) < err(100));
    }
}
