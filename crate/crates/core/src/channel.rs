//! Scenario parameters and the statistics of the effective channels.
//!
//! The legitimate gain `X₁ = Σ f_{R,i} f_{D,i}` is modelled through the
//! central-limit approximation `X₁ ~ N(Nπ/4, σ²)`, which makes
//! `ρ_D = γ̄_D X₁²` a scaled noncentral χ² with one degree of freedom. Its
//! density and CDF are Poisson mixtures over `k` with weights
//! `w_k = e^{−μ} μ^k / k!`, `μ = λ/(2σ²)`. The eavesdropper power
//! `ρ_E = γ̄_E X₂²` is exponential with mean `λ_E = γ̄_E N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SpecFunError};
use crate::specfun::{self, SeriesControl};

/// Optional link geometry. When present the average SNRs follow from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Transmit power `P_S`.
    pub p_s: f64,
    /// Noise power `N₀`.
    pub n0: f64,
    pub d_sr: f64,
    pub d_rd: f64,
    pub d_re: f64,
    /// Path-loss exponent.
    pub chi: f64,
}

impl Geometry {
    pub fn snr_d_db(&self) -> f64 {
        to_db(self.p_s / ((self.d_sr * self.d_rd).powf(self.chi) * self.n0))
    }

    pub fn snr_e_db(&self) -> f64 {
        to_db(self.p_s / ((self.d_sr * self.d_re).powf(self.chi) * self.n0))
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("p_s", self.p_s),
            ("n0", self.n0),
            ("d_sr", self.d_sr),
            ("d_rd", self.d_rd),
            ("d_re", self.d_re),
            ("chi", self.chi),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    format!("geometry.{name}"),
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Physical scenario of the RIS-aided wiretap link.
///
/// Impairment levels are the squared levels `κ²` of the transmitter and
/// receiver of each link. SNRs are in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SystemParams {
    pub n_elements: u32,
    pub kappa_d_t2: f64,
    pub kappa_d_r2: f64,
    pub kappa_e_t2: f64,
    pub kappa_e_r2: f64,
    pub snr_d_db: f64,
    pub snr_e_db: f64,
    /// Target secrecy rate in bits/s/Hz.
    pub c_th: f64,
    pub geometry: Option<Geometry>,
}

/// On-disk form: SNRs may be omitted when a geometry is given.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n_elements: u32,
    #[serde(default)]
    kappa_d_t2: f64,
    #[serde(default)]
    kappa_d_r2: f64,
    #[serde(default)]
    kappa_e_t2: f64,
    #[serde(default)]
    kappa_e_r2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    snr_d_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    snr_e_db: Option<f64>,
    c_th: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<Geometry>,
}

impl TryFrom<RawParams> for SystemParams {
    type Error = String;

    fn try_from(raw: RawParams) -> std::result::Result<Self, String> {
        let pick = |given: Option<f64>, derived: Option<f64>, name: &str| {
            given
                .or(derived)
                .ok_or_else(|| format!("`{name}` is required when no geometry is given"))
        };
        let snr_d_db = pick(raw.snr_d_db, raw.geometry.map(|g| g.snr_d_db()), "snr_d_db")?;
        let snr_e_db = pick(raw.snr_e_db, raw.geometry.map(|g| g.snr_e_db()), "snr_e_db")?;
        Ok(SystemParams {
            n_elements: raw.n_elements,
            kappa_d_t2: raw.kappa_d_t2,
            kappa_d_r2: raw.kappa_d_r2,
            kappa_e_t2: raw.kappa_e_t2,
            kappa_e_r2: raw.kappa_e_r2,
            snr_d_db,
            snr_e_db,
            c_th: raw.c_th,
            geometry: raw.geometry,
        })
    }
}

impl From<SystemParams> for RawParams {
    fn from(p: SystemParams) -> Self {
        RawParams {
            n_elements: p.n_elements,
            kappa_d_t2: p.kappa_d_t2,
            kappa_d_r2: p.kappa_d_r2,
            kappa_e_t2: p.kappa_e_t2,
            kappa_e_r2: p.kappa_e_r2,
            snr_d_db: Some(p.snr_d_db),
            snr_e_db: Some(p.snr_e_db),
            c_th: p.c_th,
            geometry: p.geometry,
        }
    }
}

impl SystemParams {
    /// Ideal hardware, `C_th = 1`.
    pub fn new(n_elements: u32, snr_d_db: f64, snr_e_db: f64) -> Self {
        SystemParams {
            n_elements,
            kappa_d_t2: 0.0,
            kappa_d_r2: 0.0,
            kappa_e_t2: 0.0,
            kappa_e_r2: 0.0,
            snr_d_db,
            snr_e_db,
            c_th: 1.0,
            geometry: None,
        }
    }

    /// SNRs derived from the geometry.
    pub fn from_geometry(n_elements: u32, geometry: Geometry) -> Self {
        SystemParams {
            geometry: Some(geometry),
            ..Self::new(n_elements, geometry.snr_d_db(), geometry.snr_e_db())
        }
    }

    /// Same squared level on all four transceivers.
    pub fn with_uniform_impairment(mut self, kappa2: f64) -> Self {
        self.kappa_d_t2 = kappa2;
        self.kappa_d_r2 = kappa2;
        self.kappa_e_t2 = kappa2;
        self.kappa_e_r2 = kappa2;
        self
    }

    pub fn with_c_th(mut self, c_th: f64) -> Self {
        self.c_th = c_th;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements < 1 {
            return Err(Error::invalid("n_elements", "must be at least 1"));
        }
        let kappas = [
            ("kappa_d_t2", self.kappa_d_t2),
            ("kappa_d_r2", self.kappa_d_r2),
            ("kappa_e_t2", self.kappa_e_t2),
            ("kappa_e_r2", self.kappa_e_r2),
        ];
        for (name, k) in kappas {
            if !(0.0..1.0).contains(&k) {
                return Err(Error::invalid(name, format!("must lie in [0, 1), got {k}")));
            }
        }
        if !(self.c_th > 0.0 && self.c_th.is_finite()) {
            return Err(Error::invalid("c_th", format!("must be positive, got {}", self.c_th)));
        }
        for (name, v) in [("snr_d_db", self.snr_d_db), ("snr_e_db", self.snr_e_db)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if let Some(g) = &self.geometry {
            g.validate()?;
            for (name, given, derived) in [
                ("snr_d_db", self.snr_d_db, g.snr_d_db()),
                ("snr_e_db", self.snr_e_db, g.snr_e_db()),
            ] {
                if (given - derived).abs() > 1e-9 {
                    return Err(Error::invalid(
                        name,
                        format!("{given} dB disagrees with the geometry ({derived} dB)"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn snr_d_linear(&self) -> f64 {
        from_db(self.snr_d_db)
    }

    pub fn snr_e_linear(&self) -> f64 {
        from_db(self.snr_e_db)
    }

    /// `κ²_{D,t} + κ²_{D,r}`
    pub fn kappa_d_sum(&self) -> f64 {
        self.kappa_d_t2 + self.kappa_d_r2
    }

    /// `κ²_{E,t} + κ²_{E,r}`
    pub fn kappa_e_sum(&self) -> f64 {
        self.kappa_e_t2 + self.kappa_e_r2
    }

    /// `γ_th = 2^{C_th}`
    pub fn gamma_th(&self) -> f64 {
        self.c_th.exp2()
    }
}

/// Which variance parameter to use for the Gaussian approximation of `X₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceConvention {
    /// `σ² = N(1 − π²/16)`, the variance of a sum of `N` products of
    /// unit-power Rayleigh amplitudes.
    #[default]
    Clt,
    /// `σ² = N(1 − π²/16)²`, kept for comparison with printed results.
    Printed,
}

/// Distribution parameters of `ρ_D` and `ρ_E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStats {
    /// `λ = (Nπ/4)²`
    pub lambda: f64,
    pub sigma2: f64,
    /// `λ_E = γ̄_E N`, mean of `ρ_E`.
    pub lambda_e: f64,
}

impl ChannelStats {
    /// Poisson mean `λ/(2σ²)` of the noncentral mixture.
    pub fn poisson_mean(&self) -> f64 {
        self.lambda / (2.0 * self.sigma2)
    }
}

pub fn derive_stats(params: &SystemParams) -> ChannelStats {
    derive_stats_with(params, VarianceConvention::Clt)
}

pub fn derive_stats_with(params: &SystemParams, convention: VarianceConvention) -> ChannelStats {
    let n = params.n_elements as f64;
    let spread = 1.0 - std::f64::consts::PI.powi(2) / 16.0;
    let sigma2 = match convention {
        VarianceConvention::Clt => n * spread,
        VarianceConvention::Printed => n * spread * spread,
    };
    ChannelStats {
        lambda: (n * std::f64::consts::FRAC_PI_4).powi(2),
        sigma2,
        lambda_e: params.snr_e_linear() * n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfMethod {
    /// `1 − Q_{1/2}(√λ/σ, √(x/(γ̄_D σ²)))` through erfc.
    #[default]
    Marcum,
    /// Poisson mixture of regularized lower incomplete gammas.
    Series,
}

/// Absolute error accepted from a mixture of probabilities.
const MIXTURE_ABS_TOL: f64 = 1e-19;

/// Sums `Σ_k w_k g(k)` with Poisson weights of mean `mu`, stopping once the
/// terms are past their peak and the geometric tail estimate drops below
/// `rel_tol` of the partial sum. With `g ≤ 1` (`probabilities`), it also stops
/// once the remaining Poisson mass is below `MIXTURE_ABS_TOL`; far in a tail
/// `g(k)` can keep growing with `k` long after the weights have become
/// negligible.
fn poisson_mixture<G>(mu: f64, ctl: &SeriesControl, function: &'static str, probabilities: bool, mut g: G) -> Result<f64>
where
    G: FnMut(usize) -> std::result::Result<f64, SpecFunError>,
{
    let ln_mu = mu.ln();
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        let w = (-mu + kf * ln_mu - specfun::ln_gamma(kf + 1.0)).exp();
        let term = w * g(k)?;
        sum += term;
        if probabilities && kf + 2.0 > mu {
            // Σ_{j>k} w_j ≤ w_k·(μ/(k+1)) / (1 − μ/(k+2))
            let rest = w * (mu / (kf + 1.0)) / (1.0 - mu / (kf + 2.0));
            if rest <= MIXTURE_ABS_TOL.max(ctl.rel_tol * sum) {
                return Ok(sum);
            }
        }
        if kf >= mu && term <= prev {
            if term == 0.0 {
                return Ok(sum);
            }
            let r = term / prev;
            if r < 1.0 && term * r / (1.0 - r) <= ctl.rel_tol * sum {
                return Ok(sum);
            }
        }
        prev = term;
    }
    Err(SpecFunError::NoConvergence {
        function,
        terms: ctl.max_terms,
    }
    .into())
}

fn check_arg(x: f64, what: &'static str) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(SpecFunError::domain(what, format!("argument must be >= 0, got {x}")).into())
    }
}

/// Density of `ρ_D`, summed term by term as a Poisson mixture of
/// `Gamma(k+½, 2γ̄_Dσ²)` densities. Diverges like `x^{−1/2}` at the origin
/// (returns `+∞` at `x = 0`) but integrates to one.
pub fn pdf_rho_d(x: f64, stats: &ChannelStats, snr_d_linear: f64, ctl: &SeriesControl) -> Result<f64> {
    check_arg(x, "pdf_rho_d")?;
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let scale = 2.0 * snr_d_linear * stats.sigma2;
    let y = x / scale;
    let ln_y = y.ln();
    poisson_mixture(stats.poisson_mean(), ctl, "pdf_rho_d series", false, |k| {
        let a = k as f64 + 0.5;
        Ok(((a - 1.0) * ln_y - y - specfun::ln_gamma(a)).exp() / scale)
    })
}

/// CDF of `ρ_D`.
pub fn cdf_rho_d(
    x: f64,
    stats: &ChannelStats,
    snr_d_linear: f64,
    ctl: &SeriesControl,
    method: CdfMethod,
) -> Result<f64> {
    check_arg(x, "cdf_rho_d")?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    match method {
        CdfMethod::Marcum => {
            let sigma = stats.sigma2.sqrt();
            let a = stats.lambda.sqrt() / sigma;
            let b = (x / snr_d_linear).sqrt() / sigma;
            if a > b {
                // P(|Y| ≤ b) for Y ~ N(a, 1), written without cancellation
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Ok((0.5 * (specfun::erfc((a - b) * s) - specfun::erfc((a + b) * s))).clamp(0.0, 1.0))
            } else {
                Ok(1.0 - specfun::marcum_q_half(a, b)?)
            }
        }
        CdfMethod::Series => {
            let y = x / (2.0 * snr_d_linear * stats.sigma2);
            let v = poisson_mixture(stats.poisson_mean(), ctl, "cdf_rho_d series", true, |k| {
                specfun::regularized_gamma_p(k as f64 + 0.5, y)
            })?;
            Ok(v.clamp(0.0, 1.0))
        }
    }
}

/// `1 − F_{ρ_D}(x)` as the mixture of regularized upper incomplete gammas.
pub fn ccdf_rho_d_series(x: f64, stats: &ChannelStats, snr_d_linear: f64, ctl: &SeriesControl) -> Result<f64> {
    check_arg(x, "ccdf_rho_d")?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let y = x / (2.0 * snr_d_linear * stats.sigma2);
    let v = poisson_mixture(stats.poisson_mean(), ctl, "ccdf_rho_d series", true, |k| {
        specfun::regularized_gamma_q(k as f64 + 0.5, y)
    })?;
    Ok(v.clamp(0.0, 1.0))
}

pub fn pdf_rho_e(x: f64, stats: &ChannelStats) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    (-x / stats.lambda_e).exp() / stats.lambda_e
}

pub fn cdf_rho_e(x: f64, stats: &ChannelStats) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    -(-x / stats.lambda_e).exp_m1()
}

/// CDF of the legitimate SNDR `γ_D = ρ_D / (κ_D ρ_D + 1)`, with
/// `κ_D = κ²_{D,t} + κ²_{D,r}`. Equal to one from the saturation level
/// `1/κ_D` upwards.
pub fn cdf_gamma_d(x: f64, params: &SystemParams, stats: &ChannelStats, ctl: &SeriesControl) -> Result<f64> {
    Ok(1.0 - ccdf_gamma_d(x, params, stats, ctl)?)
}

/// `1 − F_{γ_D}(x)`.
pub fn ccdf_gamma_d(x: f64, params: &SystemParams, stats: &ChannelStats, ctl: &SeriesControl) -> Result<f64> {
    check_arg(x, "cdf_gamma_d")?;
    let kd = params.kappa_d_sum();
    if kd > 0.0 && x * kd >= 1.0 {
        return Ok(0.0);
    }
    let rho = x / (1.0 - x * kd);
    ccdf_rho_d_series(rho, stats, params.snr_d_linear(), ctl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive, AdaptiveOptions};

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn derive_stats_examples() {
        let p = SystemParams::new(5, 10.0, -10.0);
        let s = derive_stats(&p);
        assert!((s.lambda - 15.421_256_876_702_122).abs() < 1e-12);
        assert!((s.sigma2 - 1.915_748_624_659_58).abs() < 1e-12);
        assert!((s.lambda_e - 0.5).abs() < 1e-15);
        let printed = derive_stats_with(&p, VarianceConvention::Printed);
        assert!((printed.sigma2 - 5.0 * (1.0 - std::f64::consts::PI.powi(2) / 16.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn validation_names_the_field() {
        let mut p = SystemParams::new(0, 0.0, 0.0);
        match p.validate() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "n_elements"),
            other => panic!("{other:?}"),
        }
        p.n_elements = 4;
        p.kappa_e_r2 = 1.0;
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { field, .. }) if field == "kappa_e_r2"));
        p.kappa_e_r2 = 0.0;
        p.c_th = 0.0;
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { field, .. }) if field == "c_th"));
    }

    #[test]
    fn geometry_fixes_the_snrs() {
        let g = Geometry {
            p_s: 10.0,
            n0: 1e-3,
            d_sr: 2.0,
            d_rd: 3.0,
            d_re: 5.0,
            chi: 2.0,
        };
        let p = SystemParams::from_geometry(8, g);
        assert!((p.snr_d_db - to_db(10.0 / (36.0 * 1e-3))).abs() < 1e-12);
        assert!((p.snr_e_db - to_db(10.0 / (100.0 * 1e-3))).abs() < 1e-12);
        p.validate().unwrap();
        let mut bad = p.clone();
        bad.snr_d_db += 0.5;
        assert!(matches!(bad.validate(), Err(Error::InvalidParameter { field, .. }) if field == "snr_d_db"));
    }

    #[test]
    fn cdf_rho_e_examples() {
        let s = derive_stats(&SystemParams::new(5, 0.0, -10.0));
        assert!((cdf_rho_e(s.lambda_e, &s) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        let total: f64 = adaptive(|x| Ok::<_, Error>(pdf_rho_e(x, &s)), 0.0, 60.0 * s.lambda_e, &AdaptiveOptions::default()).unwrap();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cdf_rho_d_edge_values() {
        let p = SystemParams::new(5, 10.0, 0.0);
        let s = derive_stats(&p);
        for m in [CdfMethod::Marcum, CdfMethod::Series] {
            assert_eq!(cdf_rho_d(0.0, &s, 10.0, &ctl(), m).unwrap(), 0.0);
            assert_eq!(cdf_rho_d(f64::INFINITY, &s, 10.0, &ctl(), m).unwrap(), 1.0);
            assert!(cdf_rho_d(1e6, &s, 10.0, &ctl(), m).unwrap() > 1.0 - 1e-12);
            assert!(cdf_rho_d(-1.0, &s, 10.0, &ctl(), m).is_err());
        }
        assert_eq!(pdf_rho_d(0.0, &s, 10.0, &ctl()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn pdf_normalizes() {
        for n in [1, 2, 5, 10, 32] {
            let p = SystemParams::new(n, 10.0, 0.0);
            let s = derive_stats(&p);
            let g = p.snr_d_linear();
            // x = u² removes the x^{-1/2} singularity at the origin
            let upper = (g * (s.lambda.sqrt() + 12.0 * s.sigma2.sqrt()).powi(2)).sqrt();
            let total: f64 = adaptive(
                |u| Ok::<_, Error>(if u == 0.0 { 0.0 } else { 2.0 * u * pdf_rho_d(u * u, &s, g, &ctl())? }),
                0.0,
                upper,
                &AdaptiveOptions::default(),
            )
            .unwrap();
            assert!((total - 1.0).abs() < 1e-6, "N={n}: {total}");
        }
    }

    #[test]
    fn pdf_mode_scales_with_snr() {
        let p = SystemParams::new(5, 0.0, 0.0);
        let s = derive_stats(&p);
        let mode = |g: f64| {
            (1..4000)
                .map(|i| i as f64 * 0.01 * g)
                .max_by(|a, b| {
                    let fa = pdf_rho_d(*a, &s, g, &ctl()).unwrap();
                    let fb = pdf_rho_d(*b, &s, g, &ctl()).unwrap();
                    fa.total_cmp(&fb)
                })
                .unwrap()
        };
        let m1 = mode(1.0);
        let m10 = mode(10.0);
        assert!((m10 / m1 - 10.0).abs() < 0.05, "{m1} {m10}");
    }

    #[test]
    fn cdf_derivative_matches_pdf() {
        let p = SystemParams::new(5, 3.0, 0.0);
        let s = derive_stats(&p);
        let g = p.snr_d_linear();
        for i in 1..=50 {
            let x = i as f64 * 2.0;
            let h = 1e-4 * x;
            let f = |x| cdf_rho_d(x, &s, g, &ctl(), CdfMethod::Marcum).unwrap();
            let deriv = (f(x + h) - f(x - h)) / (2.0 * h);
            let pdf = pdf_rho_d(x, &s, g, &ctl()).unwrap();
            assert!((deriv - pdf).abs() <= 1e-4 * pdf, "x={x}: {deriv} vs {pdf}");
        }
    }

    #[test]
    fn methods_agree_at_bessel_reference() {
        // F(x) = ∫₀ˣ f with f from the Bessel form (1/2σ²)(x/λ)^{-1/4}e^{-(x+λ)/2σ²}I_{-1/2}(√(xλ)/σ²)
        let p = SystemParams::new(3, 0.0, 0.0);
        let s = derive_stats(&p);
        let x = 2.0;
        let bessel_pdf = |t: f64| -> f64 {
            let i = specfun::bessel_i(-0.5, (t * s.lambda).sqrt() / s.sigma2, &ctl()).unwrap();
            (t / s.lambda).powf(-0.25) * (-(t + s.lambda) / (2.0 * s.sigma2)).exp() * i / (2.0 * s.sigma2)
        };
        for t in [0.3, 1.0, 2.7] {
            assert!((bessel_pdf(t) - pdf_rho_d(t, &s, 1.0, &ctl()).unwrap()).abs() < 1e-12);
        }
        let a = cdf_rho_d(x, &s, 1.0, &ctl(), CdfMethod::Marcum).unwrap();
        let b = cdf_rho_d(x, &s, 1.0, &ctl(), CdfMethod::Series).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn gamma_d_saturates() {
        let p = SystemParams::new(5, 10.0, -10.0).with_uniform_impairment(0.01);
        let s = derive_stats(&p);
        assert_eq!(cdf_gamma_d(0.0, &p, &s, &ctl()).unwrap(), 0.0);
        assert_eq!(cdf_gamma_d(50.0, &p, &s, &ctl()).unwrap(), 1.0);
        assert_eq!(cdf_gamma_d(1e9, &p, &s, &ctl()).unwrap(), 1.0);
        let below = cdf_gamma_d(5.0, &p, &s, &ctl()).unwrap();
        assert!(below > 0.0 && below < 1.0);
        // γ_D ≤ x ⇔ ρ_D ≤ x/(1−κx)
        let x = 20.0;
        let rho = x / (1.0 - 0.02 * x);
        let want = cdf_rho_d(rho, &s, 10.0, &ctl(), CdfMethod::Marcum).unwrap();
        assert!((cdf_gamma_d(x, &p, &s, &ctl()).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn series_truncation_reports_failure() {
        let p = SystemParams::new(32, 10.0, 0.0);
        let s = derive_stats(&p);
        let tight = SeriesControl { max_terms: 5, rel_tol: 1e-12 };
        let r = cdf_rho_d(100.0, &s, 10.0, &tight, CdfMethod::Series);
        assert!(matches!(r, Err(Error::SpecFun(SpecFunError::NoConvergence { terms: 5, .. }))));
    }

    #[test]
    fn far_tail_ccdf_converges() {
        // Q(k+½, y) keeps growing in k up to k ≈ y, far past the Poisson bulk
        let p = SystemParams::new(29, 0.0, 0.0);
        let s = derive_stats(&p);
        for x in [5e3, 1e5, 1e7] {
            let v = ccdf_rho_d_series(x, &s, 1.0, &ctl()).unwrap();
            assert!((0.0..1e-19).contains(&v), "{x}: {v}");
        }
        let mid = 2.0 * s.lambda;
        let a = ccdf_rho_d_series(mid, &s, 1.0, &ctl()).unwrap();
        let b = 1.0 - cdf_rho_d(mid, &s, 1.0, &ctl(), CdfMethod::Marcum).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} {b}");
    }
}
