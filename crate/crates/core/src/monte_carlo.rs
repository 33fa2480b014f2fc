//! Signal-level Monte Carlo simulator.
//!
//! Each trial draws the cascaded Rayleigh channel explicitly: unit-power
//! amplitudes `f = √E`, `E ~ Exp(1)`, for the source–RIS, RIS–destination and
//! RIS–eavesdropper hops, and a uniform residual phase per element on the
//! eavesdropper path. The RIS phases align the legitimate path, so
//! `X₁ = Σ f_R f_D` and `X₂ = |Σ f_R f_E e^{jδ}|`. Impairments are folded into
//! the SNDR; [`compare_noise_models`] checks that reduction against literally
//! sampled distortion noise.
//!
//! Trials are split over `stream_count` ChaCha8 streams sharing one seed. Each
//! stream accumulates independently and the partial results are merged in
//! stream order, so estimates depend only on `(seed, stream_count, trials)`.

use std::f64::consts::{PI, FRAC_PI_4};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{derive_stats, ChannelStats, SystemParams};
use crate::error::{Error, Result};

pub const MIN_TRIALS: u64 = 1_000;

/// How the per-trial channel is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelSampler {
    /// Element-by-element cascaded Rayleigh channel.
    #[default]
    Physical,
    /// Draws straight from the approximate statistics used by the closed
    /// forms: `X₁ ~ N(√λ, σ²)` and exponential `ρ_E`. Useful to separate
    /// implementation errors from approximation errors.
    CltModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub stream_count: u32,
    pub sampler: ChannelSampler,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 1_000_000,
            seed: 1,
            stream_count: 64,
            sampler: ChannelSampler::Physical,
        }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            ..Default::default()
        }
    }

    pub fn with_sampler(mut self, sampler: ChannelSampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return Err(Error::invalid("mc.trials", format!("must be at least {MIN_TRIALS}")));
        }
        if self.stream_count == 0 {
            return Err(Error::invalid("mc.stream_count", "must be positive"));
        }
        if u64::from(self.stream_count) > self.trials {
            return Err(Error::invalid("mc.stream_count", "exceeds the number of trials"));
        }
        Ok(())
    }

    fn stream_trials(&self, stream: u32) -> u64 {
        let s = u64::from(self.stream_count);
        self.trials / s + u64::from(u64::from(stream) < self.trials % s)
    }

    fn stream_rng(&self, stream: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(stream));
        rng
    }
}

/// One simulated channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub x1: f64,
    pub x2: f64,
    pub rho_d: f64,
    pub rho_e: f64,
    pub gamma_d: f64,
    pub gamma_e: f64,
    /// `max(log₂((1+γ_D)/(1+γ_E)), 0)`
    pub r_s: f64,
}

/// Precomputed per-scenario constants for drawing trials.
#[derive(Debug, Clone)]
pub struct Simulator {
    n: usize,
    snr_d: f64,
    snr_e: f64,
    kd: f64,
    ke: f64,
    stats: ChannelStats,
    sampler: ChannelSampler,
}

impl Simulator {
    pub fn new(params: &SystemParams, sampler: ChannelSampler) -> Result<Self> {
        params.validate()?;
        Ok(Simulator {
            n: params.n_elements as usize,
            snr_d: params.snr_d_linear(),
            snr_e: params.snr_e_linear(),
            kd: params.kappa_d_sum(),
            ke: params.kappa_e_sum(),
            stats: derive_stats(params),
            sampler,
        })
    }

    fn draw_channel<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self.sampler {
            ChannelSampler::Physical => {
                let mut x1 = 0.0;
                let (mut re, mut im) = (0.0, 0.0);
                for _ in 0..self.n {
                    let f_r = rayleigh(rng);
                    let f_d = rayleigh(rng);
                    let f_e = rayleigh(rng);
                    let delta: f64 = rng.random_range(-PI..PI);
                    x1 += f_r * f_d;
                    let (s, c) = delta.sin_cos();
                    re += f_r * f_e * c;
                    im += f_r * f_e * s;
                }
                (x1, re.hypot(im))
            }
            ChannelSampler::CltModel => {
                let z: f64 = StandardNormal.sample(rng);
                let x1 = self.stats.lambda.sqrt() + self.stats.sigma2.sqrt() * z;
                let e: f64 = Exp1.sample(rng);
                // ρ_E = γ̄_E X₂² exponential with mean λ_E = γ̄_E N
                (x1, (self.n as f64 * e).sqrt())
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TrialOutcome {
        let (x1, x2) = self.draw_channel(rng);
        let rho_d = self.snr_d * x1 * x1;
        let rho_e = self.snr_e * x2 * x2;
        let gamma_d = rho_d / (self.kd * rho_d + 1.0);
        let gamma_e = rho_e / (self.ke * rho_e + 1.0);
        debug_assert!(self.kd == 0.0 || gamma_d * self.kd <= 1.0 + 1e-12);
        debug_assert!(self.ke == 0.0 || gamma_e * self.ke <= 1.0 + 1e-12);
        let r_s = ((1.0 + gamma_d) / (1.0 + gamma_e)).log2().max(0.0);
        TrialOutcome {
            x1,
            x2,
            rho_d,
            rho_e,
            gamma_d,
            gamma_e,
            r_s,
        }
    }
}

fn rayleigh<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let e: f64 = Exp1.sample(rng);
    e.sqrt()
}

/// Draw a single trial.
pub fn sample_trial<R: Rng + ?Sized>(params: &SystemParams, sampler: ChannelSampler, rng: &mut R) -> Result<TrialOutcome> {
    Ok(Simulator::new(params, sampler)?.sample(rng))
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanVar {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &MeanVar) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64);
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        (self.sample_variance() / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub value: f64,
    /// Sample standard deviation over `√trials`.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    fn from_acc(acc: &MeanVar, seed: u64) -> Self {
        EstimateWithCI {
            value: acc.mean(),
            std_error: acc.std_error(),
            trials: acc.count(),
            seed,
        }
    }

    /// Whether `reference` lies within `k` standard errors.
    pub fn covers(&self, reference: f64, k: f64) -> bool {
        (self.value - reference).abs() <= k * self.std_error
    }
}

/// Run `step` over every trial of every stream and merge the accumulators in
/// stream order.
fn run_streams<A, I, S>(mc: &McConfig, init: I, step: S) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &mut ChaCha8Rng) + Sync,
    A: Mergeable,
{
    let parts: Vec<A> = (0..mc.stream_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = mc.stream_rng(i);
            let mut acc = init();
            for _ in 0..mc.stream_trials(i) {
                step(&mut acc, &mut rng);
            }
            acc
        })
        .collect();
    let mut total = init();
    for p in &parts {
        total.merge_from(p);
    }
    total
}

trait Mergeable {
    fn merge_from(&mut self, other: &Self);
}

impl<const K: usize> Mergeable for [MeanVar; K] {
    fn merge_from(&mut self, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            a.merge(b);
        }
    }
}

impl Mergeable for Vec<f64> {
    fn merge_from(&mut self, other: &Self) {
        self.extend_from_slice(other);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AscDefinition {
    /// Difference of ergodic rates, `E[log₂(1+γ_D)] − E[log₂(1+γ_E)]`.
    #[default]
    RateDifference,
    /// Mean of the clipped instantaneous secrecy rate `E[r_s]`.
    ClippedRate,
}

/// All secrecy estimates from a single pass over the trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimates {
    pub sop: EstimateWithCI,
    pub asc_rate_difference: EstimateWithCI,
    pub asc_clipped: EstimateWithCI,
}

pub fn estimate_all(params: &SystemParams, mc: &McConfig) -> Result<McEstimates> {
    mc.validate()?;
    let sim = Simulator::new(params, mc.sampler)?;
    let c_th = params.c_th;
    let acc = run_streams(
        mc,
        || [MeanVar::default(); 3],
        |acc, rng| {
            let t = sim.sample(rng);
            acc[0].push(if t.r_s < c_th { 1.0 } else { 0.0 });
            acc[1].push(t.gamma_d.ln_1p() / std::f64::consts::LN_2 - t.gamma_e.ln_1p() / std::f64::consts::LN_2);
            acc[2].push(t.r_s);
        },
    );
    Ok(McEstimates {
        sop: EstimateWithCI::from_acc(&acc[0], mc.seed),
        asc_rate_difference: EstimateWithCI::from_acc(&acc[1], mc.seed),
        asc_clipped: EstimateWithCI::from_acc(&acc[2], mc.seed),
    })
}

/// Fraction of trials with `r_s < C_th`.
pub fn estimate_sop(params: &SystemParams, mc: &McConfig) -> Result<EstimateWithCI> {
    Ok(estimate_all(params, mc)?.sop)
}

pub fn estimate_asc(params: &SystemParams, mc: &McConfig, definition: AscDefinition) -> Result<EstimateWithCI> {
    let e = estimate_all(params, mc)?;
    Ok(match definition {
        AscDefinition::RateDifference => e.asc_rate_difference,
        AscDefinition::ClippedRate => e.asc_clipped,
    })
}

/// Sample moments of the channel amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMoments {
    pub x1_mean: EstimateWithCI,
    /// Mean of `(X₁ − Nπ/4)²`, i.e. `Var(X₁)` since `E[X₁] = Nπ/4` exactly.
    pub x1_variance: EstimateWithCI,
    pub x2_sq_mean: EstimateWithCI,
}

pub fn estimate_moments(params: &SystemParams, mc: &McConfig) -> Result<ChannelMoments> {
    mc.validate()?;
    let sim = Simulator::new(params, mc.sampler)?;
    let centre = params.n_elements as f64 * FRAC_PI_4;
    let acc = run_streams(
        mc,
        || [MeanVar::default(); 3],
        |acc, rng| {
            let (x1, x2) = sim.draw_channel(rng);
            acc[0].push(x1);
            acc[1].push((x1 - centre).powi(2));
            acc[2].push(x2 * x2);
        },
    );
    Ok(ChannelMoments {
        x1_mean: EstimateWithCI::from_acc(&acc[0], mc.seed),
        x1_variance: EstimateWithCI::from_acc(&acc[1], mc.seed),
        x2_sq_mean: EstimateWithCI::from_acc(&acc[2], mc.seed),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfQuantity {
    RhoD,
    RhoE,
    GammaD,
}

/// Sorted samples of one trial quantity.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_unstable_by(f64::total_cmp);
        EmpiricalCdf { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    pub fn on_grid(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&x| (x, self.eval(x))).collect()
    }

    /// Sample quantile by the inverse empirical CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.samples.len();
        let i = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.samples[i - 1]
    }

    /// Kolmogorov–Smirnov distance `sup |F̂ − F|` to a continuous CDF.
    pub fn ks_distance<F>(&self, mut cdf: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let n = self.samples.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in self.samples.iter().enumerate() {
            let f = cdf(x)?;
            d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
        }
        Ok(d)
    }
}

/// Asymptotic KS critical value at 1 % significance.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

pub fn empirical_cdf(quantity: CdfQuantity, params: &SystemParams, mc: &McConfig) -> Result<EmpiricalCdf> {
    mc.validate()?;
    let sim = Simulator::new(params, mc.sampler)?;
    let samples = run_streams(mc, Vec::new, |acc: &mut Vec<f64>, rng| {
        let t = sim.sample(rng);
        acc.push(match quantity {
            CdfQuantity::RhoD => t.rho_d,
            CdfQuantity::RhoE => t.rho_e,
            CdfQuantity::GammaD => t.gamma_d,
        });
    });
    Ok(EmpiricalCdf::from_samples(samples))
}

/// Mean SNDR with folded impairments versus literally sampled distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModelCheck {
    pub folded_gamma_d: EstimateWithCI,
    pub sampled_gamma_d: EstimateWithCI,
    /// Paired per-trial difference `sampled − folded`.
    pub diff_gamma_d: EstimateWithCI,
    pub folded_gamma_e: EstimateWithCI,
    pub sampled_gamma_e: EstimateWithCI,
    pub diff_gamma_e: EstimateWithCI,
}

/// Per trial, draw `draws` realisations of transmit distortion
/// `η_t ~ CN(0, κ_t²)` (scaled by the signal amplitude), receive distortion
/// `η_r ~ CN(0, κ_r² ρ)` and unit thermal noise, estimate the
/// distortion-plus-noise power `P̂` and form `ρ(M−1)/(M P̂)`, which is unbiased
/// for the folded SNDR `ρ/(κρ + 1)`.
pub fn compare_noise_models(params: &SystemParams, mc: &McConfig, draws: u32) -> Result<NoiseModelCheck> {
    mc.validate()?;
    if draws < 3 {
        return Err(Error::invalid("draws", "need at least 3 noise draws per trial"));
    }
    let sim = Simulator::new(params, mc.sampler)?;
    let (kdt, kdr) = (params.kappa_d_t2, params.kappa_d_r2);
    let (ket, ker) = (params.kappa_e_t2, params.kappa_e_r2);
    let m = f64::from(draws);
    let acc = run_streams(
        mc,
        || [MeanVar::default(); 6],
        |acc, rng| {
            let t = sim.sample(rng);
            let gd = sampled_sndr(t.rho_d, kdt, kdr, draws, rng) * (m - 1.0) / m;
            let ge = sampled_sndr(t.rho_e, ket, ker, draws, rng) * (m - 1.0) / m;
            acc[0].push(t.gamma_d);
            acc[1].push(gd);
            acc[2].push(gd - t.gamma_d);
            acc[3].push(t.gamma_e);
            acc[4].push(ge);
            acc[5].push(ge - t.gamma_e);
        },
    );
    let e = |i: usize| EstimateWithCI::from_acc(&acc[i], mc.seed);
    Ok(NoiseModelCheck {
        folded_gamma_d: e(0),
        sampled_gamma_d: e(1),
        diff_gamma_d: e(2),
        folded_gamma_e: e(3),
        sampled_gamma_e: e(4),
        diff_gamma_e: e(5),
    })
}

// ρ / P̂ with P̂ the mean power of `draws` samples of √ρ·η_t + η_r + n.
fn sampled_sndr<R: Rng + ?Sized>(rho: f64, kt2: f64, kr2: f64, draws: u32, rng: &mut R) -> f64 {
    let mut power = 0.0;
    for _ in 0..draws {
        let eta_t = cn(kt2, rng);
        let eta_r = cn(kr2 * rho, rng);
        let n = cn(1.0, rng);
        let sr = rho.sqrt();
        let re = sr * eta_t.0 + eta_r.0 + n.0;
        let im = sr * eta_t.1 + eta_r.1 + n.1;
        power += re * re + im * im;
    }
    rho / (power / f64::from(draws))
}

fn cn<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> (f64, f64) {
    let s = (0.5 * variance).sqrt();
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    (s * a, s * b)
}
