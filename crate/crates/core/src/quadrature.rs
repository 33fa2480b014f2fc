//! Quadrature rules.
//!
//! [`ChebyshevQuadrature`] is the rule used by the closed forms: nodes
//! `φ_n = cos((2n−1)π/(2Q))`, `n = 1..Q`, mapped onto `[a, b]` by
//! `x_n = a + (b−a)(1+φ_n)/2`. Two weightings are available on those nodes:
//!
//! * [`ChebyshevRule::GaussChebyshev`]: `w_n = (π/Q)·√(1−φ_n²)`. This is the
//!   first-kind Gauss–Chebyshev rule applied to `h(φ)√(1−φ²)`; it converges
//!   only as `O(Q⁻²)` for integrands that do not vanish at the end points.
//! * [`ChebyshevRule::Fejer`]: Fejér's first rule, the interpolatory weights
//!   on the same nodes. Spectral convergence for smooth integrands.
//!
//! [`adaptive`] is a globally adaptive Gauss–Kronrod (7/15) integrator used as
//! the independent reference for every closed form.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::SpecFunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChebyshevRule {
    #[default]
    Fejer,
    GaussChebyshev,
}

/// `cos((2n−1)π/(2Q))` for `n = 1..=Q`.
pub fn chebyshev_nodes(q: usize) -> Vec<f64> {
    (1..=q).map(|n| node_angle(n, q).cos()).collect()
}

fn node_angle(n: usize, q: usize) -> f64 {
    (2 * n - 1) as f64 * PI / (2 * q) as f64
}

/// Precomputed nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct ChebyshevQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rule: ChebyshevRule,
}

impl ChebyshevQuadrature {
    pub fn new(order: usize, rule: ChebyshevRule) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let nodes = chebyshev_nodes(order);
        let weights = match rule {
            ChebyshevRule::GaussChebyshev => nodes
                .iter()
                .map(|p| PI / order as f64 * (1.0 - p * p).max(0.0).sqrt())
                .collect(),
            ChebyshevRule::Fejer => (1..=order)
                .map(|n| {
                    let theta = node_angle(n, order);
                    let s: f64 = (1..=order / 2)
                        .map(|j| {
                            let j = j as f64;
                            (2.0 * j * theta).cos() / (4.0 * j * j - 1.0)
                        })
                        .sum();
                    2.0 / order as f64 * (1.0 - 2.0 * s)
                })
                .collect(),
        };
        ChebyshevQuadrature {
            nodes,
            weights,
            rule,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn rule(&self) -> ChebyshevRule {
        self.rule
    }

    /// `(φ_n, w_n)` pairs on `[−1, 1]`.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫_a^b f(x) dx` with `x_n = a + (b−a)(1+φ_n)/2`.
    pub fn integrate<F, E>(&self, a: f64, b: f64, mut f: F) -> Result<f64, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
    {
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (phi, w) in self.points() {
            sum += w * f(a + half * (1.0 + phi))?;
        }
        Ok(half * sum)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F, E>(f: &mut F, a: f64, b: f64) -> Result<Segment, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok(Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    })
}

/// Globally adaptive Gauss–Kronrod integration of `f` over a finite `[a, b]`.
pub fn adaptive<F, E>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<SpecFunError>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(SpecFunError::domain("adaptive quadrature", "limits must be finite").into());
    }
    if a == b {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if heap.len() >= opts.max_intervals {
            return Err(SpecFunError::NoConvergence {
                function: "adaptive quadrature",
                terms: heap.len(),
            }
            .into());
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in f64; accept its estimate
            heap.push(Segment { error: 0.0, ..worst });
            err = heap.iter().map(|s| s.error).sum();
            continue;
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if err < 0.0 {
            err = heap.iter().map(|s| s.error).sum();
        }
    }
    // re-sum to shed the drift of the running updates
    Ok(heap.iter().map(|s| s.value).sum())
}
