//! Oracle-equivalence check over a fixed scenario grid.
//!
//! Each scenario compares the closed forms against the adaptive-quadrature
//! references of [`crate::oracle`] and against the Monte Carlo simulator.

use crate::channel::{derive_stats, SystemParams};
use crate::error::Result;
use crate::monte_carlo::{self, McConfig};
use crate::oracle;
use crate::secrecy::{self, NumericsConfig};

/// Largest accepted gap between closed form and quadrature reference.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Accepted closed-form vs simulation gap, in standard errors.
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// `N ∈ {5, 10}` × `γ̄_D ∈ {0, 10, 20}` dB × `γ̄_E ∈ {−10, 0}` dB, all
/// impairment levels 0.01, `C_th = 1`.
pub fn oracle_grid() -> Vec<SystemParams> {
    let mut out = Vec::new();
    for n in [5, 10] {
        for d in [0.0, 10.0, 20.0] {
            for e in [-10.0, 0.0] {
                out.push(SystemParams::new(n, d, e).with_uniform_impairment(0.01));
            }
        }
    }
    out
}

pub fn scenario_name(p: &SystemParams) -> String {
    format!("N={} snr_d={}dB snr_e={}dB", p.n_elements, p.snr_d_db, p.snr_e_db)
}

/// Four checks per scenario: SOP and ASC against quadrature and against
/// simulation.
pub fn run(numerics: &NumericsConfig, mc: &McConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for p in oracle_grid() {
        let s = derive_stats(&p);
        let name = scenario_name(&p);
        let sop = secrecy::sop(&p, &s, numerics)?.probability;
        let asc = secrecy::avg_secrecy_capacity(&p, &s, numerics)?.total;
        let sop_ref = oracle::sop(&p, &s)?;
        let asc_ref = oracle::avg_secrecy_capacity(&p, &s)?;
        let sim = monte_carlo::estimate_all(&p, mc)?;

        let quad = |metric: &str, a: f64, b: f64| Check {
            name: format!("{name} {metric} vs quadrature"),
            passed: (a - b).abs() <= QUADRATURE_TOL,
            detail: format!("closed {a:.9} ref {b:.9} gap {:.2e}", (a - b).abs()),
        };
        let simulated = |metric: &str, a: f64, e: &monte_carlo::EstimateWithCI| {
            let z = (a - e.value).abs() / e.std_error;
            Check {
                name: format!("{name} {metric} vs simulation"),
                passed: e.covers(a, MC_SIGMAS),
                detail: format!("closed {a:.6} mc {:.6} se {:.2e} ({z:.1} se)", e.value, e.std_error),
            }
        };
        checks.push(quad("sop", sop, sop_ref));
        checks.push(simulated("sop", sop, &sim.sop));
        checks.push(quad("asc", asc, asc_ref));
        checks.push(simulated("asc", asc, &sim.asc_rate_difference));
    }
    Ok(checks)
}
