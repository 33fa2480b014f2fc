//! Average secrecy capacity and its two ergodic-rate components.

use ris_secrecy::channel::{derive_stats, SystemParams};
use ris_secrecy::secrecy::{self, NumericsConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let num = NumericsConfig::default();
    println!("{:>6} {:>8} {:>10} {:>10} {:>10}", "kappa2", "snr_d", "R_D", "R_E", "ASC");
    for k2 in [0.0, 0.01, 0.1] {
        for snr_d in [0.0, 10.0, 30.0] {
            let p = SystemParams::new(10, snr_d, -10.0).with_uniform_impairment(k2);
            let c = secrecy::avg_secrecy_capacity(&p, &derive_stats(&p), &num)?;
            println!("{k2:>6} {snr_d:>8} {:>10.4} {:>10.4} {:>10.4}", c.r_d, c.r_e, c.total);
        }
    }
    // with impairments the legitimate rate saturates at log2(1 + 1/kappa_D)
    println!("ceiling for kappa2 = 0.01: {:.4}", (1.0f64 + 1.0 / 0.02).log2());
    Ok(())
}
