//! Secrecy outage probability: closed form, high-SNR approximation and an
//! adaptive-quadrature reference.

use ris_secrecy::channel::{derive_stats, SystemParams};
use ris_secrecy::oracle;
use ris_secrecy::secrecy::{self, theta_coefficients, NumericsConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let num = NumericsConfig::default();
    let base = SystemParams::new(5, 0.0, -10.0).with_uniform_impairment(0.01);
    let t = theta_coefficients(&base);
    println!(
        "theta1 = {:.4}, theta2 = {:.4}, theta3 = {:.4}, theta4 = {:.4}",
        t.theta1, t.theta2, t.theta3, t.theta4
    );

    println!("{:>8} {:>14} {:>14} {:>14}  regime", "snr_d", "sop", "asymptotic", "reference");
    for snr_d in [-10.0, 0.0, 10.0, 20.0, 30.0] {
        let mut p = base.clone();
        p.snr_d_db = snr_d;
        let s = derive_stats(&p);
        let out = secrecy::sop(&p, &s, &num)?;
        let asym = secrecy::sop_asymptotic(&p, &s, &num)?;
        let reference = oracle::sop(&p, &s)?;
        println!(
            "{snr_d:>8} {:>14.6e} {:>14.6e} {:>14.6e}  {:?}",
            out.probability, asym, reference, out.regime
        );
    }
    Ok(())
}
