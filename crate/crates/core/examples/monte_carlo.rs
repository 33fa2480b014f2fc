//! Cascaded-channel simulation next to the closed forms.

use ris_secrecy::channel::{derive_stats, SystemParams};
use ris_secrecy::monte_carlo::{self, ChannelSampler, McConfig};
use ris_secrecy::secrecy::{self, NumericsConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = SystemParams::new(10, 10.0, 0.0).with_uniform_impairment(0.01);
    let s = derive_stats(&p);
    let num = NumericsConfig::default();
    let sop = secrecy::sop(&p, &s, &num)?.probability;
    let asc = secrecy::avg_secrecy_capacity(&p, &s, &num)?.total;

    for sampler in [ChannelSampler::Physical, ChannelSampler::CltModel] {
        let mc = McConfig::new(400_000, 7).with_sampler(sampler);
        let e = monte_carlo::estimate_all(&p, &mc)?;
        println!("{sampler:?} sampler, {} trials", e.sop.trials);
        println!("  sop  closed {sop:.5}  simulated {:.5} ± {:.1e}", e.sop.value, e.sop.std_error);
        println!(
            "  asc  closed {asc:.4}   simulated {:.4} ± {:.1e} (clipped rate {:.4})",
            e.asc_rate_difference.value, e.asc_rate_difference.std_error, e.asc_clipped.value
        );
    }

    let m = monte_carlo::estimate_moments(&p, &McConfig::new(400_000, 8))?;
    println!(
        "E[X1] = {:.4} (N pi/4 = {:.4}), Var X1 = {:.4} (sigma^2 = {:.4}), E[X2^2] = {:.4}",
        m.x1_mean.value,
        s.lambda.sqrt(),
        m.x1_variance.value,
        s.sigma2,
        m.x2_sq_mean.value
    );

    let check = monte_carlo::compare_noise_models(&p, &McConfig::new(100_000, 9), 16)?;
    println!(
        "mean SNDR, folded vs sampled distortion: {:.3} vs {:.3} (paired diff {:.2e} ± {:.1e})",
        check.folded_gamma_d.value, check.sampled_gamma_d.value, check.diff_gamma_d.value, check.diff_gamma_d.std_error
    );
    Ok(())
}
