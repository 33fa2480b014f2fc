//! Statistics of the legitimate and eavesdropper links.

use ris_secrecy::channel::{self, derive_stats, CdfMethod, Geometry, SystemParams};
use ris_secrecy::specfun::SeriesControl;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctl = SeriesControl::default();
    let p = SystemParams::new(8, 10.0, 0.0).with_uniform_impairment(0.01);
    p.validate()?;
    let s = derive_stats(&p);
    println!("N = {}: lambda = {:.4}, sigma^2 = {:.4}, lambda_E = {:.4}", p.n_elements, s.lambda, s.sigma2, s.lambda_e);

    let snr = p.snr_d_linear();
    // gamma_D never exceeds 1/kappa_D = 50, so its CDF is 1 from there on
    println!("{:>10} {:>12} {:>12} {:>12}", "x", "F_rhoD", "F_rhoE", "F_gammaD");
    for x in [1.0, 10.0, 100.0, 300.0, 1000.0] {
        println!(
            "{x:>10} {:>12.6} {:>12.6} {:>12.6}",
            channel::cdf_rho_d(x, &s, snr, &ctl, CdfMethod::Marcum)?,
            channel::cdf_rho_e(x, &s),
            channel::cdf_gamma_d(x, &p, &s, &ctl)?,
        );
    }

    // SNRs can also come from a path-loss geometry
    let g = Geometry {
        p_s: 1.0,
        n0: 1e-9,
        d_sr: 20.0,
        d_rd: 10.0,
        d_re: 30.0,
        chi: 2.2,
    };
    let from_geometry = SystemParams::from_geometry(8, g);
    println!(
        "geometry: snr_d = {:.2} dB, snr_e = {:.2} dB",
        from_geometry.snr_d_db, from_geometry.snr_e_db
    );
    Ok(())
}
