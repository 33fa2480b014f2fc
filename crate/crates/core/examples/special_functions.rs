//! Tour of the special-function kernel.

use ris_secrecy::specfun::{self, SeriesControl};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctl = SeriesControl::default();

    println!("Gamma(0.5)         = {:.15}  (sqrt(pi) = {:.15})", specfun::gamma(0.5), std::f64::consts::PI.sqrt());
    for (s, x) in [(0.5, 1.0), (1.5, 2.0), (10.5, 8.0)] {
        let (p, q) = specfun::regularized_gamma_pq(s, x)?;
        println!("P({s}, {x}) = {p:.12}   Q({s}, {x}) = {q:.12}");
    }

    println!("erf(1)  = {:.15}", specfun::erf(1.0));
    println!("erfc(5) = {:.6e}", specfun::erfc(5.0));

    let z = 2.0_f64;
    let cosh_form = (2.0 / (std::f64::consts::PI * z)).sqrt() * z.cosh();
    println!("I_-1/2(2) = {:.15}  via cosh {:.15}", specfun::bessel_i(-0.5, z, &ctl)?, cosh_form);

    println!("Q_1/2(2, 2) = {:.12}", specfun::marcum_q_half(2.0, 2.0)?);

    for x in [-0.1, -1.0, -10.0, -100.0] {
        println!("Ei({x:>6}) = {:.12e}", specfun::exp_integral_ei(x)?);
    }
    // e^t E1(t) stays O(1/t) even where e^t overflows
    println!("e^t E1(t) at t = 1000: {:.12e}", specfun::scaled_e1(1000.0)?);
    Ok(())
}
