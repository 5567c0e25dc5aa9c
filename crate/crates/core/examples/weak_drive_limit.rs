//! Full solver against the closed-form single-photon transmission as the
//! drive is turned down.

use ptls::analytic::first_order_transmission;
use ptls::observables::{solve_sources, transmission_coefficient, Model};
use ptls::SystemParams;

fn main() -> ptls::Result<()> {
    let base = SystemParams::new(0.7, -0.4, 0.3, 0.0).with_gamma_bg(0.0);
    let exact = first_order_transmission(&base)?;
    println!("closed form: t = {:.8} {:+.8}i", exact.re, exact.im);
    println!("{:>8} {:>14} {:>14} {:>10}", "p_inc", "Re t", "Im t", "rel err");
    for p in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let params = base.with_p_inc(p);
        let (sources, _) = solve_sources(&params, Model::FullQuantum)?;
        let t = transmission_coefficient(&sources, &params)?;
        println!(
            "{p:>8.0e} {:>14.8} {:>14.8} {:>10.2e}",
            t.re,
            t.im,
            (t - exact).norm() / exact.norm()
        );
    }
    Ok(())
}
