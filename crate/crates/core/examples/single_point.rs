//! Transport and diode figures of merit at one parameter point.
//!
//! `cargo run --example single_point -- 0.12 0 0.982 0.04`

use ptls::observables::{rectification, solve_sources, transport, Model};
use ptls::SystemParams;

fn main() -> ptls::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let params = match args[..] {
        [d1, d2, l, p] => SystemParams::new(d1, d2, l, p),
        [] => SystemParams::new(0.12, 0.0, 0.982, 0.04),
        _ => panic!("usage: single_point DELTA1 DELTA2 DISTANCE P_INC"),
    };
    params.validate()?;

    for model in [Model::FullQuantum, Model::SemiClassical] {
        let (sources, residual) = solve_sources(&params, model)?;
        let t = transport(&sources, &params)?;
        let r = rectification(&params, model)?;
        println!("[{}] residual {residual:.1e}", model.tag());
        println!("  t_k = {:.6} {:+.6}i", t.t_k.re, t.t_k.im);
        println!(
            "  T = {:.6}  R_B = {:.6}  loss = {:.2e}",
            t.transmittance, t.reflectance, t.loss
        );
        println!(
            "  T12 = {:.6}  T21 = {:.6}  R = {:.6}  L = {:.6}",
            r.t12, r.t21, r.r, r.l_eff
        );
    }
    Ok(())
}
