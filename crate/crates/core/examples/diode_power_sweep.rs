//! Rectification of the detuned pair over six decades of input power.

use ptls::observables::{rectification, Model};
use ptls::SystemParams;

fn main() -> ptls::Result<()> {
    let base = SystemParams::new(0.12, 0.0, 0.982, 0.0);
    println!("{:>10} {:>8} {:>8} {:>8} {:>8}", "p_inc", "T12", "T21", "R", "L");
    let mut best = (0.0, 0.0);
    for i in 0..=48 {
        let p = 10f64.powf(-5.0 + i as f64 / 8.0);
        let r = rectification(&base.with_p_inc(p), Model::FullQuantum)?;
        if r.l_eff > best.0 {
            best = (r.l_eff, p);
        }
        println!("{p:>10.3e} {:>8.4} {:>8.4} {:>8.4} {:>8.4}", r.t12, r.t21, r.r, r.l_eff);
    }
    println!("peak L = {:.3} at p_inc = {:.3e}", best.0, best.1);
    Ok(())
}
