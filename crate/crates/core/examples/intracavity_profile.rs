//! Standing wave between two resonant emitters one wavelength apart.

use ptls::observables::{intracavity, solve_sources, Model};
use ptls::SystemParams;

fn main() -> ptls::Result<()> {
    let params = SystemParams::new(0.0, 0.0, 1.0, 0.1);
    for model in [Model::FullQuantum, Model::SemiClassical] {
        let (sources, _) = solve_sources(&params, model)?;
        let profile = intracavity(&sources, &params, 65)?;
        println!("[{}] mean p_intr = {:.5}", model.tag(), profile.average);
        let peak = profile.values.iter().copied().fold(0.0, f64::max);
        for (z, v) in profile.grid.iter().zip(&profile.values).step_by(2) {
            let bar = "#".repeat((40.0 * v / peak).round() as usize);
            println!("  z = {z:.4}  {v:.5}  {bar}");
        }
    }
    Ok(())
}
