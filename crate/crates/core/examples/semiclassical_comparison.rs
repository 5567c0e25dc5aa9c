//! Mean intracavity intensity of the mean-field and full quantum models.

use ptls::observables::{intracavity, solve_sources, Model, DEFAULT_GRID};
use ptls::SystemParams;

fn main() -> ptls::Result<()> {
    println!("{:>10} {:>12} {:>12} {:>10}", "p_inc", "FQ p_bar", "SC p_bar", "SC/FQ");
    for i in 0..=16 {
        let p = 10f64.powf(-3.0 + i as f64 / 4.0);
        let params = SystemParams::new(0.0, 0.0, 1.0, p);
        let mut bar = [0.0; 2];
        for (k, model) in [Model::FullQuantum, Model::SemiClassical].into_iter().enumerate() {
            let (sources, _) = solve_sources(&params, model)?;
            bar[k] = intracavity(&sources, &params, DEFAULT_GRID)?.average;
        }
        println!(
            "{p:>10.3e} {:>12.5e} {:>12.5e} {:>10.4}",
            bar[0],
            bar[1],
            bar[1] / bar[0]
        );
    }
    Ok(())
}
