//! Linear-solve steady state compared with long-time integration, alongside
//! the slowest relaxation rate of the generator.

use ptls::generator::rotating_frame_generator;
use ptls::steady_state::{evolve, solve_steady, DensityMatrix};
use ptls::SystemParams;

fn main() -> ptls::Result<()> {
    let points = [
        SystemParams::new(0.4, -0.9, 0.37, 0.1),
        SystemParams::new(0.12, 0.0, 0.982, 0.04),
        SystemParams::new(0.0, 0.0, 1.0, 0.1),
    ];
    for params in points {
        let gen = rotating_frame_generator(&params)?;
        let ss = solve_steady(&gen)?;
        let gap = gen
            .matrix()
            .schur()
            .eigenvalues()
            .expect("eigenvalues")
            .iter()
            .map(|l| -l.re)
            .filter(|r| *r > 1e-10)
            .fold(f64::INFINITY, f64::min);
        println!(
            "(d1 {}, d2 {}, L {}, p {}): residual {:.1e}, slowest rate {gap:.3e}",
            params.delta1, params.delta2, params.distance, params.p_inc, ss.residual
        );
        for t in [50.0, 200.0, 1000.0] {
            let rho = evolve(&gen, &DensityMatrix::ground(), t, 0.02)?;
            let diff = (rho.matrix() - ss.rho.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            println!("  t = {t:>6}: max entry difference {diff:.2e}");
        }
    }
    Ok(())
}
