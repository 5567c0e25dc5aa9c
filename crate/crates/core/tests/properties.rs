use proptest::prelude::*;

use ptls::analytic::first_order_transmission;
use ptls::generator::rotating_frame_generator;
use ptls::observables::{rectification, solve_sources, transport, Model};
use ptls::semiclassical::mean_field_steady;
use ptls::steady_state::solve_steady;
use ptls::{collective_rates, swap_direction, Direction, SystemParams};

fn detuning() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn power() -> impl Strategy<Value = f64> {
    (-4.0..1.0f64).prop_map(|e| 10f64.powf(e))
}

fn point() -> impl Strategy<Value = SystemParams> {
    (detuning(), detuning(), 0.0..1.0f64, power()).prop_map(|(d1, d2, l, p)| SystemParams::new(d1, d2, l, p))
}

proptest! {
    #[test]
    fn lossless_flux_is_conserved(params in point()) {
        let params = params.with_gamma_bg(0.0);
        let (sources, _) = solve_sources(&params, Model::FullQuantum).unwrap();
        let t = transport(&sources, &params).unwrap();
        prop_assert!((t.transmittance + t.reflectance - 1.0).abs() < 1e-8);
        prop_assert!(t.loss.abs() < 1e-8);
    }

    #[test]
    fn background_loss_only_removes_flux(params in point(), gbg in 1e-3..0.5f64) {
        let params = params.with_gamma_bg(gbg);
        let (sources, _) = solve_sources(&params, Model::FullQuantum).unwrap();
        let t = transport(&sources, &params).unwrap();
        prop_assert!(t.loss > -1e-10);
        prop_assert!(t.transmittance >= -1e-12 && t.reflectance >= -1e-12);
    }

    #[test]
    fn steady_states_are_density_matrices(params in point(), reverse in any::<bool>()) {
        let params = if reverse { params.with_direction(Direction::TwoToOne) } else { params };
        let ss = solve_steady(&rotating_frame_generator(&params).unwrap()).unwrap();
        prop_assert!(ss.rho.axioms().holds(1e-12, 1e-12, -1e-10));
        prop_assert!(ss.residual < 1e-10);
    }

    #[test]
    fn swap_is_an_involution(params in point()) {
        prop_assert_eq!(swap_direction(&swap_direction(&params)), params);
        let sym = SystemParams { delta2: params.delta1, ..params };
        prop_assert_eq!(swap_direction(&sym), sym);
    }

    #[test]
    fn collective_rates_are_periodic(params in point(), shift in 0u32..4) {
        let a = collective_rates(&params);
        let b = collective_rates(&SystemParams { distance: params.distance + shift as f64, ..params });
        prop_assert!((a.gamma12 - b.gamma12).abs() < 1e-12);
        prop_assert!((a.d12 - b.d12).abs() < 1e-12);
        let g = params.gamma;
        prop_assert!((a.gamma12.powi(2) + 4.0 * a.d12.powi(2) - g * g).abs() < 1e-12);
        prop_assert_eq!(a.gamma11, g + params.gamma_bg);
    }

    #[test]
    fn rectifying_factor_ignores_labels(params in point()) {
        let a = rectification(&params, Model::FullQuantum).unwrap();
        let swapped = SystemParams { delta1: params.delta2, delta2: params.delta1, ..params };
        let b = rectification(&swapped, Model::FullQuantum).unwrap();
        prop_assert!((a.r - b.r).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&a.r));
        prop_assert!(a.l_eff <= a.t12 + 1e-15);
    }

    #[test]
    fn single_photon_transmission_is_bounded_and_reciprocal(d1 in detuning(), d2 in detuning(), l in 0.0..1.0f64) {
        let params = SystemParams::new(d1, d2, l, 0.1);
        if let Ok(t) = first_order_transmission(&params) {
            prop_assert!(t.norm() <= 1.0 + 1e-12);
            let other = first_order_transmission(&swap_direction(&params)).unwrap();
            prop_assert!((t - other).norm() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mean_field_stays_in_bloch_ball(params in point()) {
        let mf = mean_field_steady(&params).unwrap();
        prop_assert!(mf.state.bloch_excess() < 1e-9);
        prop_assert!(mf.residual <= 1e-8);
    }

    #[test]
    fn mean_field_symmetric_pair_does_not_rectify(d in detuning(), l in 0.0..1.0f64, p in power()) {
        let r = rectification(&SystemParams::new(d, d, l, p), Model::SemiClassical).unwrap();
        prop_assert!(r.r < 1e-8);
    }
}
