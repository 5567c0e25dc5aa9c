use ptls::observables::{rectification, Model};
use ptls::sweep::{evaluate_point, presets, run_sweep, write_csv, Axis, AxisParam, ModelChoice, Output, SweepSpec};
use ptls::SystemParams;

fn values(row: &ptls::sweep::ResultRow, o: Output) -> f64 {
    row.outcome.as_ref().unwrap().values[&o][0]
}

#[test]
fn sweep_point_equals_library_call() {
    let params = SystemParams::new(0.12, 0.0, 0.982, 0.04);
    let spec = SweepSpec {
        fixed: params,
        outputs: vec![Output::T12, Output::T21, Output::R, Output::LEff],
        model: ModelChoice::Both,
        ..SweepSpec::default()
    };
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 2);
    for (row, model) in rows.iter().zip([Model::FullQuantum, Model::SemiClassical]) {
        assert_eq!(row.model, model);
        let direct = rectification(&params, model).unwrap();
        assert_eq!(values(row, Output::T12), direct.t12);
        assert_eq!(values(row, Output::T21), direct.t21);
        assert_eq!(values(row, Output::LEff), direct.l_eff);
    }
}

#[test]
fn no_axes_gives_a_single_row() {
    let spec = SweepSpec::default();
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].indices.is_empty());
    let mut csv = Vec::new();
    write_csv(&spec, &rows, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 2);
}

#[test]
fn diode_preset_peaks_in_the_nonlinear_window() {
    let mut spec = presets().remove("fig4").unwrap();
    spec.model = ModelChoice::FullQuantum;
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 60);
    let best = rows
        .iter()
        .max_by(|a, b| values(a, Output::LEff).total_cmp(&values(b, Output::LEff)))
        .unwrap();
    assert!((1e-2..=1e-1).contains(&best.params.p_inc));
    assert!(values(best, Output::T12) > 10.0 * values(best, Output::T21));
}

#[test]
fn profile_preset_has_nodes_at_the_mirrors() {
    let spec = presets().remove("fig2b").unwrap();
    let rows = run_sweep(&spec).unwrap();
    for row in rows {
        let profile = &row.outcome.unwrap().profile;
        assert_eq!(profile.len(), 257);
        let peak = profile.iter().map(|p| p.1).fold(0.0, f64::max);
        let floor = profile.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        for node in [0, 128, 256] {
            assert!(
                (profile[node].1 - floor).abs() < 1e-12 * peak,
                "{:?} at z = {}",
                row.model,
                profile[node].0
            );
        }
        assert!(floor < 0.1 * peak);
    }
}

#[test]
fn site_intensities_repeat_with_the_wavelength() {
    let spec = SweepSpec {
        axes: vec![Axis::values(AxisParam::Distance, vec![0.0, 1.0, 2.0])],
        fixed: SystemParams::new(0.3, -0.2, 0.0, 0.1),
        outputs: vec![Output::P1, Output::P2],
        ..SweepSpec::default()
    };
    let rows = run_sweep(&spec).unwrap();
    let p1: Vec<f64> = rows.iter().map(|r| values(r, Output::P1)).collect();
    assert!((p1[0] - p1[1]).abs() < 1e-10 && (p1[1] - p1[2]).abs() < 1e-10);
}

#[test]
fn expectations_cover_all_operators() {
    let v = evaluate_point(
        &SystemParams::default(),
        Model::FullQuantum,
        &[Output::SExpectations],
        None,
    )
    .unwrap();
    let s = &v.values[&Output::SExpectations];
    assert_eq!(s.len(), 18);
}
