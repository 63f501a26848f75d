use proptest::prelude::*;
use tempfile::TempDir;

use sinegordon::diagnostics::{error_norms, ring_radius};
use sinegordon::grid::{Field, UniformGrid};
use sinegordon::io::{read_snapshot, run, snapshot_file_name, ExportTransform, RunConfig};
use sinegordon::rhs::{enforce_neumann, BoundaryData, FluxFn};
use sinegordon::scenarios::{builtin_scenario, Transform, SCENARIO_NAMES};
use sinegordon::spline::WeightSet;
use sinegordon::Error;

#[test]
fn every_scenario_is_consistent() {
    for name in SCENARIO_NAMES {
        let s = builtin_scenario(name).unwrap();
        s.validate().unwrap();
        assert!(s
            .snapshot_times
            .iter()
            .all(|&t| (0.0..=s.t_end).contains(&t)));
        let g = s.grid().unwrap();
        let sys = s.system(&g).unwrap();
        let st = s.initial_state(&sys).unwrap();
        assert!(st.u.values().iter().all(|v| v.is_finite()));
        if let Some(exact) = s.exact_field(&g, 0.0) {
            let (f1, _) = s.initial_fields(&g).unwrap();
            assert!(f1.max_abs_diff(&exact.unwrap()) <= 1e-12, "{name}");
        }
        let r = ring_radius(&st.u);
        assert!(r.radius >= 0.0 && r.radius <= g.b, "{name}");
    }
}

#[test]
fn snapshots_on_disk_match_the_solver_state() {
    let dir = TempDir::new().unwrap();
    let mut cfg = RunConfig::new("line-soliton-exact");
    cfg.t_end = Some(0.01);
    cfg.snapshots = Some(vec![0.005, 0.01]);
    cfg.transform = ExportTransform::Both;
    cfg.out_dir = dir.path().to_path_buf();
    cfg.timestamp = false;
    let out = run(&cfg).unwrap();
    assert_eq!(out.snapshot_files.len(), 6);
    assert_eq!(out.errors.len(), 3);

    let raw = read_snapshot(&dir.path().join(snapshot_file_name(0.01, Transform::Raw))).unwrap();
    assert_eq!(raw.time, 0.01);
    assert_eq!(raw.field, out.final_state.u);
    let half = read_snapshot(
        &dir.path()
            .join(snapshot_file_name(0.01, Transform::HalfSine)),
    )
    .unwrap();
    assert_eq!(
        half.field,
        out.final_state.u.map(|u| (0.5 * u).sin()).unwrap()
    );

    let spec = builtin_scenario("line-soliton-exact").unwrap();
    let exact = spec.exact_field(raw.field.grid(), 0.01).unwrap().unwrap();
    assert_eq!(
        out.errors[2],
        error_norms(&raw.field, &exact).unwrap().at(0.01, 0.001)
    );

    match run(&cfg) {
        Err(Error::WouldOverwrite(_)) => {}
        other => panic!("expected refusal, got {other:?}"),
    }
}

#[test]
fn run_rejects_bad_overrides() {
    let mut cfg = RunConfig::new("circular-ring");
    cfg.dx = Some(0.3);
    assert!(matches!(run(&cfg), Err(Error::InvalidParameter { key, .. }) if key == "dx"));
    let mut cfg = RunConfig::new("circular-ring");
    cfg.beta = Some(-1.0);
    assert!(matches!(run(&cfg), Err(Error::InvalidParameter { .. })));
    assert!(matches!(
        run(&RunConfig::new("square-ring")),
        Err(Error::UnknownScenario(_))
    ));
}

fn smooth_field(g: &UniformGrid, c: &[f64]) -> Field {
    Field::sample(g, |x, y| {
        c[0] + c[1] * (0.3 * x + c[2]).sin() + c[3] * (0.25 * y).cos() + c[4] * x * y / 49.0
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_idempotent_for_any_flux(
        c in proptest::collection::vec(-2.0f64..2.0, 5),
        g0 in -1.0f64..1.0,
        g1 in -1.0f64..1.0,
        t in 0.0f64..5.0,
    ) {
        let g = UniformGrid::new(-7.0, 7.0, -7.0, 7.0, 29, 29).unwrap();
        let w = WeightSet::build(&g).unwrap();
        let f0: FluxFn = std::sync::Arc::new(move |s, t| g0 * (s + t).sin());
        let f1: FluxFn = std::sync::Arc::new(move |s, _| g1 * s);
        let bd = BoundaryData {
            left: Some(f0.clone()),
            right: Some(f1.clone()),
            bottom: Some(f1),
            top: Some(f0),
        };
        let u = smooth_field(&g, &c);
        let once = enforce_neumann(&u, &w, &bd, t).unwrap();
        let twice = enforce_neumann(&once, &w, &bd, t).unwrap();
        prop_assert!(once.max_abs_diff(&twice) <= 1e-12);
        for i in 1..g.nx - 1 {
            for j in 1..g.ny - 1 {
                prop_assert_eq!(once.get(i, j), u.get(i, j));
            }
        }
    }

    #[test]
    fn max_norm_bounds_rms(
        c in proptest::collection::vec(-2.0f64..2.0, 5),
        d in proptest::collection::vec(-2.0f64..2.0, 5),
    ) {
        let g = UniformGrid::new(-7.0, 7.0, -7.0, 7.0, 15, 11).unwrap();
        let r = error_norms(&smooth_field(&g, &c), &smooth_field(&g, &d)).unwrap();
        prop_assert!(r.rms >= 0.0);
        prop_assert!(r.l_inf >= r.rms);
    }
}
