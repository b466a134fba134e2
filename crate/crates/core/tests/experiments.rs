use condent::experiments::{self, ExperimentRecord, SuiteOptions, CSV_HEADER, SCHEMA_VERSION};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn rows_for<'a>(rows: &'a [ExperimentRecord], name: &str) -> Vec<&'a ExperimentRecord> {
    rows.iter().filter(|r| r.channel == name).collect()
}

#[test]
fn fig2_rows_endpoints_and_shape() {
    let grid = experiments::p_grid(experiments::DEFAULT_GRID_POINTS);
    let rows = experiments::run_fig2(&grid).unwrap();
    assert_eq!(rows.len(), 63);
    assert!(rows.iter().all(|r| r.is_ok() && r.quantity == "smin" && r.experiment == "fig2"));
    for r in &rows {
        assert!(r.bracket_holds(experiments::ROW_SLACK), "{r:?}");
        assert!((r.value - r.upper).abs() < 1e-5, "{r:?}");
    }
    for name in ["cnot", "swap", "id"] {
        let fam = rows_for(&rows, name);
        assert_eq!(fam.len(), 21);
        // at p = 1 every family is the maximally mixed replacer
        assert!((fam[20].value - 1.0).abs() < 1e-5);
        for w in fam.windows(2) {
            assert!(w[1].value >= w[0].value - 1e-6, "{name} not monotone: {w:?}");
        }
    }
    assert!((rows_for(&rows, "cnot")[0].value + 2.0).abs() < 1e-5);
    assert!((rows_for(&rows, "swap")[0].value + 3.0).abs() < 1e-5);
    assert!((rows_for(&rows, "id")[0].value + 1.0).abs() < 1e-5);
    for r in rows_for(&rows, "swap") {
        assert!((r.upper - r.lower).abs() < 1e-5, "SWAP brackets split at p={}", r.p);
    }
}

#[test]
fn fig2_csv_is_bit_identical_across_runs() {
    let grid = experiments::p_grid(4);
    let a = experiments::records_to_csv(&experiments::run_fig2(&grid).unwrap()).unwrap();
    let b = experiments::records_to_csv(&experiments::run_fig2(&grid).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(&format!("{CSV_HEADER}\n")));
    assert!(!a.contains('\r'));
}

#[test]
fn fig2_rejects_out_of_range_grid() {
    assert!(experiments::run_fig2(&[0.0, 1.5]).is_err());
}

#[test]
fn random_fig_is_seeded_and_bracketed() {
    let grid = experiments::p_grid(5);
    let a = experiments::run_random_fig(2, 11, &grid).unwrap();
    let b = experiments::run_random_fig(2, 11, &grid).unwrap();
    assert_eq!(experiments::records_to_csv(&a.rows).unwrap(), experiments::records_to_csv(&b.rows).unwrap());
    assert_eq!(a.rows.len(), 10);
    assert!(a.rows.iter().all(|r| r.is_ok() && r.bracket_holds(experiments::ROW_SLACK)));
    assert_eq!(a.gaps.len(), 2);
    assert!(a.strict_gap(), "{:?}", a.gaps);
}

#[test]
fn csv_file_round_trip_and_header_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("fig.csv");
    let mut rows = experiments::run_fig2(&[0.0]).unwrap();
    rows.iter_mut().for_each(|r| r.wall_time = 0.0);
    experiments::write_csv(&path, &rows).unwrap();
    assert_eq!(experiments::read_csv(&path).unwrap(), rows);
    // no temporary files are left behind
    let names: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1);

    let empty = experiments::records_to_csv(&[]).unwrap();
    assert_eq!(empty, format!("{CSV_HEADER}\n"));
    assert!(experiments::records_from_csv(&empty).unwrap().is_empty());

    let bad = "experiment,channel,p,value\nfig2,cnot,0,1\n";
    assert!(experiments::records_from_csv(bad).is_err());
}

fn text() -> impl Strategy<Value = String> {
    prop::string::string_regex("[a-z0-9 ,\"':;-]{0,12}").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: RngSeed::Fixed(0xc5f), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn csv_round_trip(
        experiment in text(), channel in text(), quantity in text(), status in text(),
        p in 0.0f64..=1.0, value in -1e6f64..1e6, lower in -1e6f64..1e6, upper in -1e6f64..1e6,
        seed in any::<u64>(),
    ) {
        let row = ExperimentRecord { experiment, channel, p, quantity, value, lower, upper, status, seed, wall_time: 0.0 };
        let text = experiments::records_to_csv(std::slice::from_ref(&row)).unwrap();
        let back = experiments::records_from_csv(&text).unwrap();
        prop_assert_eq!(back, vec![row]);
    }
}

fn quick_suite() -> SuiteOptions {
    SuiteOptions { samples: 5, include_aep: false, ..SuiteOptions::default() }
}

#[test]
fn suite_passes_and_serializes() {
    let report = experiments::run_theorem_suite(quick_suite());
    for c in &report.checks {
        assert!(c.passed, "{}: {} ({})", c.name, c.residual, c.detail);
    }
    assert!(report.all_passed);
    assert_eq!(report.seed, 7);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    experiments::write_json(&path, &report).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["checks"].as_array().unwrap().len(), report.checks.len());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["name"].is_string() && c["passed"].is_boolean()));
}

#[test]
fn suite_flags_injected_fault_and_tight_tolerance() {
    let faulty = experiments::run_theorem_suite(SuiteOptions { inject_faulty: true, samples: 2, ..quick_suite() });
    assert!(!faulty.all_passed);
    let v = faulty.checks.iter().find(|c| c.name == "channel-validation").unwrap();
    assert!(!v.passed);

    let tight = experiments::run_theorem_suite(SuiteOptions { tol: 1e-12, samples: 2, ..quick_suite() });
    assert!(!tight.all_passed);
}

#[test]
fn named_suite_channels() {
    let pc = experiments::pauli_controlled().unwrap();
    assert_eq!(pc.dims().a_in, 4);
    assert!(pc.cptp_report(1e-9).holds);
    for m in 2..=3 {
        let n = experiments::controlled_shift(m).unwrap();
        assert!(n.cptp_report(1e-9).holds);
    }
    let ppt = experiments::ppt_by_noise(&condent::channels::BipartiteChannel::cnot().unwrap()).unwrap();
    assert!(ppt.ppt_choi(1e-9).holds);
}
