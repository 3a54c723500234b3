use std::process::Command;

use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::Value;

use permsym::ci::ComparisonReport;
use permsym::cli::{
    exit_code, run, AllowedOutput, Artifact, CiOutput, Format, IrrepsOutput, ProjectOutput, SpectrumOutput,
    EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION,
};
use permsym::oscillator::bound_window;
use permsym::symgroup::CharacterTable;
use permsym::Error;

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["permsym"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn artifact<T: DeserializeOwned>(args: &[&str]) -> Artifact<T> {
    let (code, out, err) = run_in_process(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?} does not round-trip: {e}"))
}

#[test]
fn allowed_n3_assignments() {
    let a: Artifact<AllowedOutput> = artifact(&["allowed", "--n", "3"]);
    let rows: Vec<(String, Vec<String>, bool)> =
        a.result.rows.iter().map(|r| (r.irrep.clone(), r.multiplets.clone(), r.forbidden)).collect();
    assert_eq!(
        rows,
        [
            ("A1".to_string(), vec![], true),
            ("A2".to_string(), vec!["quadruplet".to_string()], false),
            ("E".to_string(), vec!["doublet".to_string()], false),
        ]
    );
    assert_eq!(a.config.command, "allowed");
    assert_eq!(a.config.n, 3);
}

#[test]
fn allowed_constructive_verification_agrees() {
    let a: Artifact<AllowedOutput> = artifact(&["allowed", "--n", "4", "--verify", "constructive"]);
    assert_eq!(a.result.constructive_agrees, Some(true));
    assert!(a.result.rows.iter().filter(|r| r.forbidden).map(|r| r.irrep.as_str()).eq(["A1", "T2"]));
}

#[test]
fn unbound_coupling_is_a_usage_error() {
    let (code, out, err) = run_in_process(&["spectrum", "--n", "3", "--xi", "2.0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("bound-state window"), "{err}");
}

#[test]
fn parse_errors_are_usage_errors() {
    for args in
        [&["bogus"][..], &["table"], &["table", "--n", "x"], &["ci", "--n", "3", "--xi", "0.1"], &["table", "--n", "5"]]
    {
        let (code, _, err) = run_in_process(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = run_in_process(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("compare"));
}

#[test]
fn every_command_round_trips_and_echoes_its_config() {
    let t: Artifact<CharacterTable> = artifact(&["table", "--n", "4"]);
    assert_eq!(t.result.irreps.len(), 5);

    let s: Artifact<SpectrumOutput> = artifact(&["spectrum", "--n", "3", "--xi", "-0.2", "--max-quanta", "3"]);
    assert_eq!(s.config.xi, Some(-0.2));
    assert_eq!(s.config.max_quanta, Some(3));
    assert_eq!(s.result.levels.len(), 10);
    assert!(s.result.levels.windows(2).all(|w| w[0].energy <= w[1].energy));

    let i: Artifact<IrrepsOutput> = artifact(&["irreps", "--n", "4", "--xi", "0.1", "--max-quanta", "3"]);
    assert!(i.result.max_rounding < 1e-6);
    assert!(i.result.levels.iter().all(|l| !l.irrep_mults.is_empty()));

    let p: Artifact<ProjectOutput> = artifact(&["project", "--n", "3", "--nsym", "3", "--irrep", "A2"]);
    assert_eq!((p.result.copies, p.result.vectors.len()), (1, 1));
    assert_eq!(p.config.irrep.as_deref(), Some("A2"));

    let c: Artifact<CiOutput> = artifact(&["ci", "--n", "3", "--xi", "0.1", "--orbitals", "4", "--ms", "-1/2"]);
    assert_eq!(c.config.ms.map(|m| m.0), Some(-1));
    assert_eq!(c.result.dimension, 24);
    assert!(c.result.states.iter().all(|s| s.ms.0 == -1));

    let r: Artifact<ComparisonReport> =
        artifact(&["compare", "--n", "3", "--xi", "0.1", "--orbitals", "8", "--max-quanta", "3", "--tol", "1e-4"]);
    assert_eq!(r.config.tol, Some(1e-4));
    assert!(r.result.verified());
}

#[test]
fn floats_carry_nine_significant_digits() {
    let (_, out, _) = run_in_process(&["spectrum", "--n", "3", "--xi", "0.1", "--max-quanta", "1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let e = v["result"]["levels"][0]["energy"].as_f64().unwrap();
    assert_eq!(e, 1.49640586);
}

#[test]
fn deterministic_output() {
    let args = ["ci", "--n", "4", "--xi", "0.1", "--orbitals", "4"];
    assert_eq!(run_in_process(&args).1, run_in_process(&args).1);
}

#[test]
fn csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = run_in_process(&["table", "--n", "3", "--format", "csv", "--output", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config: "));
    let config: Value = serde_json::from_str(lines[0].trim_start_matches("# config: ")).unwrap();
    assert_eq!(config["format"], "csv");
    assert_eq!(&lines[1..], ["irrep,dim,E,3σv,2C3", "A1,1,1,1,1", "A2,1,1,-1,1", "E,2,2,0,-1"]);
}

#[test]
fn vacuous_tolerance_fails_verification() {
    let (code, out, _) =
        run_in_process(&["compare", "--n", "3", "--xi", "0.1", "--orbitals", "4", "--max-quanta", "2", "--tol", "inf"]);
    assert_eq!(code, EXIT_VERIFICATION);
    let a: Artifact<ComparisonReport> = serde_json::from_str(&out).unwrap();
    assert!(a.result.vacuous);
    assert_eq!(a.config.tol, Some(f64::INFINITY));
    assert_eq!(a.config.format, Format::Json);
}

#[test]
fn binary_compare_n3_exits_zero() {
    let out = Command::new(env!("CARGO_BIN_EXE_permsym"))
        .args(["compare", "--n", "3", "--xi", "0.1", "--orbitals", "10", "--max-quanta", "4", "--tol", "1e-4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["missing"][0]["quanta_key"], serde_json::json!([0, 0]));
}

fn any_error() -> impl Strategy<Value = Error> {
    let text = "[a-z ]{0,12}";
    prop_oneof![
        (0usize..9, 0usize..9).prop_map(|(expected, found)| Error::SizeMismatch { expected, found }),
        text.prop_map(Error::Domain),
        (2usize..5, -3.0f64..3.0).prop_map(|(n, xi)| Error::UnboundModel { n, xi, lower: -1.0, upper: 1.0 }),
        (1usize..9, 0usize..9).prop_map(|(particles, orbitals)| Error::InfeasibleBasis {
            particles,
            orbitals,
            spin_orbitals: 2 * orbitals
        }),
        (0usize..9999).prop_map(|dim| Error::DimensionCap { dim, cap: 2048 }),
        text.prop_map(Error::NumericalIntegrity),
        text.prop_map(Error::Convergence),
        text.prop_map(Error::Consistency),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn error_classes_map_to_exit_codes(e in any_error()) {
        let want = match e {
            Error::NumericalIntegrity(_) | Error::Convergence(_) | Error::Consistency(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        prop_assert_eq!(exit_code(&e), want);
    }

    #[test]
    fn coupling_outside_the_window_exits_one(n in 3usize..=4, xi in -4.0f64..4.0) {
        let (lo, hi) = bound_window(n);
        let (code, _, _) = run_in_process(&["spectrum", "--n", &n.to_string(), "--xi", &xi.to_string(), "--max-quanta", "2"]);
        let inside = xi > lo && xi < hi;
        prop_assert_eq!(code, if inside { EXIT_OK } else { EXIT_USAGE });
    }

    #[test]
    fn nonpositive_tolerance_exits_one(tol in -1.0f64..=0.0) {
        let (code, _, _) = run_in_process(&["compare", "--n", "3", "--xi", "0.1", "--orbitals", "3", "--max-quanta", "1", "--tol", &tol.to_string()]);
        prop_assert_eq!(code, EXIT_USAGE);
    }
}
