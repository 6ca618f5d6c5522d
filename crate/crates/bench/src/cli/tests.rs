use super::*;
use clap::CommandFactory;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pcmbem").chain(args.iter().copied());
    let status = cli_main(argv, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn last_error_line(stderr: &str) -> &str {
    stderr
        .lines()
        .rev()
        .find(|l| l.starts_with("error: kind="))
        .unwrap_or("")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn command_definition_is_consistent() {
    Cli::command().debug_assert();
}

#[test]
fn level_ranges() {
    let l: Levels = "1:4".parse().unwrap();
    assert_eq!((l.0, l.1), (1, 4));
    let l: Levels = "3".parse().unwrap();
    assert_eq!((l.0, l.1), (3, 3));
    assert!("4:1".parse::<Levels>().is_err());
    assert!("a:2".parse::<Levels>().is_err());
}

#[test]
fn error_lines_are_single_line() {
    let line = error_line("config", "bad\n\"thing\"");
    assert_eq!(line, "error: kind=config message=\"bad 'thing'\"");
}

#[test]
fn no_arguments_prints_usage_and_fails() {
    let (status, out, err) = run_cli(&[]);
    assert_ne!(status, 0);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
    assert!(last_error_line(&err).starts_with("error: kind=usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (status, _, err) = run_cli(&["sphere-conv", "--bogus"]);
    assert_eq!(status, 2);
    assert!(last_error_line(&err).starts_with("error: kind=usage"), "{err}");
}

#[test]
fn help_succeeds() {
    let (status, out, _) = run_cli(&["--help"]);
    assert_eq!(status, 0);
    assert!(out.contains("sphere-workprec") && out.contains("residue-conv"));
}

#[test]
fn missing_mesh_file_is_reported() {
    let (status, _, err) = run_cli(&[
        "residue-conv",
        "--pqr",
        "/nonexistent/x.pqr",
        "--vert",
        "/nonexistent/a.vert",
        "--face",
        "/nonexistent/a.face",
        "--vert",
        "/nonexistent/b.vert",
        "--face",
        "/nonexistent/b.face",
    ]);
    assert_eq!(status, 1);
    assert!(last_error_line(&err).starts_with("error: kind=io"), "{err}");
}

#[test]
fn kirkwood_reference_with_mesh_files_is_rejected() {
    let (status, _, err) = run_cli(&[
        "sphere-conv",
        "--vert",
        &fixture("asp_l2.vert"),
        "--face",
        &fixture("asp_l2.face"),
        "--vert",
        &fixture("asp_l3.vert"),
        "--face",
        &fixture("asp_l3.face"),
    ]);
    assert_eq!(status, 1);
    assert!(last_error_line(&err).starts_with("error: kind=config"), "{err}");
    let (status, _, err) = run_cli(&[
        "residue-conv",
        "--reference",
        "kirkwood",
        "--pqr",
        &fixture("asp.pqr"),
        "--vert",
        &fixture("asp_l2.vert"),
        "--face",
        &fixture("asp_l2.face"),
        "--vert",
        &fixture("asp_l3.vert"),
        "--face",
        &fixture("asp_l3.face"),
    ]);
    assert_eq!(status, 1);
    assert!(last_error_line(&err).contains("kirkwood"), "{err}");
}

#[test]
fn unpaired_mesh_files_are_rejected() {
    let (status, _, err) = run_cli(&[
        "residue-conv",
        "--pqr",
        "x",
        "--vert",
        "a",
        "--vert",
        "b",
        "--face",
        "c",
    ]);
    assert_eq!(status, 1);
    assert!(last_error_line(&err).starts_with("error: kind=config"), "{err}");
}

#[test]
fn born_reports_analytic_limit() {
    let (status, out, err) = run_cli(&["born", "--radius", "6", "--levels", "1:2", "--no-timestamp"]);
    assert_eq!(status, 0, "{err}");
    assert!(out.starts_with("# study=born\n"));
    assert!(out.contains("\nmethod,N,energy_kcal,error_kcal,flops_total,flops_A,iters\n"));
    assert_eq!(out.lines().last().unwrap(), "converged_to=-6.5721 (analytic)");
    assert!(!out.contains("generated_unix"));
}

#[test]
fn sphere_conv_emits_rows_and_orders() {
    let (status, out, err) = run_cli(&[
        "sphere-conv",
        "--R",
        "6",
        "--h",
        "1",
        "--Q",
        "10",
        "--seed",
        "42",
        "--levels",
        "1:2",
        "--no-timestamp",
    ]);
    assert_eq!(status, 0, "{err}");
    let rows: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("PAN,") || l.starts_with("SRF,"))
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(out.lines().filter(|l| l.starts_with("order=")).count(), 2);
    assert!(out.contains("# reference=kirkwood,"));
    assert!(!out.contains("crossover_"));
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert!(fields[3].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn workprec_with_one_method_has_no_crossover() {
    let (status, out, err) = run_cli(&[
        "sphere-workprec",
        "--levels",
        "1:2",
        "--method",
        "pan",
        "--no-timestamp",
    ]);
    assert_eq!(status, 0, "{err}");
    assert!(out.contains("PAN,80,") && !out.contains("SRF,"));
    assert!(!out.contains("crossover_total_kcal"));
}

#[test]
fn workprec_reports_both_crossover_lines() {
    let (status, out, _) = run_cli(&["sphere-workprec", "--levels", "1:2", "--no-timestamp"]);
    assert_eq!(status, 0);
    assert!(out.lines().any(|l| l.starts_with("crossover_total_kcal=")));
    assert!(out.lines().any(|l| l.starts_with("crossover_A_kcal=")));
}

#[test]
fn timestamp_is_the_only_varying_line() {
    let (_, with, _) = run_cli(&["sphere-conv", "--levels", "1:2"]);
    let (_, without, _) = run_cli(&["sphere-conv", "--levels", "1:2", "--no-timestamp"]);
    let kept: Vec<&str> = with.lines().filter(|l| !l.starts_with("# generated_unix=")).collect();
    assert_eq!(kept, without.lines().collect::<Vec<_>>());
    assert_eq!(with.lines().count(), without.lines().count() + 1);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.csv");
    let (status, out, _) = run_cli(&[
        "line-potential",
        "--level",
        "1",
        "--samples",
        "13",
        "--no-timestamp",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(status, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\nz,psi_series,psi_panel,psi_point\n"));
    // z = ±6 touch the poles of the icosphere.
    assert_eq!(text.matches("reason=on the surface").count(), 2);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 11);
}

#[test]
fn equal_permittivities_give_zero_potential() {
    let (status, out, err) = run_cli(&[
        "line-potential",
        "--level",
        "1",
        "--samples",
        "7",
        "--eps-in",
        "80",
        "--eps-out",
        "80",
        "--no-timestamp",
    ]);
    assert_eq!(status, 0, "{err}");
    for line in out.lines().filter(|l| !l.starts_with('#') && !l.starts_with('z')) {
        let v: Vec<f64> = line.split(',').skip(1).map(|f| f.parse().unwrap()).collect();
        assert!(v.iter().all(|x| *x == 0.0), "{line}");
    }
}

#[test]
fn residue_conv_runs_on_fixtures() {
    let (status, out, err) = run_cli(&[
        "residue-conv",
        "--pqr",
        &fixture("arg.pqr"),
        "--vert",
        &fixture("arg_l2.vert"),
        "--face",
        &fixture("arg_l2.face"),
        "--vert",
        &fixture("arg_l3.vert"),
        "--face",
        &fixture("arg_l3.face"),
        "--no-timestamp",
    ]);
    assert_eq!(status, 0, "{err}");
    assert!(out.contains("# reference=richardson,"));
    // With two panel meshes the finest panel error is the extrapolation gap.
    let pan: Vec<&str> = out.lines().filter(|l| l.starts_with("PAN,")).collect();
    assert_eq!(pan.len(), 2);
}
