use fanokit::cli::{run, EXIT_CAP, EXIT_MISMATCH, EXIT_OK, EXIT_REGIME, EXIT_USAGE};

fn fanokit(args: &str) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("fanokit").chain(args.split_whitespace());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn invariants_table() {
    let (code, out) = fanokit("invariants -m 3 -k 1 -d 4");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("t                 1"));
    assert!(out.contains("codim W           1"));
    let (code, out) = fanokit("invariants -m 4 -k 1 -d 3 --json");
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["t"], -2);
    assert_eq!(v["regime"]["expected_fano_dim"], 2);
}

#[test]
fn invalid_parameters_are_usage_errors() {
    assert_eq!(fanokit("invariants -m 3 -k 1 -d 1").0, EXIT_USAGE);
    assert_eq!(fanokit("invariants -m 3 -k 2 -d 2 2").0, EXIT_USAGE);
    assert_eq!(fanokit("verify -m 3 -k 1 -d 4").0, EXIT_USAGE);
    assert_eq!(fanokit("enumerate -m 3 -k 1 --q 4").0, EXIT_USAGE);
    assert_eq!(fanokit("frobnicate").0, EXIT_USAGE);
}

#[test]
fn verify_refuses_when_t_is_not_positive() {
    assert_eq!(fanokit("verify -m 4 -k 1 -d 3 --seed 0 --trials 2").0, EXIT_REGIME);
}

#[test]
fn caps_are_refused() {
    assert_eq!(fanokit("enumerate -m 3 -k 1 --q 7 --count-only --cap 100").0, EXIT_CAP);
    assert_eq!(fanokit("detcheck -m 5 -k 2 -d 3").0, EXIT_CAP);
}

#[test]
fn enumerate_counts() {
    assert_eq!(fanokit("enumerate -m 3 -k 1 --q 2 --count-only"), (EXIT_OK, "35\n".to_string()));
    let (code, out) = fanokit("enumerate -m 2 -k 0 --q 2");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn lemma_scan_and_detcheck() {
    let (code, out) = fanokit("lemma-scan --m-max 10 --d-max 6");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(" 0 counterexamples"));
    let (code, out) = fanokit("detcheck -m 3 -k 1 -d 4");
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("det != 0") && out.contains("leading coeff -1"));
}

#[test]
fn verify_writes_replayable_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().display().to_string();
    let (code, out) = fanokit(&format!("verify -m 4 -k 2 -d 3 --q 3 --trials 3 --seed 5 --out {out_dir}"));
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("expected 0"));
    let (code, out) = fanokit(&format!("replay {out_dir}"));
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("3 certificates, 0 mismatched"));

    let path = dir.path().join("rigidity_m4_k2_d3_p1009_s5x3.fanocert.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"rank\": 6", "\"rank\": 5", 1)).unwrap();
    let (code, out) = fanokit(&format!("replay {}", path.display()));
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("payload.runs[0].rank"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var("FANOKIT_OUT", dir.path());
    let (code, _) = fanokit("detcheck -m 3 -k 1 -d 3");
    std::env::remove_var("FANOKIT_OUT");
    assert_eq!(code, EXIT_OK);
    assert!(dir.path().join("determinant_m3_k1_d3_p2_s0x1.fanocert.json").exists());
}
