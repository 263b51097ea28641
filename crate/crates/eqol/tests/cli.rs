use std::path::PathBuf;

use eqol::cli::{EXIT_FALSE, EXIT_MODEL, EXIT_TRUE, EXIT_UNKNOWN, EXIT_UNSUPPORTED, EXIT_USAGE};
use eqol::io;
use eqol::run;
use eqol_core::scenarios::bell::bell_script;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn eqol(args: &[&str]) -> eqol::Outcome {
    run(std::iter::once("eqol").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = eqol(&a);
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {o:?}"))
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn documented_invocations() {
    let s = data("ex33.json");
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", "int(~qb1 | ~qb2) = 2/5.Id"]).code, EXIT_TRUE);
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", "QF"]).code, EXIT_FALSE);
    let o = eqol(&["derive", "--script", &data("bell.json")]);
    assert_eq!(o.code, EXIT_TRUE, "{}", o.stdout);
    assert_eq!(o.stdout.matches("ACCEPTED").count(), 13);
}

#[test]
fn bell_file_matches_the_builtin_script() {
    let from_file = io::load_derivation(std::path::Path::new(&data("bell.json"))).unwrap();
    assert_eq!(from_file, bell_script());
}

#[test]
fn eval_values() {
    let v = json(&[
        "eval",
        "--structure",
        &data("ex33.json"),
        "--term",
        "int(~qb1 | ~qb2)",
        "--term",
        "T[{qb1,qb2};{qb1,qb2}]",
        "--term",
        "T[{};{qb1,qb2}] * T[{qb1,qb2};{qb1,qb2}]",
    ]);
    let got: Vec<f64> = v["values"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    for (g, want) in got.iter().zip([0.4, 0.6, 0.0]) {
        assert!((g - want).abs() < 1e-9, "{got:?}");
    }
}

#[test]
fn block_states_are_tensored() {
    let s = data("product.json");
    let v = json(&["eval", "--structure", &s, "--term", "T[{qb1,qb2};{qb1,qb2}]", "--term", "T[{qb1};{qb1}]"]);
    let got: Vec<f64> = v["values"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert!((got[0] - 0.375).abs() < 1e-12 && (got[1] - 0.75).abs() < 1e-12, "{got:?}");
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", "[{qb1}] /\\ [{qb2}]"]).code, EXIT_TRUE);
}

#[test]
fn json_output_is_deterministic() {
    let runs: [&[&str]; 4] = [
        &["fuzz-sound", "--instances", "5", "--seed", "9", "--jobs", "3"],
        &["bell", "--samples", "50", "--seed", "4"],
        &["mc", "--chain", "CHAIN", "--mode", "I", "--formula", "int(qb1) = Id"],
        &["check", "--structure", "EX33", "--formula", "int(qb1) <= 1/2.Id"],
    ];
    let chain = data("flip_chain.json");
    let ex33 = data("ex33.json");
    for args in runs {
        let args: Vec<&str> =
            args.iter().map(|a| if *a == "CHAIN" { chain.as_str() } else if *a == "EX33" { ex33.as_str() } else { *a }).collect();
        let mut a = args.clone();
        a.push("--json");
        let first = eqol(&a);
        assert!(!first.stdout.is_empty());
        assert_eq!(first, eqol(&a));
    }
}

#[test]
fn fuzz_jobs_do_not_change_the_report() {
    let one = eqol(&["fuzz-sound", "--instances", "12", "--jobs", "1", "--json"]);
    let many = eqol(&["fuzz-sound", "--instances", "12", "--jobs", "5", "--json"]);
    assert_eq!(one.code, EXIT_TRUE);
    assert_eq!(one.stdout, many.stdout);
    let v: serde_json::Value = serde_json::from_str(&one.stdout).unwrap();
    assert_eq!(v["schemas"].as_array().unwrap().len(), 17);
    let only = json(&["fuzz-sound", "--instances", "3", "--schema", "Unit", "--schema", "MO1"]);
    assert_eq!(only["schemas"].as_array().unwrap().len(), 2);
    assert_eq!(eqol(&["fuzz-sound", "--schema", "Nope"]).code, EXIT_USAGE);
}

#[test]
fn tolerance_flag_is_honored() {
    let s = data("ex33.json");
    let f = "int(~qb1 | ~qb2) <= 39/100.Id";
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", f]).code, EXIT_FALSE);
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", f, "--tol", "0.02"]).code, EXIT_TRUE);
    assert_eq!(eqol(&["--tol", "0.02", "check", "--structure", &s, "--formula", f]).code, EXIT_TRUE);
    let v = json(&["check", "--structure", &s, "--formula", "QF", "--tol", "1e-6"]);
    assert_eq!(v["tol"].as_f64(), Some(1e-6));

    // Dephasing from |+> keeps the population at 1/2 forever.
    let c = data("dephasing_chain.json");
    assert_eq!(eqol(&["mc", "--chain", &c, "--mode", "F", "--formula", "int(qb1) <= 49/100.Id"]).code, EXIT_FALSE);
    assert_eq!(
        eqol(&["mc", "--chain", &c, "--mode", "F", "--formula", "int(qb1) <= 49/100.Id", "--tol", "0.02"]).code,
        EXIT_TRUE
    );
    for sub in ["check", "eval", "dnf", "derive", "fuzz-sound", "mc", "loop", "bell", "bb84"] {
        let help = eqol(&[sub, "--help"]);
        assert!(help.stdout.contains("--tol"), "{sub}");
        assert!(help.stdout.contains("--json"), "{sub}");
    }
    assert_eq!(eqol(&["bell", "--tol", "-1"]).code, EXIT_USAGE);
}

#[test]
fn exit_codes_for_bad_inputs() {
    let s = data("ex33.json");
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", "int(qb1 <="]).code, EXIT_USAGE);
    assert_eq!(eqol(&["check", "--structure", "/nonexistent.json", "--formula", "QF"]).code, EXIT_USAGE);
    let bad_trace = temp_file(
        r#"{"qubits":["a"],"V":"all","partition":[["a"]],"state":{"global":{"dim":2,"kind":"diagonal","diag":[0.5,0.6]}}}"#,
    );
    let p = bad_trace.path().to_str().unwrap();
    let o = eqol(&["check", "--structure", p, "--formula", "QF"]);
    assert_eq!(o.code, EXIT_MODEL, "{o:?}");
    let not_json = temp_file("{ qubits: ");
    assert_eq!(eqol(&["check", "--structure", not_json.path().to_str().unwrap(), "--formula", "QF"]).code, EXIT_MODEL);
    let entangled = temp_file(
        r#"{"qubits":["a","b"],"V":"all","partition":[["a"],["b"]],
            "state":{"global":{"dim":4,"kind":"dense","rows":[
              [[0.5,0],[0,0],[0,0],[0.5,0]],[[0,0],[0,0],[0,0],[0,0]],
              [[0,0],[0,0],[0,0],[0,0]],[[0.5,0],[0,0],[0,0],[0.5,0]]]}}}"#,
    );
    assert_eq!(eqol(&["check", "--structure", entangled.path().to_str().unwrap(), "--formula", "QF"]).code, EXIT_MODEL);
    // A variable without an assignment is a defect of the model file.
    assert_eq!(eqol(&["check", "--structure", &s, "--formula", "$y <= Id"]).code, EXIT_MODEL);
}

#[test]
fn derivation_verdicts() {
    let unsupported = temp_file(r#"{"steps":[{"formula":"1/2.Id <= Id","just":{"axiom":"RCF"}}]}"#);
    let o = eqol(&["derive", "--script", unsupported.path().to_str().unwrap()]);
    assert_eq!(o.code, EXIT_UNSUPPORTED, "{o:?}");
    let rcf = temp_file(
        r#"{"steps":[{"formula":"(Id <= $z) \\/ !(Id <= $z)","just":{"axiom":"RCF","pattern":"($a <= $b) \\/ !($a <= $b)","binding":{"a":"Id","b":"$z"}}}]}"#,
    );
    let o = eqol(&["derive", "--script", rcf.path().to_str().unwrap()]);
    assert_eq!(o.code, EXIT_TRUE, "{o:?}");
    let rejected = temp_file(r#"{"steps":[{"formula":"QF","just":{"axiom":"QTaut"}}]}"#);
    assert_eq!(eqol(&["derive", "--script", rejected.path().to_str().unwrap()]).code, EXIT_FALSE);
    let out_of_range = temp_file(r#"{"steps":[{"formula":"QF","just":{"qmp":[1,2]}}]}"#);
    assert_eq!(eqol(&["derive", "--script", out_of_range.path().to_str().unwrap()]).code, EXIT_MODEL);
    let bad_formula = temp_file(r#"{"steps":[{"formula":"QF =>","just":"P"}]}"#);
    assert_eq!(eqol(&["derive", "--script", bad_formula.path().to_str().unwrap()]).code, EXIT_USAGE);
    let v = json(&["derive", "--script", &data("bell.json")]);
    assert_eq!(v["accepted"], 13);
    assert_eq!(v["open_hypotheses"].as_array().unwrap().len(), 0);
}

#[test]
fn chain_queries() {
    let c = data("flip_chain.json");
    assert_eq!(eqol(&["mc", "--chain", &c, "--mode", "F", "--formula", "int(qb1) = Id", "--horizon", "40"]).code, EXIT_TRUE);
    assert_eq!(eqol(&["mc", "--chain", &c, "--mode", "G", "--formula", "int(qb1) = O"]).code, EXIT_FALSE);
    assert_eq!(eqol(&["mc", "--chain", &c, "--mode", "U", "--formula", "int(qb1) = O"]).code, EXIT_FALSE);
    let v = json(&["mc", "--chain", &c, "--mode", "I", "--formula", "int(qb1) = Id"]);
    assert_eq!(v["results"][0]["verdict"], "HOLDS(1)");
    assert_eq!(v["results"][0]["cycle"]["period"], 2);
    // Period-2 flipping never settles within a one-step horizon.
    assert_eq!(
        eqol(&["mc", "--chain", &c, "--mode", "U", "--formula", "int(qb1) = O", "--horizon", "1"]).code,
        EXIT_UNKNOWN
    );
    assert_eq!(eqol(&["mc", "--chain", &c, "--mode", "F", "--formula", "$x <= Id"]).code, EXIT_USAGE);
}

#[test]
fn loop_runs() {
    let rho = data("rho1.json");
    let x = json(&["loop", "--loop", &data("xflip_loop.json"), "--input", &rho, "--max-steps", "64", "--tol", "1e-9"]);
    assert_eq!(x["verdict"], "TERMINATED(1)");
    assert_eq!(x["eqmc"], "HOLDS(1)");
    let id = eqol(&["loop", "--loop", &data("identity_loop.json"), "--input", &rho, "--json"]);
    assert_eq!(id.code, EXIT_FALSE);
    let v: serde_json::Value = serde_json::from_str(&id.stdout).unwrap();
    assert_eq!(v["verdict"], "NOT_BY(64)");
    assert_eq!(v["residual"].as_f64(), Some(1.0));
    let h = json(&["loop", "--loop", &data("hadamard_loop.json"), "--input", &rho]);
    for s in &h["steps"].as_array().unwrap()[1..] {
        assert!((s["p_nonterm"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn scenario_commands() {
    let b = eqol(&["bell"]);
    assert_eq!(b.code, EXIT_TRUE);
    assert!(b.stdout.contains("\"passed\": true"));
    let e = json(&["bb84", "--n", "2", "--eavesdrop", "--threshold", "0.05"]);
    assert_eq!(e["disturbance"], "1/4");
    assert_eq!(e["satisfied"], true);
    let h = eqol(&["bb84", "--n", "2", "--threshold", "0.05", "--dense"]);
    assert_eq!(h.code, EXIT_FALSE);
    assert_eq!(eqol(&["bb84", "--n", "9"]).code, EXIT_USAGE);
    assert_eq!(eqol(&["bb84", "--n", "2", "--sift", "3"]).code, EXIT_USAGE);
}

#[test]
fn dnf_command() {
    let v = json(&["dnf", "--formula", "int(qb1) <= O => [{qb1}]", "--eliminate-integrals", "--qubits", "qb1,qb2"]);
    assert_eq!(v["molecules"], 3);
    assert_eq!(v["eliminated"], "T[{qb1};{qb1,qb2}] + T[{qb1,qb2};{qb1,qb2}] <= O => [{qb1}]");
    let w = json(&["dnf", "--formula", "int(qb1) <= 1/2.Id", "--eliminate-integrals", "--structure", &data("ex33.json")]);
    assert_eq!(w["satisfied"]["original"], w["satisfied"]["normal_form"]);
    assert_eq!(eqol(&["dnf", "--formula", "int(qb1) <= O", "--eliminate-integrals"]).code, EXIT_USAGE);
}

#[test]
fn structure_files_round_trip() {
    for name in ["ex32.json", "ex33.json", "ex51.json", "bell_structure.json", "product.json"] {
        let m = io::load_structure(std::path::Path::new(&data(name)), 1e-9).unwrap();
        let back = io::structure_from_json(&io::structure_to_json(&m), 1e-9).unwrap();
        assert_eq!(back, m, "{name}");
        let text = io::to_json_string(&io::structure_to_json(&m));
        let again: io::StructureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(io::structure_from_json(&again, 1e-9).unwrap(), m);
    }
}
