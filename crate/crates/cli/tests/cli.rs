use std::process::{Command, Output};

fn cqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqg")).args(args).output().expect("spawn cqg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn dims_csv_rows() {
    let o = cqg(&["dims", "--model", "djq:A1:1/2", "--max-length", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        body,
        ["length,label,n,d,chi_sup", "0,(0),1,1,1", "1,(1),2,5/2,2", "2,(2),3,21/4,3", "3,(3),4,85/8,4"]
    );
    assert!(text.contains("# model: djq:A1:1/2"));
    assert!(text.contains("# precision_bits: 128"));
    assert!(text.contains("(alpha, alpha) = 2"));
}

#[test]
fn csv_reads_back_with_comments() {
    let o = cqg(&["dims", "--model", "djq:A2:1/2", "--max-length", "2", "--format", "csv"]);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(o.stdout.as_slice());
    let labels: Vec<String> = rdr.records().map(|r| r.unwrap()[1].to_string()).collect();
    assert_eq!(labels[0], "(0,0)");
    assert!(labels.contains(&"(1,1)".to_string()));
}

#[test]
fn kp_converged_report() {
    let o = cqg(&["kp", "--model", "oplus:3:3.5", "--p", "4", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let order: Vec<usize> = ["\"p\"", "\"terms_summed\"", "\"partial_sum\"", "\"tail_bound\"", "\"verdict\""]
        .iter()
        .map(|k| text.find(k).expect("field present"))
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
    let v = json(&o);
    assert_eq!(v["schema"], "cqg-report/v1");
    assert_eq!(v["model"], "oplus:3:7/2");
    assert_eq!(v["result"]["verdict"]["kind"], "converged");
    let lower: f64 = v["result"]["verdict"]["lower"].as_str().unwrap().parse().unwrap();
    let upper: f64 = v["result"]["verdict"]["upper"].as_str().unwrap().parse().unwrap();
    assert!(lower <= upper && upper - lower < 1e-8);
    assert!((lower - 10.8355720983).abs() < 1e-8);
}

#[test]
fn kp_kac_is_divergent_with_its_own_exit_code() {
    let o = cqg(&["kp", "--model", "oplus:3:3", "--p", "4"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["result"]["verdict"]["kind"], "divergent");
    assert!(json(&o)["result"]["tail_bound"].is_null());
}

#[test]
fn kp_inconclusive_exit() {
    let o = cqg(&["kp", "--model", "djq:A1:1/2", "--p", "16", "--max-length", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["result"]["verdict"]["kind"], "inconclusive");
}

#[test]
fn constants_exponents() {
    let o = cqg(&["constants", "--model", "djq:A1:1/2", "--p", "4", "--r", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let exps: Vec<&str> = v["result"]["exponents"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
    assert_eq!(exps, ["2", "3", "8/3"]);
    let bad = cqg(&["constants", "--model", "djq:A1:1/2", "--p", "6"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("KP_P_NOT_DYADIC"));
}

#[test]
fn diagnostics_have_distinct_codes() {
    let cases: [(&[&str], &str); 6] = [
        (&["frobnicate", "--model", "oplus:3:3.5"], "CLI_UNKNOWN_COMMAND"),
        (&["dims", "--model", "oplus:3"], "MODEL_MALFORMED_SPEC"),
        (&["dims", "--model", "oplus:3:2"], "MODEL_NQ_BELOW_N"),
        (&["table", "--model", "oplus:3:3.5", "--p", "4", "--p-grid", "2,4"], "CLI_CONFLICTING_FLAGS"),
        (&["kp", "--model", "oplus:3:3.5", "--tol", "0"], "CLI_NONPOSITIVE_TOL"),
        (&["dims"], "CLI_MISSING_MODEL"),
    ];
    for (args, code) in cases {
        let o = cqg(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(&format!("error[{code}]")), "{args:?}: {}", stderr(&o));
    }
    let low = cqg(&["kp", "--model", "oplus:3:3.5", "--precision-bits", "32"]);
    assert!(stderr(&low).contains("CLI_LOW_PRECISION"));
    let p = cqg(&["kp", "--model", "oplus:3:3.5", "--p", "3/2"]);
    assert!(stderr(&p).contains("KP_P_BELOW_TWO"));
}

#[test]
fn spectrum_and_fusion() {
    let o = cqg(&["spectrum", "--model", "djq:A1:1/2", "--weight", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["result"]["d"], "5/2");
    assert_eq!(v["result"]["max_eigenvalue"], v["result"]["predicted_max_eigenvalue"]);
    let none = cqg(&["spectrum", "--model", "oplus:3:3.5", "--weight", "1"]);
    assert!(stderr(&none).contains("CLI_NO_SPECTRUM"));
    let f = cqg(&["fusion", "--model", "aut:5:5", "--k", "2", "--l", "3"]);
    let v = json(&f);
    assert_eq!(v["result"]["rule"], "so3");
    assert_eq!(v["result"]["components"].as_array().unwrap().len(), 5);
    assert_eq!(v["result"]["quantum_dimension"]["equal"], true);
    let dj = cqg(&["fusion", "--model", "djq:A2:1/2"]);
    assert!(stderr(&dj).contains("CLI_FUSION_UNSUPPORTED"));
}

#[test]
fn tables_and_decay() {
    let o = cqg(&["table", "--model", "oplus:3:3.5", "--kind", "ratios", "--max-length", "4", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.contains("length,ratio,ratio_decimal\n0,1,1e0\n1,6/7,"));
    let o = cqg(&["table", "--model", "djq:A1:1/2", "--kind", "kp", "--p-grid", "2,4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("2,") && rows[1].contains("converged"));
    let d = cqg(&["decay", "--model", "oplus:3:3.5", "--k", "50"]);
    let base: f64 = json(&d)["result"]["theoretical_base"].as_str().unwrap().parse().unwrap();
    assert!((base - 0.82169).abs() < 1e-5);
}

#[test]
fn verify_passes_and_is_deterministic() {
    for model in ["djq:A1:1/2", "oplus:3:3.5", "aut:4:3"] {
        let a = cqg(&["verify", "--model", model]);
        assert_eq!(a.status.code(), Some(0), "{model}: {}", stdout(&a));
        let b = cqg(&["verify", "--model", model, "--threads", "3"]);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn kp_bytes_do_not_depend_on_threads() {
    let one = cqg(&["kp", "--model", "djq:A2:1/2", "--p", "8", "--threads", "1"]);
    let many = cqg(&["kp", "--model", "djq:A2:1/2", "--p", "8", "--threads", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn output_file_and_config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model": "djq:A1:1/2", "max_length": 2, "format": "csv"}"#).unwrap();
    let out = dir.path().join("dims.csv");
    let o = cqg(&["dims", "--config", cfg.to_str().unwrap(), "--max-length", "1", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.ends_with("length,label,n,d,chi_sup\n0,(0),1,1,1\n1,(1),2,5/2,2\n"));

    std::fs::write(&cfg, r#"{"modle": "oops"}"#).unwrap();
    let o = cqg(&["dims", "--config", cfg.to_str().unwrap()]);
    assert!(stderr(&o).contains("CLI_BAD_CONFIG"));

    let missing = dir.path().join("nope").join("x.json");
    let o = cqg(&["dims", "--model", "oplus:3:3.5", "--output", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("CLI_IO") && stderr(&o).contains("x.json"));
}
