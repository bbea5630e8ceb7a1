use std::fs;
use std::path::Path;

use coherent_clock::cli::run;
use serde_json::Value;

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, String) {
    let out = dir.join(name);
    let mut argv = vec!["coherent-clock"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let code = run(argv);
    (code, fs::read_to_string(&out).unwrap_or_default())
}

fn header(csv: &str) -> &str {
    csv.lines().next().unwrap_or("")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_to(dir.path(), "ok.csv", &["verify", "--j", "2"]).0, 0);
    assert_eq!(run_to(dir.path(), "low.csv", &["verify", "--j", "5", "--quad-order", "2"]).0, 2);
    assert_eq!(run(["coherent-clock", "figure", "3"]), 1);
    assert_eq!(run(["coherent-clock", "overlap", "--sweep", "re:1:0:5"]), 1);
    assert_eq!(run(["coherent-clock", "overlap", "--j", "0.3"]), 1);
    assert_eq!(run(["coherent-clock", "symbols", "--j", "3", "--quad-order", "4"]), 1);
    assert_eq!(run(["coherent-clock", "no-such-command"]), 1);
}

#[test]
fn csv_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["overlap", "--pairs", "3"], "xi_re,xi_im,xi_prime_re,xi_prime_im,re,im,abs"),
        (
            &["figure", "1", "--j", "10", "--theta", "0.5"],
            "chart,theta_ref,theta_prime,overlap,closed_form,fitted,sigma2_fit,sigma2_pred",
        ),
        (&["figure", "2", "--j", "10"], "xi_abs,dphi,overlap,closed_form,fitted,sigma2_fit,sigma2_pred"),
        (&["clock-trace", "--m-list", "10,100"], "m,tau,quantum,classical,ratio,deparameterized"),
        (&["verify", "--j", "1"], "module,check,measured,relation,bound,pass"),
        (
            &["symbols", "--sweep", "abs:0:3:4"],
            "xi_re,xi_im,s1,s2,s3,s1_matrix,s2_matrix,s3_matrix,s3_lower,s3_rebuilt,q2_projected,radius_projected",
        ),
    ];
    for (i, (args, expected)) in cases.iter().enumerate() {
        let (code, csv) = run_to(dir.path(), &format!("{i}.csv"), args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(header(&csv), *expected, "{args:?}");
        let width = expected.split(',').count();
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == width));
    }
    let (_, csv) = run_to(dir.path(), "pairs.csv", &["overlap", "--pairs", "3"]);
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(&config, "j = 3.0\nseed = 7\nformat = \"json\"\n").unwrap();
    let cfg = config.to_str().unwrap();

    let (code, text) = run_to(dir.path(), "a.json", &["verify", "--config", cfg]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["metadata"]["config"]["m_prime"], 6);
    assert_eq!(v["metadata"]["config"]["seed"], 7);

    let (code, text) = run_to(dir.path(), "b.json", &["verify", "--config", cfg, "--m-prime", "3", "--seed", "9"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["metadata"]["config"]["m_prime"], 3);
    assert_eq!(v["metadata"]["config"]["seed"], 9);

    fs::write(&config, "spin = 2\n").unwrap();
    assert_eq!(run(["coherent-clock", "verify", "--config", cfg]), 1);
}

#[test]
fn overlap_of_a_state_with_itself_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, csv) = run_to(dir.path(), "o.csv", &["overlap", "--j", "4", "--xi", "0.3,-1.1", "--xi-prime", "0.3,-1.1"]);
    assert_eq!(code, 0);
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!((row[6] - 1.0).abs() < 1e-13);
}
