use std::process::{Command, Output};

fn quadl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadl")).args(args).output().expect("spawn quadl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn mean_csv_has_fixed_header_and_one_row_per_genus() {
    let o = quadl(&["mean", "--q", "5", "--g-min", "1", "--g-max", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "q,g,ensemble_size,sum_L_num,sum_L_den,sum_h,main_proof,main_literal,corollary,rel_err_leading,err_over_2qg"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("5,1,100,120,1,600,"));
}

#[test]
fn mean_writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("quadl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mean.json");
    let o = quadl(&["mean", "--q", "5", "--g", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["records"][0]["g"], 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sample_mode_is_reproducible() {
    let args = ["mean", "--q", "5", "--g", "2", "--mode", "sample", "--sample-size", "50", "--seed", "7"];
    assert_eq!(stdout(&quadl(&args)), stdout(&quadl(&args)));
}

#[test]
fn lpoly_routes_agree() {
    let euler = json(&quadl(&["lpoly", "--q", "5", "-d", "T^3+T+1"]));
    for route in ["direct", "points"] {
        let other = json(&quadl(&["lpoly", "--q", "5", "-d", "T^3+T+1", "--route", route]));
        assert_eq!(euler, other);
    }
    assert_eq!(euler["coeffs"], serde_json::json!(["1", "3", "5"]));
    assert_eq!(euler["class_number"], "9");
}

#[test]
fn small_queries() {
    let s = json(&quadl(&["symbol", "--q", "5", "-d", "T^3+T+1", "-f", "T+1"]));
    assert_eq!(s["symbol"], 1);
    let c = json(&quadl(&["charsum", "--q", "5", "-d", "T^3+T+1", "-n", "1"]));
    assert_eq!(c["sum"], 3);
    assert_eq!(c["within_bound"], true);
    let p = json(&quadl(&["special", "--q", "5", "--what", "P2", "--cutoff", "30"]));
    assert!(p["value"].as_str().unwrap().starts_with("9.66492929"));
    let r = json(&quadl(&["prop2", "--q", "5", "--g", "1", "--l", "T"]));
    assert_eq!(r["main_term"], "250/3");
    let n = json(&quadl(&["nonsquare", "--q", "5", "--g", "1"]));
    assert_eq!(n["sum_l"], "120");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(quadl(&["verify", "--q", "5", "--g-max", "1"]).status.code(), Some(0));
    let faulty = quadl(&["verify", "--q", "5", "--g-max", "1", "--inject-fault"]);
    assert_eq!(faulty.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&faulty.stderr).contains("functional_equation"));
}

#[test]
fn bad_configuration_exits_with_two() {
    for args in [
        &["mean", "--q", "7", "--g", "1"][..],
        &["mean", "--q", "4", "--g", "1"],
        &["mean", "--q", "5", "--g", "1", "--mode", "sample"],
        &["mean", "--q", "5", "--g", "6", "--budget", "1000"],
        &["lpoly", "--q", "5", "-d", "T^2+1"],
        &["special", "--q", "5", "--what", "zeta"],
        &["mean", "--format", "xml"],
    ] {
        assert_eq!(quadl(args).status.code(), Some(2), "{args:?}");
    }
}
