use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitquant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

#[test]
fn star_of_cartan_coordinate_with_itself() {
    let out = run(&["star", "x_H", "x_H"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "4*c0 + 2*h*x_H - 4*x_X*x_Y");
}

#[test]
fn normal_form_of_word() {
    let out = run(&["nf", "X*H"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "H*X - 2*h*X");
}

#[test]
fn repcheck_table_lists_casimir_scalars() {
    let out = run(&["repcheck", "--max-m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let scalars: Vec<String> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(2).unwrap().to_string())
        .collect();
    assert_eq!(scalars, ["0", "3/4", "2", "15/4", "6"]);
    assert!(text.lines().skip(1).all(|l| l.ends_with("pass")));
}

#[test]
fn unknown_identifier_exits_with_input_error() {
    let out = run(&["star", "x_Q", "x_H"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x_Q"));
}

#[test]
fn unknown_preset_exits_with_input_error() {
    assert_eq!(run(&["--preset", "g2", "check"]).status.code(), Some(2));
}

#[test]
fn verify_passes_for_presets() {
    for preset in ["sl2", "su2", "so21"] {
        let out = run(&["--preset", preset, "verify", "--max-degree", "2"]);
        assert_eq!(out.status.code(), Some(0), "{preset}: {}", stdout(&out));
    }
}

#[test]
fn check_and_casimir_succeed() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("jacobi: ok"));
    let out = run(&["casimir"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("central: yes"));
}

#[test]
fn json_output_is_well_formed() {
    let out = run(&["--json", "star", "x_H", "x_X"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["map"], "standard");
    assert_eq!(v["star"]["x_H*x_X"], "1");
}

#[test]
fn reduce_on_so21_orbit() {
    let out = run(&["--preset", "so21", "reduce", "G*G"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "x_G^2");
}

#[test]
fn so21_relations_report_failing_row() {
    // One printed relation is off by a factor of two; the command reports it.
    let out = run(&["relations", "so21"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let relations: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "relations:")
        .filter(|l| l.starts_with("  V"))
        .collect();
    assert_eq!(relations.len(), 8);
    assert_eq!(relations.iter().filter(|l| l.ends_with(": holds")).count(), 7);
    assert!(relations[7].starts_with("  V2*V1 - V1*V2") && relations[7].ends_with(": FAILS"));
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&run(&["--preset", "so21", "star", "x_G^2", "x_Et*x_Ft"]));
    let b = stdout(&run(&["--preset", "so21", "star", "x_G^2", "x_Et*x_Ft"]));
    assert_eq!(a, b);
    assert!(!a.trim().is_empty());
}
