use std::path::PathBuf;
use std::process::{Command, Output};

fn rootsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootsum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rootsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn sphere_normalizes_to_one() {
    let o = rootsum(&["invariant", "s4", "--order", "5", "--normalized"]);
    assert!(o.status.success());
    assert_eq!(first_line(&o), "1");
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("1.000000000000000000000000000000 + 0.000000000000000000000000000000i"));
}

#[test]
fn sphere_unnormalized_is_inverse_cube() {
    let o = rootsum(&["invariant", "s4", "--order", "3"]);
    assert_eq!(first_line(&o), "1/27");
    let o = rootsum(&["invariant", "s4_6", "--order", "3", "--backend", "brute"]);
    assert_eq!(first_line(&o), "1/27");
}

#[test]
fn projective_plane_values() {
    let o = rootsum(&["invariant", "cp2", "--order", "2", "--normalized"]);
    assert!(o.status.success());
    assert_eq!(first_line(&o), "0");
    let o = rootsum(&["invariant", "cp2", "--order", "3", "--normalized", "--digits", "12"]);
    assert_eq!(stdout(&o).lines().nth(2).unwrap(), "0.000000000000 + 1.000000000000i");
    let o = rootsum(&["invariant", "cp2", "--order", "3", "--normalized", "--digits", "12", "--flip-orientation"]);
    assert_eq!(stdout(&o).lines().nth(2).unwrap(), "0.000000000000 - 1.000000000000i");
}

#[test]
fn verify_passes() {
    let o = rootsum(&["verify", "--orders", "1..4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.lines().count() > 40);
}

#[test]
fn table_passes() {
    let o = rootsum(&["table", "--orders", "1..4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.matches("PASS").count(), 20);
    assert!(!out.contains("FAIL"));
}

#[test]
fn info_reports_counts() {
    let o = rootsum(&["info", "s2xs2"]);
    let out = stdout(&o);
    assert!(out.contains("class counts: [16, 84, 216, 240, 96]"));
    assert!(out.contains("euler characteristic: 4"));
    assert!(out.contains("orientable: true"));
    assert!(out.contains("closed: true"));
}

#[test]
fn product_file_round_trip() {
    let path = scratch("t4.json");
    let o = rootsum(&["product", "t2", "t2", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    let o = rootsum(&["info", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("top simplices: 24"), "{out}");
    assert!(out.contains("euler characteristic: 0"));
    assert!(out.contains("closed: true"));
}

#[test]
fn facet_list_input() {
    let facets: Vec<Vec<usize>> = (0..6).map(|skip| (0..6).filter(|&v| v != skip).collect()).collect();
    let text = format!(r#"{{"vertex_count": 6, "facets": {facets:?}}}"#);
    let path = scratch("boundary5.json");
    std::fs::write(&path, text).unwrap();
    let o = rootsum(&["invariant", path.to_str().unwrap(), "--order", "4", "--normalized"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(first_line(&o), "1");
}

#[test]
fn sweep_of_sphere_is_constant() {
    let o = rootsum(&["sweep", "s4", "--max-order", "5"]);
    assert!(stdout(&o).contains("distinct values: 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(rootsum(&["invariant", "nope", "--order", "2"]).status.code(), Some(2));
    assert_eq!(rootsum(&["invariant", "s4", "--order", "4", "--power", "2"]).status.code(), Some(2));
    assert_eq!(rootsum(&["invariant", "s4", "--order", "0"]).status.code(), Some(2));
    let o = rootsum(&["invariant", "s2xs2", "--order", "3", "--backend", "brute", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    let path = scratch("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(rootsum(&["info", path.to_str().unwrap()]).status.code(), Some(2));
}
