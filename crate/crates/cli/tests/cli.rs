use std::process::{Command, Output};

fn cskew(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cskew")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compensate_direct_search() {
    let out = cskew(&["compensate", "--i", "7", "--d", "3", "--a", "5", "--init-precision", "64"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "j=4 iterations=1 case=C3_2_STAY\n");
}

#[test]
fn compensate_other_algorithms() {
    let out = cskew(&["compensate", "--i", "1e9", "--d", "1000000", "--a", "999950", "--alg", "fp32"]);
    assert_eq!(stdout(&out), "j=1000049984 iterations=-- case=--\n");
    let out = cskew(&["compensate", "--i", "1e9", "--d", "1000000", "--a", "999950", "--alg", "fp64"]);
    assert_eq!(stdout(&out), "j=1000050003 iterations=-- case=--\n");
    let out = cskew(&["compensate", "--i", "1e9", "--d", "1000000", "--a", "999950"]);
    assert!(stdout(&out).starts_with("j=1000050003 "));
    let out = cskew(&["compensate", "--i", "1000000", "--d", "999900", "--a", "1000000", "--alg", "bres"]);
    assert!(stdout(&out).starts_with("j=999900 "));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(cskew(&["compensate", "--i", "5", "--d", "0", "--a", "5"]).status.code(), Some(2));
    assert_eq!(cskew(&["compensate", "--i", "5", "--d", "20", "--a", "5", "--alg", "bres"]).status.code(), Some(2));
    assert_eq!(cskew(&["bench", "--alg", "quantum"]).status.code(), Some(2));
    assert_eq!(cskew(&["bench", "--ppm", "2000000"]).status.code(), Some(2));
    assert_eq!(cskew(&["fuzz", "--i-max", "18446744073709551615"]).status.code(), Some(2));
    assert_eq!(cskew(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn fuzz_passes_with_zero_and_few_trials() {
    let out = cskew(&["fuzz", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"status\":\"pass\",\"trials\":0}\n");
    let out = cskew(&["fuzz", "--trials", "500", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bench_csv_shape() {
    let out = cskew(&["bench", "--samples", "2000", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algorithm,i,err_min,err_max,err_mean,iter_min,iter_max,iter_mean,n");
    assert_eq!(lines.len(), 17);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 9));
    assert!(lines.contains(&"DIRECT_SEARCH,1000000,0,0,0.0000,1,1,1.0000,2000"));
}

#[test]
fn bench_is_identical_across_thread_counts() {
    let base = ["bench", "--samples", "5000", "--format", "jsonl", "--i", "1e8,1e9"];
    let one = cskew(&[&base[..], &["--threads", "1"]].concat());
    let four = cskew(&[&base[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(stdout(&one).lines().count(), 8);
}

#[test]
fn bench_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("cskew-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.md");
    let out = cskew(&["bench", "--samples", "100", "--alg", "ds,fp32", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let table = std::fs::read_to_string(&path).unwrap();
    assert_eq!(table.lines().count(), 2 + 8);
    assert!(table.contains("| Single precision | 1000000 | 0 | 0 | 0.0000 | -- | -- | -- |"));
    std::fs::remove_dir_all(&dir).unwrap();
}
