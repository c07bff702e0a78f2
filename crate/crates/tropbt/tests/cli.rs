use std::path::PathBuf;
use std::process::Command;

use tropbt::cli::run;

fn running_example() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/running_example.quartic").to_string()
}

fn tropbt(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropbt")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("tropbt-cli-{}-{name}", std::process::id()))
}

#[test]
fn check_accepts_the_running_example() {
    let (code, out) = tropbt(&["check", &running_example()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "smooth"), Some("yes"));
    assert_eq!(value(&out, "generic"), Some("yes"));
}

#[test]
fn constant_valuations_are_not_generic() {
    let path = temp("flat.quartic");
    let text: String = (0..=4)
        .flat_map(|i| (0..=4 - i).map(move |j| format!("A {i} {j} 0 1\n")))
        .collect();
    std::fs::write(&path, text).unwrap();
    let (code, out) = tropbt(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert_eq!(value(&out, "smooth"), Some("no"));
    let (code, _) = tropbt(&["bitangents", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(tropbt(&[]).0, 1);
    assert_eq!(tropbt(&["frobnicate"]).0, 1);
    assert_eq!(tropbt(&["gw", "--field", "fp:4", &running_example()]).0, 1);
    assert_eq!(tropbt(&["lift", "--assign", "1,1=0", &running_example()]).0, 1);
    assert_eq!(tropbt(&["check", "/nonexistent/quartic"]).0, 1);
    assert_eq!(tropbt(&["--help"]).0, 0);
}

#[test]
fn seven_classes_with_bitangent_patterns() {
    let (code, out) = tropbt(&["bitangents", &running_example()]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "classes"), Some("7"));
    for k in 0..7 {
        let p = value(&out, &format!("class.{k}.pattern")).unwrap();
        assert!(["4", "2,2", "2,1,1", "1,1,1,1"].contains(&p), "pattern {p}");
    }
}

#[test]
fn complex_total_is_twenty_eight_ones() {
    let (code, out) = tropbt(&["gw", "--field", "complex", &running_example()]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "total"), Some("28<1>"));
    assert_eq!(value(&out, "degree"), Some("28"));
}

#[test]
fn real_signed_count_is_reported() {
    let (code, out) = tropbt(&["gw", "--field", "reals", &running_example()]);
    assert_eq!(code, 0);
    let s: i64 = value(&out, "signed_count").unwrap().parse().unwrap();
    assert!([0, 2, 4].contains(&s));
}

#[test]
fn lift_totals_are_multiples_of_four() {
    for field in ["reals", "rationals", "fp:7", "fp:11"] {
        let (code, out) = tropbt(&["lift", "--field", field, "--assign", "3,0=-1", &running_example()]);
        assert_eq!(code, 0, "{field}");
        let total: u32 = value(&out, "rational_total").unwrap().parse().unwrap();
        assert_eq!(total % 4, 0);
        assert_eq!(total, 16, "{field}");
    }
}

#[test]
fn e_classes_do_not_lift_with_unit_initials() {
    let (code, out) = tropbt(&["lift", "--field", "reals", &running_example()]);
    assert_eq!(code, 0);
    for k in 0..7 {
        if value(&out, &format!("class.{k}.shape")).unwrap().starts_with('E') {
            assert_eq!(value(&out, &format!("class.{k}.decision")), Some("0"));
        }
    }
    assert_eq!(value(&out, "rational_total"), Some("8"));
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["check", "tropicalize", "bitangents", "lift", "gw"] {
        let a = run(["tropbt", cmd, &running_example()]);
        let b = run(["tropbt", cmd, &running_example()]);
        assert_eq!(a, b, "{cmd}");
        assert_eq!(a.code, 0, "{cmd}: {}", a.stderr);
    }
}

#[test]
fn tropicalize_lists_every_vertex() {
    let out = run(["tropbt", "tropicalize", &running_example()]);
    let n: usize = value(&out.stdout, "vertices").unwrap().parse().unwrap();
    let listed: Vec<&str> = out.stdout.lines().filter(|l| l.starts_with("vertex: ")).collect();
    assert_eq!(listed.len(), n);
    assert_eq!(n, 16);
    let rays = out.stdout.lines().filter(|l| l.starts_with("ray: ")).count();
    assert_eq!(rays, 12);
}

#[test]
fn svg_is_written_on_request() {
    let path = temp("figure.svg");
    let out = run(["tropbt", "bitangents", "--svg", path.to_str().unwrap(), &running_example()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches(r#"class="bitangent-class""#).count(), 7);
    std::fs::remove_file(path).ok();
}
