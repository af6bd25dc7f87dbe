use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netdesign(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netdesign"))
        .current_dir(dir)
        .env_remove("NETDESIGN_WORKERS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&ok(out)).expect("json on stdout")
}

#[test]
fn gen_writes_edge_list_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    ok(&netdesign(
        dir.path(),
        &[
            "gen", "--family", "ws", "--n", "40", "--seed", "7", "--out", "a.txt",
        ],
    ));
    ok(&netdesign(
        dir.path(),
        &[
            "gen", "--family", "ws", "--n", "40", "--seed", "7", "--out", "b.txt",
        ],
    ));
    let a = fs::read_to_string(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, fs::read_to_string(dir.path().join("b.txt")).unwrap());
    assert!(a.starts_with("# family=ws n=40"));
    let edges = a.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(edges, 80);
    let meta = fs::read_to_string(dir.path().join("a.txt.meta")).unwrap();
    assert!(meta.contains("seed=7"));
}

#[test]
fn simulate_reports_conserving_run() {
    let dir = tempfile::tempdir().unwrap();
    ok(&netdesign(
        dir.path(),
        &["gen", "--family", "er", "--n", "50", "--out", "g.txt"],
    ));
    let v = json(&netdesign(
        dir.path(),
        &[
            "simulate",
            "--graph",
            "g.txt",
            "--scheme",
            "bc-spr",
            "--rate",
            "3",
            "--steps",
            "400",
            "--transient",
            "200",
            "--window",
            "50",
            "--trace",
            "theta.csv",
        ],
    ));
    assert_eq!(v["conservation_held"], true);
    let injected = v["injected"].as_u64().unwrap();
    let delivered = v["delivered"].as_u64().unwrap();
    let in_flight = v["in_flight"].as_u64().unwrap();
    assert_eq!(injected, delivered + in_flight);
    let trace = fs::read_to_string(dir.path().join("theta.csv")).unwrap();
    assert_eq!(trace.lines().next(), Some("step,theta"));
    assert_eq!(trace.lines().count(), 401);
}

#[test]
fn simulate_finds_rc_on_a_star() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("star.txt"), "0 1\n0 2\n0 3\n0 4\n").unwrap();
    let v = json(&netdesign(
        dir.path(),
        &["simulate", "--graph", "star.txt", "--find-rc"],
    ));
    let rc = v["simulated_rc"].as_u64().unwrap();
    assert!((4..=6).contains(&rc), "star-5 rc {rc}");
    assert_eq!(v["analytic_rc"].as_f64().unwrap(), 5.0);
}

#[test]
fn table_reads_config_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "[table]\nn = 40\ninstances = 2\nfamilies = \"ba,ws\"\nschemes = \"uc-spr,bc-spr\"\n",
    )
    .unwrap();
    ok(&netdesign(
        dir.path(),
        &["--config", "run.toml", "table", "--out", "t"],
    ));
    let cells = fs::read_to_string(dir.path().join("t/cells.csv")).unwrap();
    assert_eq!(cells.lines().count(), 5);
    assert!(cells.contains("ba-40,40,uc-spr,2,0"));

    ok(&netdesign(
        dir.path(),
        &[
            "--config",
            "run.toml",
            "table",
            "--n",
            "30",
            "--families",
            "er",
            "--out",
            "u",
        ],
    ));
    let cells = fs::read_to_string(dir.path().join("u/cells.csv")).unwrap();
    assert_eq!(cells.lines().count(), 3);
    assert!(cells.contains("er-30,30,bc-spr,2,0"));
    for f in [
        "instances.csv",
        "c_max.csv",
        "rc_analytic.csv",
        "manifest.json",
    ] {
        assert!(dir.path().join("u").join(f).exists(), "{f}");
    }
}

#[test]
fn table_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        [
            "table",
            "--families",
            "pa,hot",
            "--n",
            "60",
            "--instances",
            "3",
            "--out",
            out,
        ]
    };
    ok(&netdesign(dir.path(), &args("one")));
    let two = Command::new(env!("CARGO_BIN_EXE_netdesign"))
        .current_dir(dir.path())
        .env("NETDESIGN_WORKERS", "2")
        .args(args("two"))
        .output()
        .unwrap();
    ok(&two);
    let read = |d: &str| fs::read_to_string(dir.path().join(d).join("instances.csv")).unwrap();
    assert_eq!(read("one"), read("two"));
}

#[test]
fn scaling_writes_fits() {
    let dir = tempfile::tempdir().unwrap();
    ok(&netdesign(
        dir.path(),
        &[
            "scaling",
            "--family",
            "er",
            "--sizes",
            "50,70,100,140",
            "--instances",
            "2",
            "--schemes",
            "uc-spr",
            "--out",
            "s",
        ],
    ));
    let fits = fs::read_to_string(dir.path().join("s/fits.csv")).unwrap();
    assert!(fits.lines().any(|l| l.starts_with("er,b_max,")));
    assert!(dir.path().join("s/samples.csv").exists());
}

#[test]
fn bad_arguments_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = netdesign(
        dir.path(),
        &["gen", "--family", "nope", "--n", "10", "--out", "g.txt"],
    );
    assert!(!out.status.success());
    let out = netdesign(
        dir.path(),
        &["scaling", "--sizes", "50,40,60,70", "--out", "s"],
    );
    assert!(!out.status.success());
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}
