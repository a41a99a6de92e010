use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn satlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satlab")).args(args).output().expect("spawn satlab")
}

fn tmpdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("satlab-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const K3: &str = "3 3\n0 1\n0 2\n1 2\n";

#[test]
fn verify_exit_codes() {
    let d = tmpdir("verify");
    let k4 = write(&d, "k4", K4);
    let star = write(&d, "star", "4 3\n0 1\n0 2\n0 3\n");
    let k3 = write(&d, "k3", K3);
    let empty = write(&d, "empty", "");
    let stray = write(&d, "stray", "3 1\n0 1\n");
    let path = write(&d, "path", "4 2\n0 1\n1 2\n");

    let o = satlab(&["verify", "--host", &k4, "--sub", &star, "--pattern", "K3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let o = satlab(&["verify", "--host", &k3, "--sub", &empty, "--pattern", "K3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("can be added"));
    // sub on a different vertex count, then an edge outside the host
    let o = satlab(&["verify", "--host", &k4, "--sub", &stray, "--pattern", "K3"]);
    assert_eq!(o.status.code(), Some(2));
    let sparse = write(&d, "sparse", "4 1\n2 3\n");
    let o = satlab(&["verify", "--host", &sparse, "--sub", &path, "--pattern", "K3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("missing from host"));
}

#[test]
fn gen_then_construct_then_verify() {
    let d = tmpdir("pipeline");
    let host = d.join("host").to_string_lossy().into_owned();
    let sub = d.join("sub").to_string_lossy().into_owned();
    let o = satlab(&["construct", "bipartite", "--pattern", "C4", "--n", "120", "--seed", "4", "--host-out", &host, "--out", &sub]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let kv = String::from_utf8_lossy(&o.stdout);
    assert!(kv.contains("construction=bipartite") && kv.contains("verified=true"));
    let o = satlab(&["verify", "--host", &host, "--sub", &sub, "--pattern", "C4"]);
    assert_eq!(o.status.code(), Some(0));

    let g1 = satlab(&["gen", "--n", "50", "--p", "0.3", "--seed", "7"]).stdout;
    let g2 = satlab(&["gen", "--n", "50", "--p", "0.3", "--seed", "7"]).stdout;
    assert_eq!(g1, g2);
    assert!(String::from_utf8_lossy(&g1).starts_with("50 "));
}

#[test]
fn sat_exact_and_props() {
    let o = satlab(&["sat-exact", "--pattern", "K3", "--complete", "6"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "5");
    let d = tmpdir("exact");
    let k4 = write(&d, "k4", K4);
    let o = satlab(&["sat-exact", "--pattern", "K3", "--host", &k4]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "3");

    let o = satlab(&["props", "--pattern", "C5"]);
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("chi=3") && s.contains("ntriangle=yes") && s.contains("star=no"), "{s}");
    let o = satlab(&["props", "--pattern", "K4"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("star=yes"));
    let o = satlab(&["props", "--pattern", "Q9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_csv() {
    let d = tmpdir("sweep");
    let out = d.join("s.csv").to_string_lossy().into_owned();
    let o = satlab(&["sweep", "greedy", "--pattern", "K3", "--n", "64", "--seeds", "1..4", "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "construction,pattern,n,p,seed,edges_before_patch,patch_added,edges_final,uncompleted_before_patch,verified,runtime_ms"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.contains(",true,")));

    let o = satlab(&["sweep", "star", "--pattern", "C4", "--n", "60", "--seeds", "1,2"]);
    let s = String::from_utf8_lossy(&o.stdout);
    assert_eq!(s.matches("error:applicability").count(), 2);
    let o = satlab(&["sweep", "greedy", "--pattern", "K3", "--n", "64", "--seeds", ""]);
    assert_eq!(o.status.code(), Some(2));
}
