//! Every bundled example must run to completion. `cargo test` builds them
//! next to the test binaries, under `target/<profile>/examples`.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/<test binary>
    exe.parent().and_then(|d| d.parent()).unwrap().join("examples")
}

fn run(name: &str, args: &[&str]) -> String {
    let path = examples_dir().join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
    assert!(path.exists(), "example binary {} not built; run the full `cargo test`", path.display());
    let out = Command::new(&path).args(args).output().unwrap();
    assert!(out.status.success(), "{name} failed:\n{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn all_examples_run() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    for name in ["disc_and_square", "erosion_and_dilation", "kgon_sharp", "profile_certificates", "dimension_estimate", "grid_oracle"] {
        let out = run(name, &[]);
        assert!(!out.trim().is_empty(), "{name} printed nothing");
    }
    run("cantor_sharp", &["2"]);
    let out = run("render_figures", &[dir]);
    assert_eq!(out.lines().count(), 2);
    for f in ["kgon.svg", "cantor.svg"] {
        let svg = std::fs::read_to_string(tmp.path().join(f)).unwrap();
        assert!(svg.starts_with("<svg"));
    }
}
