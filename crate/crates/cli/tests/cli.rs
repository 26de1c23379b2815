//! Black-box CLI tests: exit codes, output routing, and the
//! validate-lexicon diagnostics.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn stylo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stylo"))
}

fn demo_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/demo/manifest.csv")
        .canonicalize()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_exits_zero_everywhere() {
    for args in [
        vec!["--help"],
        vec!["summarize", "--help"],
        vec!["complexity", "--help"],
        vec!["categories", "--help"],
        vec!["composites", "--help"],
        vec!["distance", "--help"],
        vec!["tree", "--help"],
        vec!["report", "--help"],
        vec!["validate-lexicon", "--help"],
    ] {
        let out = stylo().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        assert!(stdout(&out).contains("Usage"), "{args:?}");
    }
}

#[test]
fn usage_error_exits_one() {
    let out = stylo().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = stylo().args(["summarize", "--bogus-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_manifest_is_a_data_error() {
    let out = stylo()
        .args(["summarize", "--manifest", "/nonexistent/m.csv"])
        .output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read manifest"));
    assert!(stdout(&out).is_empty(), "data goes to stdout only on success");
}

#[test]
fn summarize_writes_markdown_to_stdout() {
    let out = stylo()
        .args(["summarize", "--manifest"])
        .arg(demo_manifest())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("| Arden |"));
    assert!(text.contains("Mean length"));
}

#[test]
fn distance_with_single_text_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.txt"), "only one text").unwrap();
    let manifest = dir.path().join("m.csv");
    fs::write(
        &manifest,
        "id,author,year,source_label,path\na,X,1981,original,a.txt\n",
    )
    .unwrap();
    let out = stylo()
        .args(["distance", "--manifest"])
        .arg(&manifest)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least two texts"), "{}", stderr(&out));
}

#[test]
fn validate_lexicon_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lex");
    fs::write(&bad, "name: X\nfine\nmid*dle\n").unwrap();
    let out = stylo().arg("validate-lexicon").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.lex:3"), "{err}");
    assert!(err.contains("wildcard"), "{err}");

    let good = dir.path().join("good.lex");
    fs::write(&good, "name: Y\nhope\nblam*\n").unwrap();
    let out = stylo().arg("validate-lexicon").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ok (1 literals, 1 stems)"));
}

#[test]
fn tree_formats() {
    let manifest = demo_manifest();
    let newick = stylo()
        .args(["tree", "--manifest"])
        .arg(&manifest)
        .output()
        .unwrap();
    assert_eq!(newick.status.code(), Some(0));
    assert!(stdout(&newick).trim_end().ends_with(';'));

    let svg = stylo()
        .args(["tree", "--format", "svg", "--manifest"])
        .arg(&manifest)
        .output()
        .unwrap();
    assert!(stdout(&svg).starts_with("<svg"));

    let dot = stylo()
        .args(["tree", "--format", "dot", "--manifest"])
        .arg(&manifest)
        .output()
        .unwrap();
    assert!(stdout(&dot).starts_with("graph styletree"));
}

#[test]
fn report_bundle_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle");
    let out = stylo()
        .args(["report", "--manifest"])
        .arg(demo_manifest())
        .arg("--out")
        .arg(&bundle)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(bundle.join("run_manifest.json").exists());

    // single-table --out writes the file instead of stdout
    let table = dir.path().join("complexity.md");
    let out = stylo()
        .args(["complexity", "--manifest"])
        .arg(demo_manifest())
        .arg("--out")
        .arg(&table)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    assert!(fs::read_to_string(&table).unwrap().contains("Mean word length"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        format!("manifest = {:?}\nalpha = 0.05\n", demo_manifest()),
    )
    .unwrap();
    let out = stylo()
        .args(["summarize", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // flag overrides the config's manifest with a broken path
    let out = stylo()
        .args(["summarize", "--config"])
        .arg(&config)
        .args(["--manifest", "/nonexistent/m.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed config is a data error
    fs::write(&config, "alpha = \"not a number\"\n").unwrap();
    let out = stylo()
        .args(["summarize", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed config"));
}

#[test]
fn invalid_alpha_rejected() {
    let out = stylo()
        .args(["complexity", "--alpha", "1.5", "--manifest"])
        .arg(demo_manifest())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"));
}

#[test]
fn env_var_points_at_lexicon_dir() {
    let dir = tempfile::tempdir().unwrap();
    let lexdir = dir.path().join("lex");
    fs::create_dir(&lexdir).unwrap();
    fs::write(lexdir.join("only.lex"), "name: Only\nhope*\n").unwrap();
    let out = stylo()
        .args(["categories", "--set", "semantic", "--manifest"])
        .arg(demo_manifest())
        .env("STYLO_LEXICONS", &lexdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("| Only |"), "{text}");
    assert!(!text.contains("Posemo"));
}
