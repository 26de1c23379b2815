//! End-to-end pipeline checks over the demo corpus: bundle contents,
//! baseline handling, and failure atomicity.

use std::fs;
use std::path::{Path, PathBuf};
use stylometry::pipeline::{self, PipelineConfig, PipelineError};

fn demo_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/demo/manifest.csv")
        .canonicalize()
        .unwrap()
}

#[test]
fn bundle_contains_every_artifact() {
    let out = tempfile::tempdir().unwrap();
    let config = PipelineConfig::new(demo_manifest());
    let result = pipeline::run_pipeline(&config, out.path()).unwrap();

    let expected = [
        "summary.md",
        "summary.csv",
        "complexity.md",
        "complexity.csv",
        "pronouns.md",
        "pronouns.csv",
        "semantic.md",
        "semantic.csv",
        "composites.md",
        "composites.csv",
        "distance_matrix.csv",
        "distance_pairs.csv",
        "tree.nwk",
        "tree.dot",
        "tree.svg",
        "run_manifest.json",
    ];
    for name in expected {
        assert!(
            out.path().join(name).exists(),
            "bundle is missing {name}; wrote {:?}",
            result.files
        );
    }
    assert_eq!(result.files.len(), expected.len());

    // 18 author-source groups: 153 long-form pairs + header
    let pairs = fs::read_to_string(out.path().join("distance_pairs.csv")).unwrap();
    assert_eq!(pairs.lines().count(), 154);

    // tree keeps all 18 leaves
    let newick = fs::read_to_string(out.path().join("tree.nwk")).unwrap();
    assert_eq!(newick.matches("gen1").count(), 6);
    assert_eq!(newick.matches("gen2").count(), 6);

    let manifest = fs::read_to_string(out.path().join("run_manifest.json")).unwrap();
    assert!(manifest.contains("\"tool_version\""));
    assert!(manifest.contains("\"input_sha256\""));
    assert!(!manifest.contains("time"), "run manifest must not embed timestamps");
}

#[test]
fn auto_baselines_are_the_two_generated_labels() {
    let config = PipelineConfig::new(demo_manifest());
    let inputs = pipeline::load_inputs(&config).unwrap();
    let rows = pipeline::style_rows(&inputs, &config).unwrap();

    let labels: Vec<&str> = rows.rows.iter().map(|r| r.profile.subject.as_str()).collect();
    assert_eq!(labels[0], "gen1");
    assert_eq!(labels[1], "gen2");
    assert_eq!(labels.last().unwrap(), &"original (all)");
    assert_eq!(rows.baseline1, Some(0));
    assert_eq!(rows.baseline2, Some(1));

    // baselines never mark themselves
    let columns = vec![
        stylometry::report::Measure::MeanWordLength,
        stylometry::report::Measure::CategoryPct("We".to_string()),
    ];
    let marks = pipeline::compute_marks(&rows, &columns, 0.01, stylometry::stats::TVariant::Welch);
    assert!(!marks[0][0].vs_baseline_1);
    assert!(!marks[1][1].vs_baseline_2);

    // the aggregate row is the concatenation of the six author groups,
    // not a mean of their rows
    let aggregate = &rows.rows.last().unwrap().profile;
    let author_rows = &rows.rows[2..rows.rows.len() - 1];
    let token_sum: usize = author_rows
        .iter()
        .map(|r| r.profile.complexity.token_count)
        .sum();
    assert_eq!(aggregate.complexity.token_count, token_sum);
    let mwl_mean: f64 = author_rows
        .iter()
        .map(|r| r.profile.complexity.mean_word_length)
        .sum::<f64>()
        / author_rows.len() as f64;
    let concatenated_mwl: f64 = author_rows
        .iter()
        .map(|r| {
            r.profile.complexity.mean_word_length * r.profile.complexity.token_count as f64
        })
        .sum::<f64>()
        / token_sum as f64;
    assert!((aggregate.complexity.mean_word_length - concatenated_mwl).abs() < 1e-9);
    // groups differ in size, so the two summaries genuinely disagree
    assert!((concatenated_mwl - mwl_mean).abs() > 1e-12);
}

#[test]
fn explicit_baseline_override_and_unknown_label() {
    let mut config = PipelineConfig::new(demo_manifest());
    config.baseline1 = Some("gen2".to_string());
    let inputs = pipeline::load_inputs(&config).unwrap();
    let rows = pipeline::style_rows(&inputs, &config).unwrap();
    assert_eq!(rows.baseline1, Some(1));
    assert_eq!(rows.baseline2, None);

    config.baseline1 = Some("nope".to_string());
    let err = pipeline::style_rows(&inputs, &config).unwrap_err();
    assert!(matches!(err, PipelineError::UnknownBaseline(ref l) if l == "nope"));
}

#[test]
fn empty_corpus_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.csv");
    fs::write(&manifest, "id,author,year,source_label,path\n").unwrap();
    let out = dir.path().join("bundle");
    let err = pipeline::run_pipeline(&PipelineConfig::new(&manifest), &out).unwrap_err();
    assert!(matches!(err, PipelineError::Metrics(_)));
    assert!(!out.exists(), "no output directory may appear on failure");
}

#[test]
fn broken_corpus_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.csv");
    fs::write(
        &manifest,
        "id,author,year,source_label,path\na,X,1981,orig,missing.txt\n",
    )
    .unwrap();
    let out = dir.path().join("bundle");
    let err = pipeline::run_pipeline(&PipelineConfig::new(&manifest), &out).unwrap_err();
    assert!(matches!(err, PipelineError::Corpus(_)));
    assert!(!out.exists());
}

#[test]
fn two_group_corpus_skips_tree_with_note() {
    let dir = tempfile::tempdir().unwrap();
    for (id, text) in [
        ("a1", "We choose hope and courage. We build the nation."),
        ("a2", "We deliver progress for families everywhere."),
        ("b1", "I fear the crisis. I blame the failures before us."),
        ("b2", "I will confront danger and violence alone."),
    ] {
        fs::write(dir.path().join(format!("{id}.txt")), text).unwrap();
    }
    let manifest = dir.path().join("manifest.csv");
    let mut body = String::from("id,author,year,source_label,path\n");
    for (id, author, _) in [
        ("a1", "A", ""),
        ("a2", "A", ""),
        ("b1", "B", ""),
        ("b2", "B", ""),
    ] {
        body.push_str(&format!("{id},{author},1990,original,{id}.txt\n"));
    }
    fs::write(&manifest, body).unwrap();

    let out = dir.path().join("bundle");
    let result = pipeline::run_pipeline(&PipelineConfig::new(&manifest), &out).unwrap();
    assert!(out.join("distance_matrix.csv").exists());
    assert!(!out.join("tree.nwk").exists());
    assert!(result.notes.iter().any(|n| n.contains("tree skipped")));
}

#[test]
fn custom_lexicon_and_composite_dirs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.txt"), "We hope. They fear danger.").unwrap();
    fs::write(dir.path().join("u.txt"), "We win. We hope again.").unwrap();
    let manifest = dir.path().join("manifest.csv");
    fs::write(
        &manifest,
        "id,author,year,source_label,path\nt,A,1990,original,t.txt\nu,B,1991,original,u.txt\n",
    )
    .unwrap();

    let lexdir = dir.path().join("lex");
    fs::create_dir(&lexdir).unwrap();
    fs::write(lexdir.join("hope.lex"), "name: Hope\nhope*\n").unwrap();
    let cmpdir = dir.path().join("cmp");
    fs::create_dir(&cmpdir).unwrap();
    fs::write(cmpdir.join("h.cmp"), "name: Hopefulness\nHope 2\nintercept 10\n").unwrap();

    let mut config = PipelineConfig::new(&manifest);
    config.lexicon_dir = Some(lexdir);
    config.composite_dir = Some(cmpdir);
    let inputs = pipeline::load_inputs(&config).unwrap();
    assert_eq!(inputs.lexicons.len(), 1);
    assert_eq!(inputs.composites.len(), 1);
    let rows = pipeline::style_rows(&inputs, &config).unwrap();
    let hope = rows.rows[0]
        .profile
        .categories
        .percentage::<f64>("Hope")
        .unwrap();
    assert!(hope > 0.0);
    assert!(rows.rows[0].profile.composites.contains_key("Hopefulness"));
}
