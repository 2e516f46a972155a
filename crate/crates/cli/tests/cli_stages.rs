//! Stage-level tests of the command-line front end: exit codes, config
//! resolution, artifact presence and rerun determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/minicorpus")
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_repotopics"))
}

fn run_ok(args: &[&str]) {
    let status = binary().args(args).status().unwrap();
    assert_eq!(status.code(), Some(0), "args {args:?}");
}

fn base_args(input: &Path, output: &Path) -> Vec<String> {
    vec![
        "--input".into(),
        input.display().to_string(),
        "--output".into(),
        output.display().to_string(),
        "--t-f".into(),
        "3".into(),
        "--topics".into(),
        "4".into(),
        "--seed".into(),
        "7".into(),
    ]
}

#[test]
fn missing_input_is_a_usage_error() {
    let status = binary().args(["extract", "--output", "/tmp/x"]).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let status = binary().args(["extract", "--no-such-flag"]).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn help_exits_zero_and_lists_flags() {
    let output = binary().arg("--help").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    for flag in [
        "--input",
        "--output",
        "--k",
        "--lsh-threshold",
        "--pair-threshold",
        "--t-f",
        "--stem-threshold",
        "--topics",
        "--iters-plain",
        "--iters-reg",
        "--tau-phi",
        "--tau-theta",
        "--seed",
        "--workers",
        "--semantics",
    ] {
        assert!(text.contains(flag), "help is missing {flag}");
    }
}

#[test]
fn empty_input_dir_is_a_data_error() {
    let empty = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let status = binary()
        .args([
            "extract",
            "--input",
            empty.path().to_str().unwrap(),
            "--output",
            out.path().to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn train_without_extract_is_a_data_error() {
    let out = tempfile::tempdir().unwrap();
    let status = binary()
        .args([
            "train",
            "--input",
            out.path().to_str().unwrap(),
            "--output",
            out.path().to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn config_file_values_apply_and_flags_override() {
    let out = tempfile::tempdir().unwrap();
    let config_path = out.path().join("run.conf");
    std::fs::write(
        &config_path,
        format!(
            "# demo run\ninput = {}\noutput = {}\nt_f = 3\ntopics = 9\nseed = 7\n",
            fixture_dir().display(),
            out.path().join("files").display()
        ),
    )
    .unwrap();
    run_ok(&[
        "pipeline",
        "--config",
        config_path.to_str().unwrap(),
        "--topics",
        "4", // overrides topics = 9 from the file
    ]);
    let model = std::fs::read_to_string(out.path().join("files/model.artm")).unwrap();
    assert!(model.starts_with("ARTM1 "), "{}", &model[..20]);
    let header: Vec<&str> = model.lines().next().unwrap().split(' ').collect();
    assert_eq!(header[2], "4");
}

#[test]
fn bad_config_line_is_a_usage_error() {
    let out = tempfile::tempdir().unwrap();
    let config_path = out.path().join("run.conf");
    std::fs::write(&config_path, "topics = many\n").unwrap();
    let status = binary()
        .args(["extract", "--config", config_path.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn extract_writes_bags_vocab_corpus_and_stats() {
    let out = tempfile::tempdir().unwrap();
    let mut args = base_args(&fixture_dir(), out.path());
    args.insert(0, "extract".into());
    let status = binary().args(&args).status().unwrap();
    assert_eq!(status.code(), Some(0));
    for name in [
        "repos.bags",
        "repos.vocab",
        "repos.corpus",
        "name_lengths.tsv",
        "stem_thresholds.tsv",
        "term_frequencies.tsv",
        "bag_sizes.tsv",
    ] {
        assert!(out.path().join(name).exists(), "missing {name}");
    }
    let bags = std::fs::read_to_string(out.path().join("repos.bags")).unwrap();
    assert_eq!(bags.lines().count(), 7);
}

#[test]
fn dedup_finds_the_planted_clone_triple() {
    let out = tempfile::tempdir().unwrap();
    let base = base_args(&fixture_dir(), out.path());
    for cmd in ["extract", "dedup"] {
        let mut args = base.clone();
        args.insert(0, cmd.into());
        let status = binary().args(&args).status().unwrap();
        assert_eq!(status.code(), Some(0), "{cmd}");
    }
    let dupes = std::fs::read_to_string(out.path().join("duplicates.tsv")).unwrap();
    assert_eq!(dupes.trim(), "webapp\twebapp-copy\twebapp-mirror");
    // The two clones are gone from the filtered bag list.
    let kept = std::fs::read_to_string(out.path().join("repos.dedup.bags")).unwrap();
    assert_eq!(kept.lines().count(), 5);
    assert!(!kept.contains("webapp-copy"));
    assert!(!kept.contains("webapp-mirror"));
}

#[test]
fn dedup_without_clones_writes_empty_sets() {
    // Re-point the input at a clone-free subset by extracting, then
    // dropping the clone repos from the bags file before dedup.
    let out = tempfile::tempdir().unwrap();
    let mut args = base_args(&fixture_dir(), out.path());
    args.insert(0, "extract".into());
    assert_eq!(binary().args(&args).status().unwrap().code(), Some(0));
    let bags_path = out.path().join("repos.bags");
    let filtered: String = std::fs::read_to_string(&bags_path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("webapp-copy") && !l.starts_with("webapp-mirror"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&bags_path, filtered).unwrap();
    let mut args = base_args(&fixture_dir(), out.path());
    args.insert(0, "dedup".into());
    assert_eq!(binary().args(&args).status().unwrap().code(), Some(0));
    let dupes = std::fs::read_to_string(out.path().join("duplicates.tsv")).unwrap();
    assert!(dupes.is_empty());
}

#[test]
fn report_has_one_row_and_one_file_per_topic() {
    let out = tempfile::tempdir().unwrap();
    let mut args = base_args(&fixture_dir(), out.path());
    args.insert(0, "pipeline".into());
    assert_eq!(binary().args(&args).status().unwrap().code(), Some(0));
    let report = std::fs::read_to_string(out.path().join("topics_report.tsv")).unwrap();
    assert_eq!(report.lines().count(), 4);
    for t in 0..4 {
        assert!(out.path().join(format!("topic_{t}_repos.tsv")).exists());
    }
    let metrics = std::fs::read_to_string(out.path().join("metrics.tsv")).unwrap();
    assert_eq!(metrics.lines().count(), 18);
}

#[test]
fn stages_rerun_byte_identically() {
    let out = tempfile::tempdir().unwrap();
    let mut args = base_args(&fixture_dir(), out.path());
    args.insert(0, "pipeline".into());
    assert_eq!(binary().args(&args).status().unwrap().code(), Some(0));
    let snapshot: Vec<(String, Vec<u8>)> = {
        let mut files: Vec<_> = std::fs::read_dir(out.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        files
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(p).unwrap(),
                )
            })
            .collect()
    };
    assert_eq!(binary().args(&args).status().unwrap().code(), Some(0));
    for (name, before) in &snapshot {
        let after = std::fs::read(out.path().join(name)).unwrap();
        assert_eq!(&after, before, "{name} changed across reruns");
    }
}
