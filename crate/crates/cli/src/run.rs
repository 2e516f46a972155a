//! Command-line front end: resolves the run configuration from defaults,
//! an optional `key = value` config file and flags, then drives the
//! pipeline stages over plain files in the output directory.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use repotopics_core::artm::{save_metrics, save_model, train, TrainConfig};
use repotopics_core::corpus::{
    build_vocabulary, index_corpus, load_corpus, load_vocabulary, save_corpus, save_vocabulary,
    SparseCorpus, Vocabulary,
};
use repotopics_core::embedreport::{
    embed, normalize_rows, save_embedding, save_topic_repos, save_topics_report,
    topic_significance,
};
use repotopics_core::lexing::{ProfileSet, SourceFile};
use repotopics_core::lshdedup::{
    build_index, dedup_corpus, extract_duplicate_sets, plan_bands, save_bins_histogram,
    save_duplicates, CandidateSemantics,
};
use repotopics_core::naming::{
    load_bags, name_stats, raw_bag_of_repo, save_bags, stem_bag, Bag, NamingConfig,
};
use repotopics_core::wminhash::{doc_weights, save_signatures, signature, WmhGenerator};
use repotopics_core::Error as CoreError;
use std::path::{Path, PathBuf};

/// Fully resolved run configuration, defaults matching the reference
/// setup: K=128, LSH threshold 0.9, pair threshold 0.8, frequency cut
/// 20, stem threshold 6, 256 topics, 10 plain + 8 regularized
/// iterations with tau 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub profiles: Option<PathBuf>,
    pub k: u32,
    pub lsh_threshold: f64,
    pub pair_threshold: f64,
    pub t_f: u64,
    pub stem_threshold: usize,
    pub topics: usize,
    pub iters_plain: usize,
    pub iters_reg: usize,
    pub tau_phi: f64,
    pub tau_theta: f64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub semantics: CandidateSemantics,
    pub top_words: usize,
    pub top_repos: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::new(),
            output: PathBuf::new(),
            profiles: None,
            k: 128,
            lsh_threshold: 0.9,
            pair_threshold: 0.8,
            t_f: 20,
            stem_threshold: 6,
            topics: 256,
            iters_plain: 10,
            iters_reg: 8,
            tau_phi: 0.5,
            tau_theta: 0.5,
            seed: 0,
            workers: None,
            semantics: CandidateSemantics::Intersection,
            top_words: 10,
            top_repos: 10,
        }
    }
}

/// A configuration or invocation problem (exit code 1), as opposed to a
/// data error during a stage (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Parser, Debug)]
#[command(
    name = "repotopics",
    version,
    about = "Topic modeling of source-code repositories: bag extraction, \
fuzzy-duplicate removal, regularized topic training and reports."
)]
struct Cli {
    /// Config file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Input directory; each top-level subdirectory is one repository.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output directory for all stage artifacts.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Language profile config file (defaults to the built-in profiles).
    #[arg(long, global = true)]
    profiles: Option<PathBuf>,
    /// Signature size (samples per document).
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Similarity threshold the band planner optimizes for.
    #[arg(long, global = true)]
    lsh_threshold: Option<f64>,
    /// Exact-similarity threshold verified on candidate pairs.
    #[arg(long, global = true)]
    pair_threshold: Option<f64>,
    /// Minimum corpus-wide term count for vocabulary inclusion.
    #[arg(long, global = true)]
    t_f: Option<u64>,
    /// Minimum word length for stemming.
    #[arg(long, global = true)]
    stem_threshold: Option<usize>,
    /// Number of topics.
    #[arg(long, global = true)]
    topics: Option<usize>,
    /// Plain EM iterations before regularization starts.
    #[arg(long, global = true)]
    iters_plain: Option<usize>,
    /// Regularized EM iterations.
    #[arg(long, global = true)]
    iters_reg: Option<usize>,
    /// Phi sparsity regularization strength.
    #[arg(long, global = true)]
    tau_phi: Option<f64>,
    /// Theta sparsity regularization strength.
    #[arg(long, global = true)]
    tau_theta: Option<f64>,
    /// Seed for all randomness in the pipeline.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Candidate grouping: `intersection` (default) or `union`.
    #[arg(long, global = true)]
    semantics: Option<String>,
    /// Words listed per topic in the report.
    #[arg(long, global = true)]
    top_words: Option<usize>,
    /// Repositories listed per topic in the report.
    #[arg(long, global = true)]
    top_repos: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Lex repositories into word bags, vocabulary and sparse corpus.
    Extract,
    /// Detect and remove fuzzy-duplicate repositories.
    Dedup,
    /// Train the regularized topic model.
    Train,
    /// Compute normalized repository embeddings in topic space.
    Embed,
    /// Write the topic and per-topic repository reports.
    Report,
    /// Run all stages in order.
    Pipeline,
}

fn parse_semantics(value: &str) -> Result<CandidateSemantics, UsageError> {
    match value {
        "intersection" => Ok(CandidateSemantics::Intersection),
        "union" => Ok(CandidateSemantics::Union),
        other => Err(usage(format!(
            "semantics must be `intersection` or `union`, got `{other}`"
        ))),
    }
}

/// Apply one `key = value` config line to the config under construction.
fn apply_key(config: &mut RunConfig, key: &str, value: &str) -> Result<(), UsageError> {
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
        value
            .parse()
            .map_err(|_| usage(format!("invalid value `{value}` for `{key}`")))
    }
    match key {
        "input" => config.input = PathBuf::from(value),
        "output" => config.output = PathBuf::from(value),
        "profiles" => config.profiles = Some(PathBuf::from(value)),
        "k" => config.k = num(key, value)?,
        "lsh_threshold" => config.lsh_threshold = num(key, value)?,
        "pair_threshold" => config.pair_threshold = num(key, value)?,
        "t_f" => config.t_f = num(key, value)?,
        "stem_threshold" => config.stem_threshold = num(key, value)?,
        "topics" => config.topics = num(key, value)?,
        "iters_plain" => config.iters_plain = num(key, value)?,
        "iters_reg" => config.iters_reg = num(key, value)?,
        "tau_phi" => config.tau_phi = num(key, value)?,
        "tau_theta" => config.tau_theta = num(key, value)?,
        "seed" => config.seed = num(key, value)?,
        "workers" => config.workers = Some(num(key, value)?),
        "semantics" => config.semantics = parse_semantics(value)?,
        "top_words" => config.top_words = num(key, value)?,
        "top_repos" => config.top_repos = num(key, value)?,
        other => return Err(usage(format!("unknown config key `{other}`"))),
    }
    Ok(())
}

/// Parse a config file of `key = value` lines; `#` starts a comment.
pub fn load_config_file(path: &Path, config: &mut RunConfig) -> Result<(), UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            )));
        };
        apply_key(config, key.trim(), value.trim())
            .map_err(|e| usage(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
    }
    Ok(())
}

fn validate(config: &RunConfig) -> Result<(), UsageError> {
    if config.input.as_os_str().is_empty() {
        return Err(usage("missing required `--input` directory"));
    }
    if config.output.as_os_str().is_empty() {
        return Err(usage("missing required `--output` directory"));
    }
    if config.k == 0 {
        return Err(usage("`k` must be at least 1"));
    }
    if !(0.0 < config.lsh_threshold && config.lsh_threshold < 1.0) {
        return Err(usage("`lsh_threshold` must be in (0, 1)"));
    }
    if !(0.0 < config.pair_threshold && config.pair_threshold <= 1.0) {
        return Err(usage("`pair_threshold` must be in (0, 1]"));
    }
    if config.t_f == 0 {
        return Err(usage("`t_f` must be at least 1"));
    }
    if config.topics == 0 {
        return Err(usage("`topics` must be at least 1"));
    }
    if config.tau_phi < 0.0 || config.tau_theta < 0.0 {
        return Err(usage("tau values must be non-negative"));
    }
    if config.workers == Some(0) {
        return Err(usage("`workers` must be at least 1"));
    }
    Ok(())
}

fn resolve(cli: &Cli) -> Result<(RunConfig, Command), UsageError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        load_config_file(path, &mut config)?;
    }
    if let Some(v) = &cli.input {
        config.input = v.clone();
    }
    if let Some(v) = &cli.output {
        config.output = v.clone();
    }
    if let Some(v) = &cli.profiles {
        config.profiles = Some(v.clone());
    }
    if let Some(v) = cli.k {
        config.k = v;
    }
    if let Some(v) = cli.lsh_threshold {
        config.lsh_threshold = v;
    }
    if let Some(v) = cli.pair_threshold {
        config.pair_threshold = v;
    }
    if let Some(v) = cli.t_f {
        config.t_f = v;
    }
    if let Some(v) = cli.stem_threshold {
        config.stem_threshold = v;
    }
    if let Some(v) = cli.topics {
        config.topics = v;
    }
    if let Some(v) = cli.iters_plain {
        config.iters_plain = v;
    }
    if let Some(v) = cli.iters_reg {
        config.iters_reg = v;
    }
    if let Some(v) = cli.tau_phi {
        config.tau_phi = v;
    }
    if let Some(v) = cli.tau_theta {
        config.tau_theta = v;
    }
    if let Some(v) = cli.seed {
        config.seed = v;
    }
    if let Some(v) = cli.workers {
        config.workers = Some(v);
    }
    if let Some(v) = &cli.semantics {
        config.semantics = parse_semantics(v)?;
    }
    if let Some(v) = cli.top_words {
        config.top_words = v;
    }
    if let Some(v) = cli.top_repos {
        config.top_repos = v;
    }
    validate(&config)?;
    Ok((config, cli.command))
}

/// Recursively collect the source files of one repository directory.
fn collect_files(root: &Path, dir: &Path, out: &mut Vec<SourceFile>) -> Result<(), CoreError> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CoreError::io(dir, e))?
        .collect::<std::io::Result<_>>()
        .map_err(|e| CoreError::io(dir, e))?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let path = entry.path();
        let kind = entry.file_type().map_err(|e| CoreError::io(&path, e))?;
        if kind.is_dir() {
            collect_files(root, &path, out)?;
        } else if kind.is_file() {
            let content = std::fs::read(&path).map_err(|e| CoreError::io(&path, e))?;
            let rel = path
                .strip_prefix(root)
                .unwrap_or(&path)
                .to_string_lossy()
                .into_owned();
            out.push(SourceFile::new(rel, content));
        }
    }
    Ok(())
}

fn load_profiles(config: &RunConfig) -> Result<ProfileSet, CoreError> {
    match &config.profiles {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
            ProfileSet::from_config(&text, path)
        }
        None => Ok(ProfileSet::builtin()),
    }
}

fn write_corpus_files(
    bags: &[Bag],
    t_f: u64,
    bags_path: &Path,
    vocab_path: &Path,
    corpus_path: &Path,
) -> Result<(Vocabulary, SparseCorpus), CoreError> {
    save_bags(bags, bags_path)?;
    let vocab = build_vocabulary(bags, t_f);
    save_vocabulary(&vocab, vocab_path)?;
    let corpus = index_corpus(bags, &vocab);
    save_corpus(&corpus, corpus_path)?;
    Ok((vocab, corpus))
}

/// Lex every repository into a stemmed bag and write bags, statistics,
/// vocabulary and sparse corpus.
pub fn cmd_extract(config: &RunConfig) -> Result<(), CoreError> {
    let profiles = load_profiles(config)?;
    let naming = NamingConfig {
        stem_threshold: config.stem_threshold,
        ..NamingConfig::default()
    };
    let mut repo_dirs: Vec<PathBuf> = std::fs::read_dir(&config.input)
        .map_err(|e| CoreError::io(&config.input, e))?
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().map(|t| t.is_dir()).unwrap_or(false))
        .map(|e| e.path())
        .collect();
    repo_dirs.sort();
    if repo_dirs.is_empty() {
        return Err(CoreError::EmptyCorpus);
    }

    let mut raw_bags = Vec::with_capacity(repo_dirs.len());
    for dir in &repo_dirs {
        let repo = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files = Vec::new();
        collect_files(dir, dir, &mut files)?;
        let (bag, _stats) = raw_bag_of_repo(&repo, &files, &profiles, &naming);
        raw_bags.push(bag);
    }

    std::fs::create_dir_all(&config.output).map_err(|e| CoreError::io(&config.output, e))?;
    name_stats(&raw_bags).write_tsvs(&config.output)?;

    let bags: Vec<Bag> = raw_bags
        .iter()
        .map(|raw| stem_bag(raw, config.stem_threshold))
        .collect();
    write_corpus_files(
        &bags,
        config.t_f,
        &config.output.join("repos.bags"),
        &config.output.join("repos.vocab"),
        &config.output.join("repos.corpus"),
    )?;
    Ok(())
}

/// Sign every bag, group fuzzy duplicates and write the filtered corpus.
pub fn cmd_dedup(config: &RunConfig) -> Result<(), CoreError> {
    let bags = load_bags(&config.output.join("repos.bags"))?;
    // Signatures use the full term space of the bags, not the
    // frequency-cut model vocabulary.
    let sig_vocab = build_vocabulary(&bags, 1);
    let gen = WmhGenerator::new(config.seed, config.k);
    let mut signatures = Vec::new();
    for bag in &bags {
        if bag.is_empty() {
            continue;
        }
        let weights = doc_weights(bag, &sig_vocab);
        signatures.push((bag.repo.clone(), signature(&weights, &gen)?));
    }
    save_signatures(&signatures, &config.output.join("repos.wmh"))?;

    let plan = plan_bands(config.k, config.lsh_threshold);
    let index = build_index(&signatures, &plan)?;
    let (sets, histogram) =
        extract_duplicate_sets(&index, &bags, config.semantics, config.pair_threshold);
    save_duplicates(&sets, &config.output.join("duplicates.tsv"))?;
    save_bins_histogram(&histogram, &config.output.join("bins_histogram.tsv"))?;

    let kept = dedup_corpus(&bags, &sets);
    write_corpus_files(
        &kept,
        config.t_f,
        &config.output.join("repos.dedup.bags"),
        &config.output.join("repos.dedup.vocab"),
        &config.output.join("repos.dedup.corpus"),
    )?;
    Ok(())
}

/// The deduplicated corpus when the dedup stage has run, otherwise the
/// extracted one.
fn corpus_paths(config: &RunConfig) -> (PathBuf, PathBuf) {
    let dedup = config.output.join("repos.dedup.corpus");
    if dedup.exists() {
        (dedup, config.output.join("repos.dedup.vocab"))
    } else {
        (
            config.output.join("repos.corpus"),
            config.output.join("repos.vocab"),
        )
    }
}

fn train_config(config: &RunConfig) -> TrainConfig {
    TrainConfig {
        num_topics: config.topics,
        iters_plain: config.iters_plain,
        iters_reg: config.iters_reg,
        tau_phi: config.tau_phi,
        tau_theta: config.tau_theta,
        seed: config.seed,
    }
}

/// Train the topic model on the current corpus and write it plus the
/// per-iteration metrics.
pub fn cmd_train(config: &RunConfig) -> Result<(), CoreError> {
    let (corpus_path, _) = corpus_paths(config);
    let corpus = load_corpus(&corpus_path)?;
    let (model, metrics) = train(&corpus, &train_config(config))?;
    save_model(&model, &config.output.join("model.artm"))?;
    save_metrics(&metrics, &config.output.join("metrics.tsv"))?;
    Ok(())
}

fn load_model_and_corpus(
    config: &RunConfig,
) -> Result<(repotopics_core::artm::TopicModel, SparseCorpus, PathBuf), CoreError> {
    let (corpus_path, vocab_path) = corpus_paths(config);
    let corpus = load_corpus(&corpus_path)?;
    let model = repotopics_core::artm::load_model(&config.output.join("model.artm"))?;
    Ok((model, corpus, vocab_path))
}

/// Write the L2-normalized repository embedding.
pub fn cmd_embed(config: &RunConfig) -> Result<(), CoreError> {
    let (model, corpus, _) = load_model_and_corpus(config)?;
    let embedding = normalize_rows(&embed(&corpus, &model)?);
    save_embedding(&embedding, &config.output.join("embeddings.tsv"))?;
    Ok(())
}

/// Write the topic report and the per-topic repository rankings.
pub fn cmd_report(config: &RunConfig) -> Result<(), CoreError> {
    let (model, corpus, vocab_path) = load_model_and_corpus(config)?;
    let vocab = load_vocabulary(&vocab_path)?;
    let embedding = normalize_rows(&embed(&corpus, &model)?);
    let significance = topic_significance(&embedding);
    save_topics_report(
        &model,
        &vocab,
        &significance,
        config.top_words,
        &config.output.join("topics_report.tsv"),
    )?;
    for t in 0..model.num_topics {
        save_topic_repos(
            &embedding,
            t,
            config.top_repos,
            &config.output.join(format!("topic_{t}_repos.tsv")),
        )?;
    }
    Ok(())
}

/// Run all stages in order.
pub fn cmd_pipeline(config: &RunConfig) -> Result<(), CoreError> {
    cmd_extract(config)?;
    cmd_dedup(config)?;
    cmd_train(config)?;
    cmd_embed(config)?;
    cmd_report(config)
}

fn dispatch(config: &RunConfig, command: Command) -> Result<(), CoreError> {
    match command {
        Command::Extract => cmd_extract(config),
        Command::Dedup => cmd_dedup(config),
        Command::Train => cmd_train(config),
        Command::Embed => cmd_embed(config),
        Command::Report => cmd_report(config),
        Command::Pipeline => cmd_pipeline(config),
    }
}

/// Parse `args`, run the requested stage and return the process exit
/// code: 0 success, 1 usage error, 2 data error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let (config, command) = match resolve(&cli) {
        Ok(resolved) => resolved,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Some(workers) = config.workers {
        // Ignore the error if a pool already exists (tests call `run`
        // repeatedly in one process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match dispatch(&config, command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
