//! Identifier splitting, stemming and per-repository bag aggregation.
//!
//! `split_identifier` reproduces the reference splitting routine exactly,
//! including its quirk of carrying a short-word stash across separator
//! boundaries within one token. Words at or above the stemming threshold
//! go through the Snowball English (Porter2) stemmer.

use crate::lexing::{extract_name_tokens, ProfileSet, SourceFile};
use crate::{Error, Result};
use rust_stemmers::{Algorithm, Stemmer};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::sync::OnceLock;

/// Knobs for word extraction.
#[derive(Debug, Clone)]
pub struct NamingConfig {
    /// Words of at least this length are stemmed. Default 6.
    pub stem_threshold: usize,
    /// Words longer than this are truncated before stemming. Default 64.
    pub max_word_len: usize,
}

impl Default for NamingConfig {
    fn default() -> Self {
        NamingConfig {
            stem_threshold: 6,
            max_word_len: 64,
        }
    }
}

/// One repository as a multiset of terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bag {
    pub repo: String,
    pub counts: BTreeMap<String, u64>,
}

impl Bag {
    pub fn new(repo: impl Into<String>) -> Self {
        Bag {
            repo: repo.into(),
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, term: impl Into<String>, count: u64) {
        if count > 0 {
            *self.counts.entry(term.into()).or_insert(0) += count;
        }
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total token count.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Counters reported alongside bag construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BagStats {
    /// Files whose language could not be detected.
    pub skipped_files: u64,
    /// Files fed to the lexer.
    pub lexed_files: u64,
    /// Words truncated to `max_word_len`.
    pub truncated_words: u64,
}

fn emit_word(name: &[u8], stash: &mut String, out: &mut Vec<String>) {
    let lower: String = name.iter().map(|b| b.to_ascii_lowercase() as char).collect();
    if name.len() >= 3 {
        if !stash.is_empty() {
            out.push(lower.clone());
            out.push(format!("{stash}{lower}"));
            stash.clear();
        } else {
            out.push(lower);
        }
    } else {
        *stash = lower;
    }
}

fn split_part(part: &[u8], stash: &mut String, out: &mut Vec<String>) {
    let mut prev = part[0];
    let mut pos = 0usize;
    for i in 1..part.len() {
        let this = part[i];
        if prev.is_ascii_lowercase() && this.is_ascii_uppercase() {
            emit_word(&part[pos..i], stash, out);
            pos = i;
        } else if prev.is_ascii_uppercase() && this.is_ascii_lowercase() {
            let upper_run = i - 1 - pos;
            if upper_run > 0 && upper_run <= 3 {
                // Short uppercase run: break before its last character so
                // the acronym stays together ("XMLParser" -> xml, parser).
                emit_word(&part[pos..i - 1], stash, out);
                pos = i - 1;
            } else if i - 1 > pos {
                emit_word(&part[pos..i], stash, out);
                pos = i;
            }
        }
        prev = this;
    }
    emit_word(&part[pos..], stash, out);
}

/// Split a raw identifier token into lowercase words of length >= 3.
///
/// Case transitions and non-letter separators both break words. A word
/// shorter than 3 characters is stashed and prepended to the next long
/// word ("wdSize" -> size, wdsize); the stash survives separators within
/// the same token.
pub fn split_identifier(token: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut stash = String::new();
    for part in token.trim().split(|c: char| !c.is_ascii_alphabetic()) {
        if part.is_empty() {
            continue;
        }
        split_part(part.as_bytes(), &mut stash, &mut out);
    }
    out
}

fn english_stemmer() -> &'static Stemmer {
    static STEMMER: OnceLock<Stemmer> = OnceLock::new();
    STEMMER.get_or_init(|| Stemmer::create(Algorithm::English))
}

/// Stem `word` with the Snowball English (Porter2) algorithm if it is at
/// least `threshold` characters long; shorter words pass through.
pub fn stem_name(word: &str, threshold: usize) -> String {
    if word.len() >= threshold {
        english_stemmer().stem(word).to_lowercase()
    } else {
        word.to_string()
    }
}

/// Build the raw (unstemmed) bag of one repository.
///
/// Files whose language is not detected are skipped and counted. The
/// result does not depend on the order of `files`.
pub fn raw_bag_of_repo(
    repo: &str,
    files: &[SourceFile],
    profiles: &ProfileSet,
    config: &NamingConfig,
) -> (Bag, BagStats) {
    let mut bag = Bag::new(repo);
    let mut stats = BagStats::default();
    for file in files {
        let Some(profile) = profiles.detect_language(&file.path) else {
            stats.skipped_files += 1;
            continue;
        };
        stats.lexed_files += 1;
        for token in extract_name_tokens(file, profile) {
            for mut word in split_identifier(&token) {
                if word.len() > config.max_word_len {
                    word.truncate(config.max_word_len);
                    stats.truncated_words += 1;
                }
                bag.add(word, 1);
            }
        }
    }
    (bag, stats)
}

/// Apply stemming to every term of a raw bag, merging collided stems.
pub fn stem_bag(raw: &Bag, stem_threshold: usize) -> Bag {
    let mut bag = Bag::new(raw.repo.clone());
    for (term, &count) in &raw.counts {
        bag.add(stem_name(term, stem_threshold), count);
    }
    bag
}

/// Build the stemmed bag of one repository.
pub fn bag_of_repo(
    repo: &str,
    files: &[SourceFile],
    profiles: &ProfileSet,
    config: &NamingConfig,
) -> (Bag, BagStats) {
    let (raw, stats) = raw_bag_of_repo(repo, files, profiles, config);
    (stem_bag(&raw, config.stem_threshold), stats)
}

/// Corpus-level term statistics, computed from raw (unstemmed) bags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameStats {
    /// term length -> number of distinct terms of that length
    pub length_histogram: BTreeMap<usize, u64>,
    /// hypothetical stemming threshold (1..=12) -> vocabulary size
    pub vocab_vs_threshold: BTreeMap<usize, u64>,
    /// corpus-wide term count -> number of terms with that count
    pub frequency_histogram: BTreeMap<u64, u64>,
    /// distinct-term bag size -> number of bags
    pub bag_size_histogram: BTreeMap<usize, u64>,
}

/// Compute the four corpus statistics from raw bags.
pub fn name_stats(bags: &[Bag]) -> NameStats {
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    let mut stats = NameStats::default();
    for bag in bags {
        for (term, &count) in &bag.counts {
            *totals.entry(term).or_insert(0) += count;
        }
        *stats.bag_size_histogram.entry(bag.len()).or_insert(0) += 1;
    }
    for (term, &total) in &totals {
        *stats.length_histogram.entry(term.len()).or_insert(0) += 1;
        *stats.frequency_histogram.entry(total).or_insert(0) += 1;
    }
    for threshold in 1..=12usize {
        if totals.is_empty() {
            continue;
        }
        let vocab: BTreeSet<String> = totals
            .keys()
            .map(|term| stem_name(term, threshold))
            .collect();
        stats.vocab_vs_threshold.insert(threshold, vocab.len() as u64);
    }
    stats
}

impl NameStats {
    /// Write the statistics as TSV files into `dir`.
    pub fn write_tsvs(&self, dir: &Path) -> Result<()> {
        write_histogram(&dir.join("name_lengths.tsv"), &self.length_histogram)?;
        write_histogram(&dir.join("stem_thresholds.tsv"), &self.vocab_vs_threshold)?;
        write_histogram(&dir.join("term_frequencies.tsv"), &self.frequency_histogram)?;
        write_histogram(&dir.join("bag_sizes.tsv"), &self.bag_size_histogram)?;
        Ok(())
    }
}

fn write_histogram<K: std::fmt::Display, V: std::fmt::Display>(
    path: &Path,
    hist: &BTreeMap<K, V>,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (k, v) in hist {
        writeln!(out, "{k}\t{v}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Write bags as `<repo>\t<term>:<count> ...`, terms sorted, lines sorted
/// by repository name.
pub fn save_bags(bags: &[Bag], path: &Path) -> Result<()> {
    let mut sorted: Vec<&Bag> = bags.iter().collect();
    sorted.sort_by(|a, b| a.repo.cmp(&b.repo));
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for bag in sorted {
        write!(out, "{}", bag.repo).map_err(|e| Error::io(path, e))?;
        let mut sep = '\t';
        for (term, count) in &bag.counts {
            write!(out, "{sep}{term}:{count}").map_err(|e| Error::io(path, e))?;
            sep = ' ';
        }
        writeln!(out).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Load bags written by [`save_bags`].
pub fn load_bags(path: &Path) -> Result<Vec<Bag>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    let mut bags = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let (repo, rest) = match line.split_once('\t') {
            Some((r, rest)) => (r, rest),
            None => (line.as_str(), ""),
        };
        if repo.is_empty() {
            return Err(Error::parse(path, lineno, "empty repository name"));
        }
        let mut bag = Bag::new(repo);
        for pair in rest.split_whitespace() {
            let (term, count) = pair
                .split_once(':')
                .ok_or_else(|| Error::parse(path, lineno, format!("malformed pair `{pair}`")))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad count in `{pair}`")))?;
            if count == 0 {
                return Err(Error::parse(path, lineno, format!("zero count in `{pair}`")));
            }
            bag.add(term, count);
        }
        bags.push(bag);
    }
    Ok(bags)
}
