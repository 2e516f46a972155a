//! Repository embeddings in topic space, topic significance and the
//! ranked word/repository reports.

use crate::artm::TopicModel;
use crate::corpus::{SparseCorpus, Vocabulary};
use crate::{Error, Result};
use std::io::{BufWriter, Write};
use std::path::Path;

/// |D| x |T| matrix of repositories in topic space with row labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RepoEmbedding {
    pub repos: Vec<String>,
    pub num_topics: usize,
    /// Row-major: `rows[d * num_topics + t]`.
    pub rows: Vec<f64>,
}

impl RepoEmbedding {
    #[inline]
    pub fn at(&self, d: usize, t: usize) -> f64 {
        self.rows[d * self.num_topics + t]
    }

    pub fn row(&self, d: usize) -> &[f64] {
        &self.rows[d * self.num_topics..(d + 1) * self.num_topics]
    }
}

/// Multiply raw document counts by phi: row d is sum over w of
/// n_dw * phi_w.
pub fn embed(corpus: &SparseCorpus, model: &TopicModel) -> Result<RepoEmbedding> {
    if corpus.num_terms != model.num_terms {
        return Err(Error::DimensionMismatch(format!(
            "corpus has {} terms, model has {}",
            corpus.num_terms, model.num_terms
        )));
    }
    let num_topics = model.num_topics;
    let mut rows = vec![0.0; corpus.num_docs() * num_topics];
    let mut repos = Vec::with_capacity(corpus.num_docs());
    for (d, (repo, terms)) in corpus.docs.iter().enumerate() {
        repos.push(repo.clone());
        let row = &mut rows[d * num_topics..(d + 1) * num_topics];
        for &(w, count) in terms {
            let count = count as f64;
            for (t, slot) in row.iter_mut().enumerate() {
                *slot += count * model.phi_at(w as usize, t);
            }
        }
    }
    Ok(RepoEmbedding {
        repos,
        num_topics,
        rows,
    })
}

/// Divide every nonzero row by its L2 norm; zero rows stay zero.
pub fn normalize_rows(embedding: &RepoEmbedding) -> RepoEmbedding {
    let mut out = embedding.clone();
    for d in 0..out.repos.len() {
        let row = &mut out.rows[d * out.num_topics..(d + 1) * out.num_topics];
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
    }
    out
}

/// Column sums of the normalized embedding.
pub fn topic_significance(normalized: &RepoEmbedding) -> Vec<f64> {
    let mut sums = vec![0.0; normalized.num_topics];
    for d in 0..normalized.repos.len() {
        for (t, sum) in sums.iter_mut().enumerate() {
            *sum += normalized.at(d, t);
        }
    }
    sums
}

fn ranked<T: Clone>(
    mut items: Vec<(T, f64)>,
    n: usize,
    label: impl Fn(&T) -> &str,
) -> Vec<(T, f64)> {
    items.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| label(&a.0).cmp(label(&b.0)))
    });
    items.truncate(n);
    items
}

/// Top-n words of a topic by phi weight, descending, ties lexicographic.
pub fn top_words(model: &TopicModel, vocab: &Vocabulary, t: usize, n: usize) -> Vec<(String, f64)> {
    assert!(t < model.num_topics);
    let items: Vec<(String, f64)> = model
        .phi_column(t)
        .into_iter()
        .map(|(w, v)| (vocab.term(w).to_string(), v))
        .collect();
    ranked(items, n, |s| s.as_str())
}

/// Top-n repositories of a topic by embedding value, descending.
pub fn top_repos(embedding: &RepoEmbedding, t: usize, n: usize) -> Vec<(String, f64)> {
    assert!(t < embedding.num_topics);
    let items: Vec<(String, f64)> = embedding
        .repos
        .iter()
        .enumerate()
        .filter_map(|(d, repo)| {
            let v = embedding.at(d, t);
            (v > 0.0).then(|| (repo.clone(), v))
        })
        .collect();
    ranked(items, n, |s| s.as_str())
}

/// Write `topics_report.tsv`: per topic its id, significance and the
/// top-n words with weights, 6 decimal places.
pub fn save_topics_report(
    model: &TopicModel,
    vocab: &Vocabulary,
    significance: &[f64],
    n: usize,
    path: &Path,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (t, sig) in significance.iter().enumerate() {
        write!(out, "{t}\t{sig:.6}").map_err(|e| Error::io(path, e))?;
        for (word, weight) in top_words(model, vocab, t, n) {
            write!(out, "\t{word}:{weight:.6}").map_err(|e| Error::io(path, e))?;
        }
        writeln!(out).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Write `topic_<t>_repos.tsv`: ranked repositories of one topic.
pub fn save_topic_repos(embedding: &RepoEmbedding, t: usize, n: usize, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (repo, value) in top_repos(embedding, t, n) {
        writeln!(out, "{repo}\t{value:.6}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Write the normalized embedding rows as TSV, one repository per line.
pub fn save_embedding(embedding: &RepoEmbedding, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (d, repo) in embedding.repos.iter().enumerate() {
        write!(out, "{repo}").map_err(|e| Error::io(path, e))?;
        for t in 0..embedding.num_topics {
            write!(out, "\t{}", embedding.at(d, t)).map_err(|e| Error::io(path, e))?;
        }
        writeln!(out).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
