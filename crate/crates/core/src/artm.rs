//! EM training of the topic model with additive sparsity regularization,
//! perplexity and sparsity metrics, and a smoothed LDA-style baseline.
//!
//! The regularized M-step subtracts tau times the topic (or document)
//! mean count from every accumulated count and clips at zero, then
//! renormalizes. The offset is scaled by n_t / |W| (n_d / |T|) so the
//! same tau is meaningful at any corpus size. A column whose entries all
//! clip to zero becomes inactive and stays all-zero.

use crate::corpus::SparseCorpus;
use crate::mix::{mix_coords, to_unit_open};
use crate::{Error, Result};
use rayon::prelude::*;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

/// Training meta-parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub num_topics: usize,
    pub iters_plain: usize,
    pub iters_reg: usize,
    pub tau_phi: f64,
    pub tau_theta: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            num_topics: 256,
            iters_plain: 10,
            iters_reg: 8,
            tau_phi: 0.5,
            tau_theta: 0.5,
            seed: 0,
        }
    }
}

/// Column-stochastic word-topic and topic-document matrices.
///
/// `phi[w * T + t]` is p(w|t); `theta[d * T + t]` is p(t|d). Every
/// active column sums to 1; inactive (fully clipped) columns are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub num_terms: usize,
    pub num_topics: usize,
    pub num_docs: usize,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
}

impl TopicModel {
    #[inline]
    pub fn phi_at(&self, w: usize, t: usize) -> f64 {
        self.phi[w * self.num_topics + t]
    }

    #[inline]
    pub fn theta_at(&self, t: usize, d: usize) -> f64 {
        self.theta[d * self.num_topics + t]
    }

    /// One column of phi as (term id, weight) pairs with weight > 0.
    pub fn phi_column(&self, t: usize) -> Vec<(u32, f64)> {
        (0..self.num_terms)
            .filter_map(|w| {
                let v = self.phi_at(w, t);
                (v > 0.0).then_some((w as u32, v))
            })
            .collect()
    }
}

/// Fraction of entries that are exactly zero.
pub fn sparsity(matrix: &[f64]) -> f64 {
    if matrix.is_empty() {
        return 0.0;
    }
    matrix.iter().filter(|&&v| v == 0.0).count() as f64 / matrix.len() as f64
}

/// Metrics recorded after each training iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationMetrics {
    pub iteration: usize,
    pub regularized: bool,
    pub perplexity: f64,
    pub phi_sparsity: f64,
    pub theta_sparsity: f64,
}

/// Per-iteration metric history of one training run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainMetrics {
    pub iterations: Vec<IterationMetrics>,
}

/// Seeded random-uniform phi columns, uniform theta.
pub fn init_model(corpus: &SparseCorpus, config: &TrainConfig) -> Result<TopicModel> {
    assert!(config.num_topics >= 1);
    let (num_terms, num_docs) = (corpus.num_terms, corpus.num_docs());
    if num_terms == 0 || num_docs == 0 {
        return Err(Error::EmptyCorpus);
    }
    let num_topics = config.num_topics;
    let mut phi = vec![0.0; num_terms * num_topics];
    for t in 0..num_topics {
        let mut sum = 0.0;
        for w in 0..num_terms {
            let u = to_unit_open(mix_coords(config.seed, &[0x505F_494E_4954, w as u64, t as u64]));
            phi[w * num_topics + t] = u;
            sum += u;
        }
        for w in 0..num_terms {
            phi[w * num_topics + t] /= sum;
        }
    }
    let theta = vec![1.0 / num_topics as f64; num_docs * num_topics];
    Ok(TopicModel {
        num_terms,
        num_topics,
        num_docs,
        phi,
        theta,
    })
}

/// The M-step variant applied after count accumulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MStep {
    /// Maximum likelihood: divide by column totals.
    Plain,
    /// Subtract the scaled tau offset and clip at zero.
    Sparsifying { tau_phi: f64, tau_theta: f64 },
    /// Add smoothing pseudo-counts (LDA-style), never clip.
    Smoothed { alpha: f64, beta: f64 },
}

/// Documents per parallel batch. Batching is fixed so accumulation order
/// does not depend on the worker count.
const EM_CHUNK: usize = 64;

fn accumulate_counts(corpus: &SparseCorpus, model: &TopicModel) -> (Vec<f64>, Vec<f64>) {
    let num_topics = model.num_topics;
    let mut n_wt = vec![0.0; model.num_terms * num_topics];
    let mut n_td = vec![0.0; model.num_docs * num_topics];
    for (chunk_idx, chunk) in corpus.docs.chunks(EM_CHUNK).enumerate() {
        let base = chunk_idx * EM_CHUNK;
        let partials: Vec<(Vec<f64>, Vec<(u32, Vec<f64>)>)> = chunk
            .par_iter()
            .enumerate()
            .map(|(offset, (_, terms))| {
                let d = base + offset;
                let mut doc_td = vec![0.0; num_topics];
                let mut doc_wt = Vec::with_capacity(terms.len());
                let mut p = vec![0.0; num_topics];
                for &(w, n_dw) in terms {
                    let w = w as usize;
                    let mut sum = 0.0;
                    for t in 0..num_topics {
                        let v = model.phi_at(w, t) * model.theta_at(t, d);
                        p[t] = v;
                        sum += v;
                    }
                    if sum <= 0.0 {
                        // The cell is unexplainable by the current model
                        // and contributes no counts.
                        continue;
                    }
                    let scale = n_dw as f64 / sum;
                    let mut row = vec![0.0; num_topics];
                    for t in 0..num_topics {
                        let c = p[t] * scale;
                        row[t] = c;
                        doc_td[t] += c;
                    }
                    doc_wt.push((w as u32, row));
                }
                (doc_td, doc_wt)
            })
            .collect();
        for (offset, (doc_td, doc_wt)) in partials.into_iter().enumerate() {
            let d = base + offset;
            for t in 0..num_topics {
                n_td[d * num_topics + t] += doc_td[t];
            }
            for (w, row) in doc_wt {
                let start = w as usize * num_topics;
                for t in 0..num_topics {
                    n_wt[start + t] += row[t];
                }
            }
        }
    }
    (n_wt, n_td)
}

fn m_step(
    n_wt: Vec<f64>,
    n_td: Vec<f64>,
    num_terms: usize,
    num_topics: usize,
    num_docs: usize,
    step: MStep,
) -> TopicModel {
    let mut phi = n_wt;
    let mut theta = n_td;

    for t in 0..num_topics {
        let n_t: f64 = (0..num_terms).map(|w| phi[w * num_topics + t]).sum();
        match step {
            MStep::Plain => {
                if n_t > 0.0 {
                    for w in 0..num_terms {
                        phi[w * num_topics + t] /= n_t;
                    }
                }
            }
            MStep::Sparsifying { tau_phi, .. } => {
                let offset = tau_phi * n_t / num_terms as f64;
                let mut sum = 0.0;
                for w in 0..num_terms {
                    let v = (phi[w * num_topics + t] - offset).max(0.0);
                    phi[w * num_topics + t] = v;
                    sum += v;
                }
                if sum > 0.0 {
                    for w in 0..num_terms {
                        phi[w * num_topics + t] /= sum;
                    }
                }
            }
            MStep::Smoothed { beta, .. } => {
                let denom = n_t + num_terms as f64 * beta;
                for w in 0..num_terms {
                    phi[w * num_topics + t] = (phi[w * num_topics + t] + beta) / denom;
                }
            }
        }
    }

    for d in 0..num_docs {
        let col = &mut theta[d * num_topics..(d + 1) * num_topics];
        let n_d: f64 = col.iter().sum();
        match step {
            MStep::Plain => {
                if n_d > 0.0 {
                    for v in col.iter_mut() {
                        *v /= n_d;
                    }
                }
            }
            MStep::Sparsifying { tau_theta, .. } => {
                let offset = tau_theta * n_d / num_topics as f64;
                let mut sum = 0.0;
                for v in col.iter_mut() {
                    *v = (*v - offset).max(0.0);
                    sum += *v;
                }
                if sum > 0.0 {
                    for v in col.iter_mut() {
                        *v /= sum;
                    }
                }
            }
            MStep::Smoothed { alpha, .. } => {
                let denom = n_d + num_topics as f64 * alpha;
                for v in col.iter_mut() {
                    *v = (*v + alpha) / denom;
                }
            }
        }
    }

    TopicModel {
        num_terms,
        num_topics,
        num_docs,
        phi,
        theta,
    }
}

/// One full EM pass with the given M-step variant.
pub fn em_step(corpus: &SparseCorpus, model: &TopicModel, step: MStep) -> TopicModel {
    let (n_wt, n_td) = accumulate_counts(corpus, model);
    m_step(
        n_wt,
        n_td,
        model.num_terms,
        model.num_topics,
        model.num_docs,
        step,
    )
}

/// One EM pass; `regularize` switches the sparsifying M-step on.
pub fn em_iteration(
    corpus: &SparseCorpus,
    model: &TopicModel,
    regularize: bool,
    config: &TrainConfig,
) -> TopicModel {
    let step = if regularize {
        MStep::Sparsifying {
            tau_phi: config.tau_phi,
            tau_theta: config.tau_theta,
        }
    } else {
        MStep::Plain
    };
    em_step(corpus, model, step)
}

const LOG_FLOOR: f64 = 1e-37;

/// Corpus log-likelihood under the model (the plain EM objective).
pub fn log_likelihood(model: &TopicModel, corpus: &SparseCorpus) -> f64 {
    corpus
        .docs
        .par_iter()
        .enumerate()
        .map(|(d, (_, terms))| {
            let mut ll = 0.0;
            for &(w, n_dw) in terms {
                let mut p = 0.0;
                for t in 0..model.num_topics {
                    p += model.phi_at(w as usize, t) * model.theta_at(t, d);
                }
                ll += n_dw as f64 * p.max(LOG_FLOOR).ln();
            }
            ll
        })
        .sum()
}

/// exp of the negative mean log-likelihood per token.
pub fn perplexity(model: &TopicModel, corpus: &SparseCorpus) -> f64 {
    let n = corpus.total_tokens();
    if n == 0 {
        return 1.0;
    }
    (-log_likelihood(model, corpus) / n as f64).exp()
}

pub fn phi_sparsity(model: &TopicModel) -> f64 {
    sparsity(&model.phi)
}

pub fn theta_sparsity(model: &TopicModel) -> f64 {
    sparsity(&model.theta)
}

fn record(
    metrics: &mut TrainMetrics,
    model: &TopicModel,
    corpus: &SparseCorpus,
    iteration: usize,
    regularized: bool,
) {
    metrics.iterations.push(IterationMetrics {
        iteration,
        regularized,
        perplexity: perplexity(model, corpus),
        phi_sparsity: phi_sparsity(model),
        theta_sparsity: theta_sparsity(model),
    });
}

/// Run `iters_plain` plain passes followed by `iters_reg` regularized
/// passes, recording metrics after every pass.
pub fn train(corpus: &SparseCorpus, config: &TrainConfig) -> Result<(TopicModel, TrainMetrics)> {
    let mut model = init_model(corpus, config)?;
    let mut metrics = TrainMetrics::default();
    let mut iteration = 0;
    for _ in 0..config.iters_plain {
        model = em_iteration(corpus, &model, false, config);
        record(&mut metrics, &model, corpus, iteration, false);
        iteration += 1;
    }
    for _ in 0..config.iters_reg {
        model = em_iteration(corpus, &model, true, config);
        record(&mut metrics, &model, corpus, iteration, true);
        iteration += 1;
    }
    Ok((model, metrics))
}

/// Smoothed (LDA-style) baseline: every pass adds +alpha / +beta in the
/// M-step, producing fully dense matrices.
pub fn train_lda_baseline(
    corpus: &SparseCorpus,
    config: &TrainConfig,
    alpha: f64,
    beta: f64,
) -> Result<(TopicModel, TrainMetrics)> {
    assert!(alpha > 0.0 && beta > 0.0, "smoothing must be positive");
    let mut model = init_model(corpus, config)?;
    let mut metrics = TrainMetrics::default();
    for iteration in 0..(config.iters_plain + config.iters_reg) {
        model = em_step(corpus, &model, MStep::Smoothed { alpha, beta });
        record(&mut metrics, &model, corpus, iteration, false);
    }
    Ok((model, metrics))
}

/// Write metrics as `iteration\tregularized\tperplexity\tphi\ttheta`.
pub fn save_metrics(metrics: &TrainMetrics, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for m in &metrics.iterations {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            m.iteration,
            m.regularized as u8,
            m.perplexity,
            m.phi_sparsity,
            m.theta_sparsity
        )
        .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Write the model: header `ARTM1 <W> <T>`, sparse `w t value` phi lines,
/// a `THETA <D>` separator, then sparse `t d value` theta lines.
pub fn save_model(model: &TopicModel, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "ARTM1 {} {}", model.num_terms, model.num_topics)
        .map_err(|e| Error::io(path, e))?;
    for w in 0..model.num_terms {
        for t in 0..model.num_topics {
            let v = model.phi_at(w, t);
            if v > 0.0 {
                writeln!(out, "{w} {t} {v}").map_err(|e| Error::io(path, e))?;
            }
        }
    }
    writeln!(out, "THETA {}", model.num_docs).map_err(|e| Error::io(path, e))?;
    for t in 0..model.num_topics {
        for d in 0..model.num_docs {
            let v = model.theta_at(t, d);
            if v > 0.0 {
                writeln!(out, "{t} {d} {v}").map_err(|e| Error::io(path, e))?;
            }
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Load a model written by [`save_model`].
pub fn load_model(path: &Path) -> Result<TopicModel> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = std::io::BufReader::new(file).lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header"))?
        .1
        .map_err(|e| Error::io(path, e))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (num_terms, num_topics) = match parts.as_slice() {
        ["ARTM1", w, t] => (
            w.parse()
                .map_err(|_| Error::parse(path, 1, "bad term count"))?,
            t.parse()
                .map_err(|_| Error::parse(path, 1, "bad topic count"))?,
        ),
        _ => return Err(Error::parse(path, 1, "header must be `ARTM1 W T`")),
    };
    let mut phi = vec![0.0f64; num_terms * num_topics];
    let mut theta = Vec::new();
    let mut num_docs = 0usize;
    let mut in_theta = false;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        if let Some(d) = line.strip_prefix("THETA ") {
            num_docs = d
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad document count"))?;
            theta = vec![0.0f64; num_docs * num_topics];
            in_theta = true;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b, v] = fields.as_slice() else {
            return Err(Error::parse(path, lineno, "expected `i j value`"));
        };
        let a: usize = a
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad index"))?;
        let b: usize = b
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad index"))?;
        let v: f64 = v
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad value"))?;
        if in_theta {
            let (t, d) = (a, b);
            if t >= num_topics || d >= num_docs {
                return Err(Error::parse(path, lineno, "theta index out of range"));
            }
            theta[d * num_topics + t] = v;
        } else {
            let (w, t) = (a, b);
            if w >= num_terms || t >= num_topics {
                return Err(Error::parse(path, lineno, "phi index out of range"));
            }
            phi[w * num_topics + t] = v;
        }
    }
    if !in_theta {
        return Err(Error::parse(path, 0, "missing THETA section"));
    }
    Ok(TopicModel {
        num_terms,
        num_topics,
        num_docs,
        phi,
        theta,
    })
}
