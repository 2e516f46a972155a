//! Integer-indexed vocabulary with a frequency cut and the sparse
//! document-term corpus, plus their text file formats.

use crate::naming::Bag;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

/// Bidirectional term <-> id map with corpus-wide counts.
///
/// Terms are ordered lexicographically so ids are stable across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    total_counts: Vec<u64>,
    index: BTreeMap<String, u32>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn total_count(&self, id: u32) -> u64 {
        self.total_counts[id as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    fn from_pairs(pairs: Vec<(String, u64)>) -> Self {
        let index = pairs
            .iter()
            .enumerate()
            .map(|(i, (t, _))| (t.clone(), i as u32))
            .collect();
        let (terms, total_counts) = pairs.into_iter().unzip();
        Vocabulary {
            terms,
            total_counts,
            index,
        }
    }
}

/// Keep exactly the terms whose summed count across all bags reaches
/// `t_f`; a term counted exactly `t_f` times stays in.
pub fn build_vocabulary(bags: &[Bag], t_f: u64) -> Vocabulary {
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for bag in bags {
        for (term, &count) in &bag.counts {
            *totals.entry(term).or_insert(0) += count;
        }
    }
    let pairs = totals
        .into_iter()
        .filter(|&(_, total)| total >= t_f)
        .map(|(term, total)| (term.to_string(), total))
        .collect();
    Vocabulary::from_pairs(pairs)
}

/// Sparse document-term matrix; term ids strictly increase within a doc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseCorpus {
    pub docs: Vec<(String, Vec<(u32, u64)>)>,
    pub num_terms: usize,
}

impl SparseCorpus {
    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn nnz(&self) -> usize {
        self.docs.iter().map(|(_, terms)| terms.len()).sum()
    }

    /// Total token count, n = sum over all (d, w) of n_dw.
    pub fn total_tokens(&self) -> u64 {
        self.docs
            .iter()
            .flat_map(|(_, terms)| terms.iter().map(|&(_, c)| c))
            .sum()
    }
}

/// Map bags onto vocabulary ids, dropping out-of-vocabulary terms and
/// documents that become empty.
pub fn index_corpus(bags: &[Bag], vocab: &Vocabulary) -> SparseCorpus {
    let mut docs = Vec::new();
    for bag in bags {
        let mut terms: Vec<(u32, u64)> = bag
            .counts
            .iter()
            .filter_map(|(term, &count)| vocab.id(term).map(|id| (id, count)))
            .collect();
        if terms.is_empty() {
            continue;
        }
        terms.sort_by_key(|&(id, _)| id);
        docs.push((bag.repo.clone(), terms));
    }
    SparseCorpus {
        docs,
        num_terms: vocab.len(),
    }
}

/// Write the vocabulary as one term per line (line number = id).
pub fn save_vocabulary(vocab: &Vocabulary, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for term in &vocab.terms {
        writeln!(out, "{term}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Load a vocabulary written by [`save_vocabulary`].
///
/// The file stores terms only; total counts are not persisted and come
/// back as zero.
pub fn load_vocabulary(path: &Path) -> Result<Vocabulary> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            return Err(Error::parse(path, lineno, "empty term"));
        }
        pairs.push((line, 0));
    }
    Ok(Vocabulary::from_pairs(pairs))
}

/// Write the corpus: header `D W NNZ`, then one line per document,
/// `<repo>\t<id>:<count> ...` with ids ascending.
pub fn save_corpus(corpus: &SparseCorpus, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(
        out,
        "{} {} {}",
        corpus.num_docs(),
        corpus.num_terms,
        corpus.nnz()
    )
    .map_err(|e| Error::io(path, e))?;
    for (repo, terms) in &corpus.docs {
        write!(out, "{repo}").map_err(|e| Error::io(path, e))?;
        let mut sep = '\t';
        for (id, count) in terms {
            write!(out, "{sep}{id}:{count}").map_err(|e| Error::io(path, e))?;
            sep = ' ';
        }
        writeln!(out).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Load a corpus written by [`save_corpus`].
pub fn load_corpus(path: &Path) -> Result<SparseCorpus> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = std::io::BufReader::new(file).lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [d, w, nnz] = parts.as_slice() else {
        return Err(Error::parse(path, 1, "header must be `D W NNZ`"));
    };
    let num_docs: usize = d
        .parse()
        .map_err(|_| Error::parse(path, 1, "bad document count"))?;
    let num_terms: usize = w
        .parse()
        .map_err(|_| Error::parse(path, 1, "bad term count"))?;
    let expect_nnz: usize = nnz
        .parse()
        .map_err(|_| Error::parse(path, 1, "bad nnz count"))?;

    let mut docs = Vec::with_capacity(num_docs);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let (repo, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, lineno, "expected `repo\\tid:count ...`"))?;
        let mut terms: Vec<(u32, u64)> = Vec::new();
        for pair in rest.split_whitespace() {
            let (id, count) = pair
                .split_once(':')
                .ok_or_else(|| Error::parse(path, lineno, format!("malformed pair `{pair}`")))?;
            let id: u32 = id
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad id in `{pair}`")))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad count in `{pair}`")))?;
            if id as usize >= num_terms {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("term id {id} out of range (W = {num_terms})"),
                ));
            }
            if count == 0 {
                return Err(Error::parse(path, lineno, format!("zero count in `{pair}`")));
            }
            if let Some(&(prev, _)) = terms.last() {
                if id <= prev {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("term ids not strictly increasing at `{pair}`"),
                    ));
                }
            }
            terms.push((id, count));
        }
        if terms.is_empty() {
            return Err(Error::parse(path, lineno, "empty document line"));
        }
        docs.push((repo.to_string(), terms));
    }
    let corpus = SparseCorpus { docs, num_terms };
    if corpus.num_docs() != num_docs {
        return Err(Error::parse(
            path,
            1,
            format!("header says {num_docs} docs, found {}", corpus.num_docs()),
        ));
    }
    if corpus.nnz() != expect_nnz {
        return Err(Error::parse(
            path,
            1,
            format!("header says nnz {expect_nnz}, found {}", corpus.nnz()),
        ));
    }
    Ok(corpus)
}
