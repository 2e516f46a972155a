//! Locality sensitive hashing over signatures and fuzzy-duplicate set
//! extraction.
//!
//! Candidate sets use bin intersection: a duplicate set requires
//! co-occupancy in all of a repository's non-singleton bins, not any one
//! of them. The standard candidate-union behavior is available as an
//! alternative for comparison.

use crate::mix::mix_coords;
use crate::naming::Bag;
use crate::wminhash::{exact_weighted_jaccard_bags, WmhSignature};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

/// Banding layout: b tables of r consecutive signature samples each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPlan {
    pub bands: u32,
    pub rows: u32,
    pub threshold: f64,
}

const INTEGRATION_STEP: f64 = 0.001;

fn integrate(f: impl Fn(f64) -> f64, from: f64, to: f64) -> f64 {
    let mut area = 0.0;
    let mut x = from + INTEGRATION_STEP / 2.0;
    while x < to {
        area += f(x) * INTEGRATION_STEP;
        x += INTEGRATION_STEP;
    }
    area
}

/// Probability that a pair with similarity s shares at least one band.
#[inline]
fn collision_probability(s: f64, bands: i32, rows: i32) -> f64 {
    1.0 - (1.0 - s.powi(rows)).powi(bands)
}

/// Pick the (b, r) with b * r <= k minimizing the sum of the false
/// positive area below `threshold` and the false negative area above it,
/// both integrated with step 0.001 and equal weights.
pub fn plan_bands(k: u32, threshold: f64) -> BandPlan {
    assert!(k >= 2, "need at least two samples");
    assert!(
        threshold > 0.0 && threshold < 1.0,
        "threshold must be in (0, 1)"
    );
    let mut best: Option<(f64, u32, u32)> = None;
    for bands in 1..=k {
        for rows in 1..=(k / bands) {
            let fp = integrate(
                |s| collision_probability(s, bands as i32, rows as i32),
                0.0,
                threshold,
            );
            let fn_ = integrate(
                |s| 1.0 - collision_probability(s, bands as i32, rows as i32),
                threshold,
                1.0,
            );
            let err = fp + fn_;
            if best.map_or(true, |(e, _, _)| err < e) {
                best = Some((err, bands, rows));
            }
        }
    }
    let (_, bands, rows) = best.unwrap();
    BandPlan {
        bands,
        rows,
        threshold,
    }
}

const BAND_HASH_SEED: u64 = 0x4C53_4842_414E_4431; // "LSHBAND1"

fn band_key(sig: &WmhSignature, table: u32, rows: u32) -> u64 {
    let start = (table * rows) as usize;
    let mut coords = Vec::with_capacity(rows as usize * 2 + 1);
    coords.push(table as u64);
    for &(feature, t) in &sig.pairs()[start..start + rows as usize] {
        coords.push(feature as u64);
        coords.push(t as u32 as u64);
    }
    mix_coords(BAND_HASH_SEED, &coords)
}

/// b hash tables mapping band keys to buckets of repository indices.
#[derive(Debug, Clone)]
pub struct LshIndex {
    plan: BandPlan,
    repos: Vec<String>,
    tables: Vec<HashMap<u64, Vec<u32>>>,
    /// Per repository, its band key in each table.
    memberships: Vec<Vec<u64>>,
}

impl LshIndex {
    pub fn plan(&self) -> &BandPlan {
        &self.plan
    }

    pub fn repos(&self) -> &[String] {
        &self.repos
    }

    /// Bucket sizes of every bin across all tables.
    pub fn bin_histogram(&self) -> BTreeMap<usize, u64> {
        let mut hist = BTreeMap::new();
        for table in &self.tables {
            for bucket in table.values() {
                *hist.entry(bucket.len()).or_insert(0) += 1;
            }
        }
        hist
    }
}

/// Insert every signature into one bucket per table.
pub fn build_index(signatures: &[(String, WmhSignature)], plan: &BandPlan) -> Result<LshIndex> {
    let mut seen = HashSet::new();
    if let Some((_, first)) = signatures.first() {
        let k = first.k();
        if plan.bands * plan.rows > k {
            return Err(Error::SignatureMismatch(format!(
                "plan needs {} samples but signatures have {k}",
                plan.bands * plan.rows
            )));
        }
        for (name, sig) in signatures {
            if sig.k() != k || sig.seed() != first.seed() {
                return Err(Error::SignatureMismatch(format!(
                    "signature of `{name}` has a different K or seed"
                )));
            }
        }
    }
    let mut repos = Vec::with_capacity(signatures.len());
    let mut tables = vec![HashMap::new(); plan.bands as usize];
    let mut memberships = Vec::with_capacity(signatures.len());
    for (idx, (name, sig)) in signatures.iter().enumerate() {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateRepo(name.clone()));
        }
        repos.push(name.clone());
        let mut keys = Vec::with_capacity(plan.bands as usize);
        for (table_idx, table) in tables.iter_mut().enumerate() {
            let key = band_key(sig, table_idx as u32, plan.rows);
            table.entry(key).or_insert_with(Vec::new).push(idx as u32);
            keys.push(key);
        }
        memberships.push(keys);
    }
    Ok(LshIndex {
        plan: *plan,
        repos,
        tables,
        memberships,
    })
}

/// A group of repositories judged fuzzy clones; always at least two.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DuplicateSet {
    pub members: Vec<String>,
}

/// How a repository's bins combine into its candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateSemantics {
    /// Members must share every non-singleton bin (the default).
    Intersection,
    /// Members sharing any bin are grouped (classic LSH candidates).
    Union,
}

/// Extract duplicate sets from a built index.
///
/// Bins with single entries are filtered out; each repository's bins are
/// then combined per `semantics`. Under intersection a singleton bin
/// empties the repository's candidate set, so a pair survives only when
/// it collides in every table. Identical sets are cached rather than
/// duplicated, singleton sets are dropped, and sets of exactly two
/// members must reach `pair_threshold` exact weighted Jaccard computed
/// from the original bags. Returns the sets plus the bin-size histogram
/// of the full index.
pub fn extract_duplicate_sets(
    index: &LshIndex,
    bags: &[Bag],
    semantics: CandidateSemantics,
    pair_threshold: f64,
) -> (Vec<DuplicateSet>, BTreeMap<usize, u64>) {
    let histogram = index.bin_histogram();
    let bag_by_name: HashMap<&str, &Bag> =
        bags.iter().map(|b| (b.repo.as_str(), b)).collect();

    let mut cache: HashSet<Vec<u32>> = HashSet::new();
    let mut sets = Vec::new();
    for keys in &index.memberships {
        let buckets: Vec<&Vec<u32>> = keys
            .iter()
            .enumerate()
            .map(|(table_idx, key)| &index.tables[table_idx][key])
            .collect();
        let mut combined: Vec<u32> = Vec::new();
        match semantics {
            CandidateSemantics::Intersection => {
                // A singleton bucket anywhere collapses the intersection
                // to the repository itself.
                combined = buckets[0].clone();
                combined.sort_unstable();
                for bucket in &buckets[1..] {
                    let other: HashSet<u32> = bucket.iter().copied().collect();
                    combined.retain(|m| other.contains(m));
                }
            }
            CandidateSemantics::Union => {
                for bucket in buckets {
                    if bucket.len() < 2 {
                        continue;
                    }
                    for &m in bucket {
                        if let Err(at) = combined.binary_search(&m) {
                            combined.insert(at, m);
                        }
                    }
                }
            }
        }
        if combined.len() < 2 {
            continue;
        }
        if !cache.insert(combined.clone()) {
            continue;
        }
        if combined.len() == 2 {
            let a = bag_by_name.get(index.repos[combined[0] as usize].as_str());
            let b = bag_by_name.get(index.repos[combined[1] as usize].as_str());
            if let (Some(a), Some(b)) = (a, b) {
                if exact_weighted_jaccard_bags(a, b) < pair_threshold {
                    continue;
                }
            }
        }
        let mut members: Vec<String> = combined
            .iter()
            .map(|&m| index.repos[m as usize].clone())
            .collect();
        members.sort();
        sets.push(DuplicateSet { members });
    }
    sets.sort();
    sets.dedup();
    (sets, histogram)
}

/// Remove non-representative members of every set from the bag list.
///
/// The lexicographically smallest member of a set is its representative;
/// a repository survives only if it is the representative of every set
/// containing it.
pub fn dedup_corpus(bags: &[Bag], sets: &[DuplicateSet]) -> Vec<Bag> {
    let mut removed: HashSet<&str> = HashSet::new();
    for set in sets {
        for member in &set.members[1..] {
            removed.insert(member);
        }
    }
    bags.iter()
        .filter(|b| !removed.contains(b.repo.as_str()))
        .cloned()
        .collect()
}

/// Write sets one per line, members tab-separated and sorted, lines
/// sorted by first member.
pub fn save_duplicates(sets: &[DuplicateSet], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for set in sets {
        writeln!(out, "{}", set.members.join("\t")).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Load a duplicates file written by [`save_duplicates`].
pub fn load_duplicates(path: &Path) -> Result<Vec<DuplicateSet>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut sets = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let members: Vec<String> = line.split('\t').map(|s| s.to_string()).collect();
        if members.len() < 2 {
            return Err(Error::parse(path, idx + 1, "set with fewer than 2 members"));
        }
        sets.push(DuplicateSet { members });
    }
    Ok(sets)
}

/// Write the bin-size histogram as `size\tcount` lines.
pub fn save_bins_histogram(hist: &BTreeMap<usize, u64>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (size, count) in hist {
        writeln!(out, "{size}\t{count}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
