//! Weighted Jaccard similarity and consistent weighted sampling
//! signatures.
//!
//! Each of the K samples draws per-feature parameters r, c ~ Gamma(2, 1)
//! and beta ~ Uniform(0, 1). The parameters are generated on demand from
//! a counter-based seeded mix of (seed, feature, sample) instead of being
//! stored as dense K x |W| matrices, so lookup is O(1) memory and a
//! feature always sees the same parameters regardless of which document
//! asks.

use crate::mix::{mix_coords, to_unit_halfopen, to_unit_open};
use crate::naming::Bag;
use crate::{Error, Result};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

/// A sample of Gamma(2, 1) from two uniforms in (0, 1].
#[inline]
pub fn gamma21(u1: f64, u2: f64) -> f64 {
    debug_assert!(u1 > 0.0 && u1 <= 1.0 && u2 > 0.0 && u2 <= 1.0);
    -(u1 * u2).ln()
}

/// Sum min / sum max over the key union of two sorted sparse vectors.
///
/// Both vectors must be sorted by id with non-negative weights. Two
/// empty inputs give 0.
pub fn exact_weighted_jaccard(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let (mut num, mut den) = (0.0, 0.0);
    while i < a.len() || j < b.len() {
        let (wa, wb) = match (a.get(i), b.get(j)) {
            (Some(&(ka, wa)), Some(&(kb, wb))) => {
                if ka < kb {
                    i += 1;
                    (wa, 0.0)
                } else if kb < ka {
                    j += 1;
                    (0.0, wb)
                } else {
                    i += 1;
                    j += 1;
                    (wa, wb)
                }
            }
            (Some(&(_, wa)), None) => {
                i += 1;
                (wa, 0.0)
            }
            (None, Some(&(_, wb))) => {
                j += 1;
                (0.0, wb)
            }
            (None, None) => break,
        };
        num += wa.min(wb);
        den += wa.max(wb);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Weighted Jaccard similarity of two bags over their term union.
pub fn exact_weighted_jaccard_bags(a: &Bag, b: &Bag) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    loop {
        let (wa, wb) = match (ia.peek(), ib.peek()) {
            (Some(&(ta, &ca)), Some(&(tb, &cb))) => match ta.cmp(tb) {
                std::cmp::Ordering::Less => {
                    ia.next();
                    (ca as f64, 0.0)
                }
                std::cmp::Ordering::Greater => {
                    ib.next();
                    (0.0, cb as f64)
                }
                std::cmp::Ordering::Equal => {
                    ia.next();
                    ib.next();
                    (ca as f64, cb as f64)
                }
            },
            (Some(&(_, &ca)), None) => {
                ia.next();
                (ca as f64, 0.0)
            }
            (None, Some(&(_, &cb))) => {
                ib.next();
                (0.0, cb as f64)
            }
            (None, None) => break,
        };
        num += wa.min(wb);
        den += wa.max(wb);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Deterministic source of per-(feature, sample) CWS parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WmhGenerator {
    seed: u64,
    k: u32,
}

impl WmhGenerator {
    pub fn new(seed: u64, k: u32) -> Self {
        assert!(k >= 1, "sample count must be positive");
        WmhGenerator { seed, k }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// (r, c, beta) for one (feature, sample) coordinate.
    #[inline]
    fn params(&self, feature: u32, sample: u32) -> (f64, f64, f64) {
        let coord = |stream: u64| {
            mix_coords(self.seed, &[feature as u64, sample as u64, stream])
        };
        let r = gamma21(to_unit_open(coord(0)), to_unit_open(coord(1)));
        let c = gamma21(to_unit_open(coord(2)), to_unit_open(coord(3)));
        let beta = to_unit_halfopen(coord(4));
        (r, c, beta)
    }
}

/// K (feature id, t) pairs summarizing one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmhSignature {
    seed: u64,
    pairs: Vec<(u32, i32)>,
}

impl WmhSignature {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn k(&self) -> u32 {
        self.pairs.len() as u32
    }

    pub fn pairs(&self) -> &[(u32, i32)] {
        &self.pairs
    }
}

/// Compute the CWS signature of a sparse document.
///
/// For every sample index, every feature d with weight S_d > 0 scores
/// a = c / (y * e^r) with t = floor(ln S_d / r + beta) and
/// y = e^(r (t - beta)); the feature minimizing a wins and (d, t) is
/// recorded. Ties go to the smallest feature id.
pub fn signature(doc: &[(u32, f64)], gen: &WmhGenerator) -> Result<WmhSignature> {
    if doc.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let mut sorted: Vec<(u32, f64)> = doc.to_vec();
    sorted.sort_by_key(|&(id, _)| id);
    for &(id, w) in &sorted {
        if !(w > 0.0) {
            return Err(Error::SignatureMismatch(format!(
                "feature {id} has non-positive weight {w}"
            )));
        }
    }
    let mut pairs = Vec::with_capacity(gen.k as usize);
    for sample in 0..gen.k {
        let mut best: Option<(f64, u32, i32)> = None;
        for &(feature, weight) in &sorted {
            let (r, c, beta) = gen.params(feature, sample);
            let t = (weight.ln() / r + beta).floor();
            let y = (r * (t - beta)).exp();
            let a = c / (y * r.exp());
            let t = t.clamp(i32::MIN as f64, i32::MAX as f64) as i32;
            match best {
                Some((min_a, _, _)) if a >= min_a => {}
                _ => best = Some((a, feature, t)),
            }
        }
        let (_, feature, t) = best.expect("non-empty document");
        pairs.push((feature, t));
    }
    Ok(WmhSignature {
        seed: gen.seed,
        pairs,
    })
}

/// Fraction of sample indices where both signature components collide.
pub fn estimate_similarity(a: &WmhSignature, b: &WmhSignature) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::SignatureMismatch(format!(
            "sample counts differ: {} vs {}",
            a.k(),
            b.k()
        )));
    }
    if a.seed != b.seed {
        return Err(Error::SignatureMismatch(format!(
            "seeds differ: {} vs {}",
            a.seed, b.seed
        )));
    }
    if a.pairs.is_empty() {
        return Err(Error::SignatureMismatch("empty signatures".into()));
    }
    let hits = a
        .pairs
        .iter()
        .zip(&b.pairs)
        .filter(|(x, y)| x == y)
        .count();
    Ok(hits as f64 / a.pairs.len() as f64)
}

/// Sparse weight vector of a bag over a term -> id map.
pub fn doc_weights(bag: &Bag, vocab: &crate::corpus::Vocabulary) -> Vec<(u32, f64)> {
    let mut weights: Vec<(u32, f64)> = bag
        .counts
        .iter()
        .filter_map(|(term, &count)| vocab.id(term).map(|id| (id, count as f64)))
        .collect();
    weights.sort_by_key(|&(id, _)| id);
    weights
}

const MAGIC: &[u8; 4] = b"WMH1";

/// Write named signatures as little-endian binary: magic "WMH1", u32 K,
/// u64 seed, then per document a u16 name length, the name bytes and
/// K x (u32 feature, i32 t).
pub fn save_signatures(sigs: &[(String, WmhSignature)], path: &Path) -> Result<()> {
    let (k, seed) = match sigs.first() {
        Some((_, s)) => (s.k(), s.seed),
        None => (0, 0),
    };
    for (name, sig) in sigs {
        if sig.k() != k || sig.seed != seed {
            return Err(Error::SignatureMismatch(format!(
                "signature of `{name}` does not match the file header"
            )));
        }
        if name.len() > u16::MAX as usize {
            return Err(Error::SignatureMismatch(format!(
                "repository name too long: {name}"
            )));
        }
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut write = |bytes: &[u8]| out.write_all(bytes).map_err(|e| Error::io(path, e));
    write(MAGIC)?;
    write(&k.to_le_bytes())?;
    write(&seed.to_le_bytes())?;
    for (name, sig) in sigs {
        write(&(name.len() as u16).to_le_bytes())?;
        write(name.as_bytes())?;
        for &(feature, t) in &sig.pairs {
            write(&feature.to_le_bytes())?;
            write(&t.to_le_bytes())?;
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Load a signature file written by [`save_signatures`].
pub fn load_signatures(path: &Path) -> Result<Vec<(String, WmhSignature)>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let bad = |msg: &str| Error::parse(path, 0, msg);
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(bad("missing WMH1 magic"));
    }
    let k = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let seed = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let mut pos = 16;
    let mut sigs = Vec::new();
    while pos < bytes.len() {
        if pos + 2 > bytes.len() {
            return Err(bad("truncated name length"));
        }
        let name_len = u16::from_le_bytes(bytes[pos..pos + 2].try_into().unwrap()) as usize;
        pos += 2;
        if pos + name_len + 8 * k > bytes.len() {
            return Err(bad("truncated record"));
        }
        let name = std::str::from_utf8(&bytes[pos..pos + name_len])
            .map_err(|_| bad("name is not UTF-8"))?
            .to_string();
        pos += name_len;
        let mut pairs = Vec::with_capacity(k);
        for _ in 0..k {
            let feature = u32::from_le_bytes(bytes[pos..pos + 4].try_into().unwrap());
            let t = i32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap());
            pairs.push((feature, t));
            pos += 8;
        }
        sigs.push((name, WmhSignature { seed, pairs }));
    }
    Ok(sigs)
}
