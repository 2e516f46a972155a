//! Statistical validation of the weighted MinHash estimator against the
//! exact weighted Jaccard similarity: error bounds, unbiasedness, and
//! the per-position collision rate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repotopics_core::wminhash::{
    estimate_similarity, exact_weighted_jaccard, signature, WmhGenerator,
};

/// Build a pair of unit-weight docs over a union of `union` features of
/// which `shared` overlap, so the weighted Jaccard is shared/union.
/// Feature ids are offset to decorrelate pairs across trials.
fn planted_pair(shared: u32, union: u32, offset: u32) -> (Vec<(u32, f64)>, Vec<(u32, f64)>) {
    let side = (union - shared) / 2;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for f in 0..shared {
        a.push((offset + f, 1.0));
        b.push((offset + f, 1.0));
    }
    for f in 0..side {
        a.push((offset + shared + f, 1.0));
        b.push((offset + shared + side + f, 1.0));
    }
    (a, b)
}

#[test]
fn estimator_error_bounds_over_200_pairs() {
    let gen = WmhGenerator::new(7, 128);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut abs_errors = Vec::new();
    let mut signed_errors = Vec::new();
    for trial in 0..200u32 {
        // Even shared counts keep union - shared divisible by two.
        let shared = 2 * rng.gen_range(5..=45u32);
        let (a, b) = planted_pair(shared, 100, trial * 1000);
        let exact = exact_weighted_jaccard(&a, &b);
        assert!((exact - shared as f64 / 100.0).abs() < 1e-12);
        let sa = signature(&a, &gen).unwrap();
        let sb = signature(&b, &gen).unwrap();
        let est = estimate_similarity(&sa, &sb).unwrap();
        abs_errors.push((est - exact).abs());
        signed_errors.push(est - exact);
    }
    let n = abs_errors.len() as f64;
    let mae = abs_errors.iter().sum::<f64>() / n;
    let max = abs_errors.iter().cloned().fold(0.0, f64::max);
    assert!(mae <= 0.05, "mean absolute error {mae}");
    assert!(max <= 0.15, "max absolute error {max}");

    // Unbiasedness: the mean signed error stays within two standard
    // errors of zero.
    let mean = signed_errors.iter().sum::<f64>() / n;
    let var = signed_errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    assert!(
        mean.abs() <= 2.0 * stderr,
        "mean signed error {mean}, stderr {stderr}"
    );
}

#[test]
fn collision_rate_tracks_similarity() {
    // Per hash position the collision probability equals the weighted
    // Jaccard, so the observed rate over K positions must stay within
    // three binomial standard deviations.
    let k = 128u32;
    let gen = WmhGenerator::new(99, k);
    for step in 1..=9u32 {
        let j = step as f64 / 10.0;
        let shared = 10 * step; // union 100, both sides even
        let (a, b) = planted_pair(shared, 100, step * 10_000);
        let sa = signature(&a, &gen).unwrap();
        let sb = signature(&b, &gen).unwrap();
        let hits = sa
            .pairs()
            .iter()
            .zip(sb.pairs())
            .filter(|(x, y)| x == y)
            .count() as f64;
        let rate = hits / k as f64;
        let sigma = (j * (1.0 - j) / k as f64).sqrt();
        assert!(
            (rate - j).abs() <= 3.0 * sigma,
            "J={j}: rate {rate} outside 3 sigma ({sigma})"
        );
    }
}

#[test]
fn identical_docs_estimate_exactly_one() {
    let gen = WmhGenerator::new(3, 64);
    let doc = vec![(0, 2.5), (9, 0.5), (77, 10.0)];
    let s1 = signature(&doc, &gen).unwrap();
    let s2 = signature(&doc, &gen).unwrap();
    assert_eq!(estimate_similarity(&s1, &s2).unwrap(), 1.0);
}

#[test]
fn disjoint_docs_estimate_near_zero() {
    let gen = WmhGenerator::new(3, 128);
    let (a, b) = planted_pair(0, 100, 0);
    let sa = signature(&a, &gen).unwrap();
    let sb = signature(&b, &gen).unwrap();
    // Collisions between disjoint sets are possible only by hash
    // accident, which the construction rules out.
    assert_eq!(estimate_similarity(&sa, &sb).unwrap(), 0.0);
}
