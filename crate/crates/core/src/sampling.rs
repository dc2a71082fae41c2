//! Length buckets, entropy-ranked center sampling and Jaccard deduplication
//! of the sampled centers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocessing::LogRecord;
use crate::scalar::{entropy_from_counts, Scalar};

/// All records sharing one token length.
#[derive(Debug, Clone)]
pub struct Bucket<'a> {
    pub length: usize,
    pub records: Vec<&'a LogRecord>,
    /// Cluster centers; empty until sampling and merging have run.
    pub centers: Vec<&'a LogRecord>,
}

/// Groups records by token count. Buckets come back sorted by length and
/// keep input order within each bucket.
pub fn build_buckets(records: &[LogRecord]) -> Vec<Bucket<'_>> {
    let mut by_len: BTreeMap<usize, Vec<&LogRecord>> = BTreeMap::new();
    for r in records {
        by_len.entry(r.tokens.len()).or_default().push(r);
    }
    by_len
        .into_iter()
        .map(|(length, records)| Bucket {
            length,
            records,
            centers: Vec::new(),
        })
        .collect()
}

/// Shannon entropy (base 2) of the token distribution inside one message.
pub fn shannon_entropy<T: Scalar, S: AsRef<str>>(tokens: &[S]) -> Result<T> {
    if tokens.is_empty() {
        return Err(Error::Domain("entropy of an empty token sequence".into()));
    }
    let mut counts: HashMap<&str, usize> = HashMap::with_capacity(tokens.len());
    for t in tokens {
        *counts.entry(t.as_ref()).or_insert(0) += 1;
    }
    Ok(entropy_from_counts(counts.into_values(), tokens.len()))
}

/// `|A ∩ B| / |A ∪ B|` over the distinct tokens of each sequence.
pub fn jaccard_similarity<T: Scalar, S: AsRef<str>>(a: &[S], b: &[S]) -> Result<T> {
    let sa: BTreeSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let sb: BTreeSet<&str> = b.iter().map(AsRef::as_ref).collect();
    jaccard_of_sets(&sa, &sb)
}

pub(crate) fn jaccard_of_sets<T: Scalar>(a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> Result<T> {
    let union = a.union(b).count();
    if union == 0 {
        return Err(Error::Domain("jaccard similarity of two empty sets".into()));
    }
    let inter = a.intersection(b).count();
    Ok(T::from_count(inter) / T::from_count(union))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SamplingStrategy {
    /// Entropy ranking with a first-token diversity pass.
    #[default]
    EntropyFirstToken,
    EntropyOnly,
    FirstTokenOnly,
    Random {
        seed: u64,
    },
}

impl fmt::Display for SamplingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingStrategy::EntropyFirstToken => f.write_str("entropy_first_token"),
            SamplingStrategy::EntropyOnly => f.write_str("entropy_only"),
            SamplingStrategy::FirstTokenOnly => f.write_str("first_token_only"),
            SamplingStrategy::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for SamplingStrategy {
    type Err = String;

    /// Accepts `entropy_first_token`, `entropy_only`, `first_token_only`,
    /// `random` (seed 0) and `random:<seed>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "entropy_first_token" => Ok(SamplingStrategy::EntropyFirstToken),
            "entropy_only" => Ok(SamplingStrategy::EntropyOnly),
            "first_token_only" => Ok(SamplingStrategy::FirstTokenOnly),
            "random" => Ok(SamplingStrategy::Random { seed: 0 }),
            other => match other.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(|seed| SamplingStrategy::Random { seed })
                    .map_err(|e| format!("bad random seed {seed:?}: {e}")),
                None => Err(format!("unknown sampling strategy {other:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    pub k: usize,
    pub n_layers: usize,
    pub strategy: SamplingStrategy,
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::config("", "k", "must be at least 1"));
        }
        if self.n_layers == 0 {
            return Err(Error::config("", "n_layers", "must be at least 1"));
        }
        Ok(())
    }
}

/// Centers picked from one bucket, in selection order.
#[derive(Debug, Clone)]
pub struct SampleSet<'a> {
    pub selected: Vec<&'a LogRecord>,
    pub seen_first_tokens: BTreeSet<&'a str>,
    pub accepted_count: usize,
}

impl<'a> SampleSet<'a> {
    fn with_capacity(k: usize) -> Self {
        SampleSet {
            selected: Vec::with_capacity(k),
            seen_first_tokens: BTreeSet::new(),
            accepted_count: 0,
        }
    }

    fn accept(&mut self, r: &'a LogRecord) {
        if let Some(t) = r.first_token() {
            self.seen_first_tokens.insert(t);
        }
        self.selected.push(r);
        self.accepted_count += 1;
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

/// Records ordered by descending message entropy, ties by ascending line id.
pub fn entropy_order<'a>(records: &[&'a LogRecord]) -> Vec<&'a LogRecord> {
    let mut scored: Vec<(f64, &LogRecord)> = records
        .iter()
        .map(|r| (shannon_entropy::<f64, _>(&r.tokens).unwrap_or(0.0), *r))
        .collect();
    scored.sort_by(|(ea, ra), (eb, rb)| {
        eb.partial_cmp(ea)
            .unwrap_or(Ordering::Equal)
            .then(ra.line_id.cmp(&rb.line_id))
    });
    scored.into_iter().map(|(_, r)| r).collect()
}

/// Splits `items` into `n` contiguous layers whose sizes differ by at most
/// one, longer layers first.
pub fn split_layers<T>(items: &[T], n: usize) -> Vec<&[T]> {
    let n = n.max(1);
    let base = items.len() / n;
    let extra = items.len() % n;
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for i in 0..n {
        let len = base + usize::from(i < extra);
        out.push(&items[start..start + len]);
        start += len;
    }
    out
}

/// Picks up to `cfg.k` representative records from a bucket.
///
/// Under [`SamplingStrategy::EntropyFirstToken`] the entropy-sorted records
/// are scanned layer by layer, first taking only records whose first token
/// has not been seen; remaining slots are then refilled in global entropy
/// order.
pub fn sample_centers<'a>(bucket: &Bucket<'a>, cfg: &SamplingConfig) -> SampleSet<'a> {
    let k = cfg.k.max(1);
    let mut set = SampleSet::with_capacity(k.min(bucket.records.len()));
    if bucket.records.is_empty() {
        return set;
    }
    if bucket.records.len() <= k {
        for r in &bucket.records {
            set.accept(r);
        }
        return set;
    }

    match cfg.strategy {
        SamplingStrategy::EntropyFirstToken => {
            let ordered = entropy_order(&bucket.records);
            let layers = split_layers(&ordered, cfg.n_layers);
            diversity_then_refill(&mut set, &layers, &ordered, k);
        }
        SamplingStrategy::EntropyOnly => {
            for r in entropy_order(&bucket.records).into_iter().take(k) {
                set.accept(r);
            }
        }
        SamplingStrategy::FirstTokenOnly => {
            let ordered = bucket.records.clone();
            diversity_then_refill(&mut set, &[&ordered[..]], &ordered, k);
        }
        SamplingStrategy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in index::sample(&mut rng, bucket.records.len(), k) {
                set.accept(bucket.records[i]);
            }
        }
    }
    set
}

fn diversity_then_refill<'a>(
    set: &mut SampleSet<'a>,
    layers: &[&[&'a LogRecord]],
    refill_order: &[&'a LogRecord],
    k: usize,
) {
    'layers: for layer in layers {
        for r in layer.iter() {
            if set.len() >= k {
                return;
            }
            if set.seen_first_tokens.len() >= k {
                break 'layers;
            }
            let fresh = r.first_token().is_some_and(|t| !set.seen_first_tokens.contains(t));
            if fresh {
                set.accept(r);
            }
        }
    }
    for r in refill_order {
        if set.len() >= k {
            return;
        }
        if !set.selected.iter().any(|s| s.line_id == r.line_id) {
            set.accept(r);
        }
    }
}

/// Drops every center whose similarity to an earlier surviving center is
/// strictly above `threshold`.
pub fn merge_centers<'a, T: Scalar>(sample: &SampleSet<'a>, threshold: T) -> Vec<&'a LogRecord> {
    let mut survivors: Vec<(&LogRecord, BTreeSet<&str>)> = Vec::with_capacity(sample.len());
    for &c in &sample.selected {
        let set: BTreeSet<&str> = c.tokens.iter().map(String::as_str).collect();
        let duplicate = survivors
            .iter()
            .any(|(_, s)| jaccard_of_sets::<T>(s, &set).map(|j| j > threshold).unwrap_or(false));
        if !duplicate {
            survivors.push((c, set));
        }
    }
    survivors.into_iter().map(|(c, _)| c).collect()
}
