use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{is_vertex_minor, Label, OracleConfig};
use crate::graph::{canonical_form, CanonicalForm, Graph};
use crate::rng;
use crate::{Error, Result};

/// Smallest child accepted by the pair constructors.
pub const MIN_CHILD: usize = 6;

/// Edge probability shared by parents and negative children.
pub const EDGE_PROBABILITY: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ConstructedPositive,
    OracleVerifiedNegative,
    OracleVerifiedPositive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub parent: Graph,
    pub child: Graph,
    pub label: Label,
    pub provenance: Provenance,
    /// Seed of the stream that produced this pair.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub pairs: Vec<LabeledPair>,
    pub seed: u64,
    pub n_parent: usize,
    pub n_child: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub oracle: OracleConfig,
    /// Attempts per negative before giving up.
    pub rejection_budget: usize,
    /// Skip joint canonical-form deduplication above this parent size.
    pub dedup_max_parent: usize,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            oracle: OracleConfig::default(),
            rejection_budget: 10_000,
            dedup_max_parent: 10,
        }
    }
}

fn check_sizes(n_parent: usize, n_child: usize) -> Result<()> {
    if n_child < MIN_CHILD || n_parent < n_child {
        return Err(Error::arg(format!(
            "need n_parent >= n_child >= {MIN_CHILD}, got {n_parent} and {n_child}"
        )));
    }
    Ok(())
}

/// Child built from `parent` by an LC walk of `walk_length` steps followed by
/// deleting `deletions` random vertices; the child is randomly relabeled.
pub fn positive_from<R: Rng + ?Sized>(
    parent: &Graph,
    walk_length: usize,
    deletions: usize,
    rng: &mut R,
) -> Result<Graph> {
    if deletions >= parent.n() && parent.n() > 0 {
        return Err(Error::arg("cannot delete every vertex"));
    }
    let mut g = parent.random_lc_walk(walk_length, rng);
    for _ in 0..deletions {
        let v = rng.random_range(0..g.n());
        g = g.delete_vertex(v)?;
    }
    Ok(g.random_relabel(rng))
}

pub fn make_positive_pair<R: Rng + ?Sized>(
    n_parent: usize,
    n_child: usize,
    rng: &mut R,
) -> Result<LabeledPair> {
    check_sizes(n_parent, n_child)?;
    let parent = Graph::random(n_parent, EDGE_PROBABILITY, rng)?;
    let walk = rng.random_range(0..=2 * n_parent);
    let child = positive_from(&parent, walk, n_parent - n_child, rng)?;
    Ok(LabeledPair {
        parent,
        child,
        label: Label::VertexMinor,
        provenance: Provenance::ConstructedPositive,
        seed: 0,
    })
}

/// Draws a parent, then rejection-samples children until the oracle says no.
pub fn make_negative_pair<R: Rng + ?Sized>(
    n_parent: usize,
    n_child: usize,
    rng: &mut R,
    config: &GenerationConfig,
) -> Result<LabeledPair> {
    check_sizes(n_parent, n_child)?;
    let parent = Graph::random(n_parent, EDGE_PROBABILITY, rng)?;
    for _ in 0..config.rejection_budget {
        let child = Graph::random(n_child, EDGE_PROBABILITY, rng)?;
        if !is_vertex_minor(&parent, &child, &config.oracle)? {
            return Ok(LabeledPair {
                parent,
                child,
                label: Label::NotVertexMinor,
                provenance: Provenance::OracleVerifiedNegative,
                seed: 0,
            });
        }
    }
    Err(Error::ResourceExhausted(format!(
        "no negative child found in {} attempts",
        config.rejection_budget
    )))
}

/// Generates `positives` then `negatives` pairs. Pair `i` of each class uses
/// its own stream derived from `(seed, class, i)`, so the result does not
/// depend on thread scheduling.
pub fn generate_dataset(
    n_parent: usize,
    n_child: usize,
    positives: usize,
    negatives: usize,
    seed: u64,
    config: &GenerationConfig,
) -> Result<Dataset> {
    check_sizes(n_parent, n_child)?;
    let dedup = n_parent <= config.dedup_max_parent;
    let mut seen: HashSet<(CanonicalForm, CanonicalForm)> = HashSet::new();
    let mut pairs = Vec::with_capacity(positives + negatives);
    for (class, want) in [(1u64, positives), (0u64, negatives)] {
        let class_seed = rng::mix(seed, class);
        let mut next = 0u64;
        let mut got = 0;
        let mut stalls = 0;
        while got < want {
            let need = (want - got) as u64;
            let batch: Vec<Result<LabeledPair>> = (next..next + need)
                .into_par_iter()
                .map(|i| {
                    let pair_seed = rng::mix(class_seed, i);
                    let mut r = rng::seeded(pair_seed);
                    let mut pair = if class == 1 {
                        make_positive_pair(n_parent, n_child, &mut r)?
                    } else {
                        make_negative_pair(n_parent, n_child, &mut r, config)?
                    };
                    pair.seed = pair_seed;
                    Ok(pair)
                })
                .collect();
            next += need;
            let before = got;
            for pair in batch {
                let pair = pair?;
                if dedup
                    && !seen.insert((canonical_form(&pair.parent), canonical_form(&pair.child)))
                {
                    continue;
                }
                pairs.push(pair);
                got += 1;
            }
            if got == before {
                stalls += 1;
                if stalls > 100 {
                    return Err(Error::ResourceExhausted(
                        "deduplication keeps rejecting every new pair".into(),
                    ));
                }
            }
        }
    }
    Ok(Dataset {
        pairs,
        seed,
        n_parent,
        n_child,
    })
}

/// Indices of pairs whose label disagrees with the oracle.
pub fn verify_dataset(pairs: &[LabeledPair], oracle: &OracleConfig) -> Result<Vec<usize>> {
    let verdicts: Vec<Result<bool>> = pairs
        .par_iter()
        .map(|p| is_vertex_minor(&p.parent, &p.child, oracle))
        .collect();
    let mut bad = Vec::new();
    for (i, (v, p)) in verdicts.into_iter().zip(pairs).enumerate() {
        if Label::from_bool(v?) != p.label {
            bad.push(i);
        }
    }
    Ok(bad)
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.pairs.iter().filter(|p| p.label == label).count()
    }

    /// Seeded shuffle followed by a split; the first part holds
    /// `round(train_fraction * len)` pairs.
    pub fn split(&self, train_fraction: f64, seed: u64) -> (Vec<LabeledPair>, Vec<LabeledPair>) {
        let mut pairs = self.pairs.clone();
        pairs.shuffle(&mut rng::seeded(seed));
        let cut = ((pairs.len() as f64) * train_fraction).round() as usize;
        let test = pairs.split_off(cut.min(pairs.len()));
        (pairs, test)
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for p in &self.pairs {
            serde_json::to_writer(&mut w, p)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R, seed: u64) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let pair: LabeledPair = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            if pair.child.n() > pair.parent.n() {
                return Err(Error::InvalidDataset(format!(
                    "line {}: child larger than parent",
                    i + 1
                )));
            }
            pairs.push(pair);
        }
        let n_parent = pairs.iter().map(|p| p.parent.n()).max().unwrap_or(0);
        let n_child = pairs.iter().map(|p| p.child.n()).max().unwrap_or(0);
        Ok(Dataset {
            pairs,
            seed,
            n_parent,
            n_child,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_walk_zero_deletions_is_identity_up_to_relabel() {
        let mut r = rng::seeded(1);
        let g = Graph::random(7, 0.5, &mut r).unwrap();
        let child = positive_from(&g, 0, 0, &mut r).unwrap();
        assert_eq!(canonical_form(&child), canonical_form(&g));
        assert!(is_vertex_minor(&g, &child, &OracleConfig::default()).unwrap());
    }

    #[test]
    fn constructed_positive_passes_oracle() {
        let mut r = rng::seeded(2);
        for _ in 0..20 {
            let g = Graph::random(8, 0.5, &mut r).unwrap();
            let child = positive_from(&g, 3, 1, &mut r).unwrap();
            assert!(is_vertex_minor(&g, &child, &OracleConfig::default()).unwrap());
        }
    }

    #[test]
    fn pairs_are_seed_deterministic() {
        let cfg = GenerationConfig::default();
        let a = make_positive_pair(8, 6, &mut rng::seeded(9)).unwrap();
        let b = make_positive_pair(8, 6, &mut rng::seeded(9)).unwrap();
        assert_eq!(a, b);
        let a = make_negative_pair(7, 6, &mut rng::seeded(9), &cfg).unwrap();
        let b = make_negative_pair(7, 6, &mut rng::seeded(9), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negatives_reverified_by_independent_oracle() {
        let cfg = GenerationConfig::default();
        let bfs = OracleConfig::with(
            super::super::Enumeration::OrbitBfs,
            super::super::FinalCheck::Isomorphism,
        );
        let mut r = rng::seeded(3);
        for _ in 0..10 {
            let p = make_negative_pair(7, 6, &mut r, &cfg).unwrap();
            assert_eq!(p.label, Label::NotVertexMinor);
            assert!(!is_vertex_minor(&p.parent, &p.child, &bfs).unwrap());
        }
    }

    #[test]
    fn sizes_are_checked() {
        let mut r = rng::seeded(0);
        assert!(make_positive_pair(5, 5, &mut r).is_err());
        assert!(make_positive_pair(6, 7, &mut r).is_err());
    }

    #[test]
    fn rejection_budget_exhaustion() {
        let cfg = GenerationConfig {
            rejection_budget: 0,
            ..Default::default()
        };
        let err = make_negative_pair(7, 6, &mut rng::seeded(0), &cfg).unwrap_err();
        assert!(matches!(err, Error::ResourceExhausted(_)));
    }

    #[test]
    fn dataset_class_counts_and_jsonl() {
        let cfg = GenerationConfig::default();
        let ds = generate_dataset(7, 6, 12, 9, 42, &cfg).unwrap();
        assert_eq!(ds.len(), 21);
        assert_eq!(ds.count(Label::VertexMinor), 12);
        assert_eq!(ds.count(Label::NotVertexMinor), 9);
        assert!(verify_dataset(&ds.pairs, &cfg.oracle).unwrap().is_empty());

        let again = generate_dataset(7, 6, 12, 9, 42, &cfg).unwrap();
        assert_eq!(ds, again);

        let mut buf = Vec::new();
        ds.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 21);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in ["parent", "child", "label", "provenance", "seed"] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
        let back = Dataset::read_jsonl(&buf[..], 42).unwrap();
        assert_eq!(back.pairs, ds.pairs);
    }

    #[test]
    fn only_negatives_when_no_positives_requested() {
        let ds = generate_dataset(7, 6, 0, 5, 1, &GenerationConfig::default()).unwrap();
        assert!(ds.pairs.iter().all(|p| p.label == Label::NotVertexMinor));
    }
}
