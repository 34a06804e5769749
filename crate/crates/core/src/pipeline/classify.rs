use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::features::{
    gbs_feature, spectral_feature, spectral_feature_from, FeatureKind, FeatureVector,
};
use super::linear_svm::{train_linear_svm, LinearSvmModel};
use super::trials::majority_vote;
use crate::gbs::{
    apply_loss, encode_graph, EncodingParams, GbsSampler, LossBudget, VacuumConvention,
    DEFAULT_CUTOFF,
};
use crate::graph::{laplacian_spectrum, Graph};
use crate::oracle::{Label, LabeledPair};
use crate::rng::{self, Rng};
use crate::{Error, Result};

/// Samples drawn per training pair for the sample-based classifier.
pub const DEFAULT_SAMPLES_PER_PAIR: usize = 10;

/// Hex SHA-256 of the JSON serialization.
pub fn config_digest<T: Serialize>(value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

/// How graphs are turned into samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumConfig {
    pub squeeze_db: f64,
    pub budget: LossBudget,
    /// Overrides the budget's transmissivity when set.
    pub eta: Option<f64>,
    pub convention: VacuumConvention,
    pub cutoff: usize,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        QuantumConfig {
            squeeze_db: 5.0,
            budget: LossBudget::default(),
            eta: None,
            convention: VacuumConvention::default(),
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

impl QuantumConfig {
    pub fn lossless(squeeze_db: f64) -> Self {
        QuantumConfig {
            squeeze_db,
            eta: Some(1.0),
            ..Default::default()
        }
    }

    pub fn with_loss_db(squeeze_db: f64, loss_db: f64) -> Self {
        QuantumConfig {
            squeeze_db,
            eta: Some(10f64.powf(-loss_db / 10.0)),
            ..Default::default()
        }
    }

    pub fn eta(&self, n_modes: usize) -> f64 {
        self.eta
            .unwrap_or_else(|| self.budget.total_transmissivity(n_modes))
    }

    pub fn digest(&self) -> Result<String> {
        config_digest(self)
    }

    /// Sampler for the lossy encoding of `g`; edgeless graphs give the vacuum.
    pub fn sampler(&self, g: &Graph) -> Result<GbsSampler> {
        let a = g.adjacency_matrix();
        let params = EncodingParams::from_db_or_vacuum(&a, self.squeeze_db)?;
        let state = encode_graph(&a, &params)?;
        let lossy = apply_loss(&state, self.eta(g.n()), self.convention)?;
        GbsSampler::new(&lossy, self.cutoff)
    }
}

fn check_trials(n_trials: usize) -> Result<()> {
    if n_trials.is_multiple_of(2) {
        return Err(Error::arg(format!(
            "number of trials must be odd, got {n_trials}"
        )));
    }
    Ok(())
}

fn check_sizes(g1: &Graph, g2: &Graph) -> Result<()> {
    if g2.n() > g1.n() {
        return Err(Error::arg(format!(
            "child has {} vertices, parent only {}",
            g2.n(),
            g1.n()
        )));
    }
    Ok(())
}

fn check_kind(model: &LinearSvmModel, kind: FeatureKind) -> Result<()> {
    if model.kind != kind {
        return Err(Error::InvalidState(format!(
            "model was trained on {:?} features, not {kind:?}",
            model.kind
        )));
    }
    Ok(())
}

pub fn spectral_training_set(pairs: &[LabeledPair]) -> (Vec<FeatureVector>, Vec<Label>) {
    let features = pairs
        .par_iter()
        .map(|p| spectral_feature(&p.parent, &p.child))
        .collect();
    (features, pairs.iter().map(|p| p.label).collect())
}

pub fn train_spectral_model(pairs: &[LabeledPair], c: f64, seed: u64) -> Result<LinearSvmModel> {
    let (f, l) = spectral_training_set(pairs);
    train_linear_svm(&f, &l, c, seed)
}

/// `samples_per_pair` sample features per pair, each carrying the pair's
/// label. Pair `i` draws from the stream `(seed, i)`.
pub fn gbs_training_set(
    pairs: &[LabeledPair],
    config: &QuantumConfig,
    samples_per_pair: usize,
    seed: u64,
) -> Result<(Vec<FeatureVector>, Vec<Label>)> {
    let per_pair: Vec<Vec<FeatureVector>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let (s1, s2) = (config.sampler(&p.parent)?, config.sampler(&p.child)?);
            let mut r = rng::stream(seed, i as u64);
            Ok((0..samples_per_pair)
                .map(|_| gbs_feature(&s1.sample(&mut r).pattern, &s2.sample(&mut r).pattern))
                .collect())
        })
        .collect::<Result<_>>()?;
    let labels = pairs
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.label, samples_per_pair))
        .collect();
    Ok((per_pair.into_iter().flatten().collect(), labels))
}

pub fn train_gbs_model(
    pairs: &[LabeledPair],
    config: &QuantumConfig,
    samples_per_pair: usize,
    c: f64,
    seed: u64,
) -> Result<LinearSvmModel> {
    let (f, l) = gbs_training_set(pairs, config, samples_per_pair, seed)?;
    let mut model = train_linear_svm(&f, &l, c, seed)?;
    model.encoding_digest = Some(config.digest()?);
    Ok(model)
}

/// Per-trial predictions of the randomized classical algorithm: trial `m`
/// replaces `g1` by a random LC walk of length uniform in `[1, n]` drawn
/// from the stream `(seed, m)`.
pub fn classical_votes(
    g1: &Graph,
    g2: &Graph,
    model: &LinearSvmModel,
    n_trials: usize,
    seed: u64,
) -> Result<Vec<Label>> {
    check_sizes(g1, g2)?;
    check_kind(model, FeatureKind::Spectral)?;
    let child = laplacian_spectrum(g2).values;
    (0..n_trials)
        .map(|m| {
            let mut r = rng::stream(seed, m as u64);
            let len = r.random_range(1..=g1.n().max(1));
            let g3 = g1.random_lc_walk(len, &mut r);
            model.predict(&spectral_feature_from(
                &laplacian_spectrum(&g3).values,
                &child,
            ))
        })
        .collect()
}

pub fn randomized_classical_classify(
    g1: &Graph,
    g2: &Graph,
    model: &LinearSvmModel,
    n_trials: usize,
    rng: &mut Rng,
) -> Result<Label> {
    check_trials(n_trials)?;
    let seed = rng.random();
    majority_vote(&classical_votes(g1, g2, model, n_trials, seed)?)
}

/// Per-trial predictions from one fresh sample of each graph's encoding.
pub fn quantum_votes(
    g1: &Graph,
    g2: &Graph,
    model: &LinearSvmModel,
    n_trials: usize,
    config: &QuantumConfig,
    seed: u64,
) -> Result<Vec<Label>> {
    check_kind(model, FeatureKind::GbsSample)?;
    let (s1, s2) = (config.sampler(g1)?, config.sampler(g2)?);
    (0..n_trials)
        .map(|m| {
            let mut r = rng::stream(seed, m as u64);
            let (a, b) = (s1.sample(&mut r).pattern, s2.sample(&mut r).pattern);
            model.predict(&gbs_feature(&a, &b))
        })
        .collect()
}

pub fn quantum_classify(
    g1: &Graph,
    g2: &Graph,
    model: &LinearSvmModel,
    n_trials: usize,
    config: &QuantumConfig,
    rng: &mut Rng,
) -> Result<Label> {
    check_trials(n_trials)?;
    let seed = rng.random();
    majority_vote(&quantum_votes(g1, g2, model, n_trials, config, seed)?)
}
