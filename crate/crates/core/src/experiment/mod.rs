//! Evaluation studies built from the other modules: baseline comparisons,
//! majority-vote accuracy curves, the squeezing/loss sweep and the runtime
//! model.

mod accuracy;
mod runtime;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use accuracy::{
    accuracy_at, accuracy_curve, classical_vote_records, majority_accuracy, quantum_vote_records,
    required_trials, CurvePoint, PairVotes, RequiredTrials,
};
pub use runtime::{
    classical_wallclock, host_label, measure_svm_seconds, measure_takagi_seconds,
    quantum_wallclock, scaling_model, simulated_gbs_wallclock, HardwareProfile, RuntimeReport,
    RuntimeRow, ScalingCosts, RUNTIME_CSV_HEADER,
};

use crate::baselines::{
    pair_gram, predict_kernel, train_kernel_svm, KernelKind, PairRepresentation,
};
use crate::oracle::{generate_dataset, GenerationConfig, LabeledPair, MIN_CHILD};
use crate::pipeline::{
    spectral_feature, train_gbs_model, train_spectral_model, LinearSvmModel, QuantumConfig,
    DEFAULT_C, DEFAULT_SAMPLES_PER_PAIR,
};
use crate::rng;
use crate::{Error, Result};

/// Child size used when only the parent size is given.
pub fn default_child(n_parent: usize) -> usize {
    n_parent.saturating_sub(1).max(MIN_CHILD)
}

/// Dataset, training and evaluation settings shared by the studies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub positives: usize,
    pub negatives: usize,
    pub train_fraction: f64,
    /// Held-out pairs whose votes are recorded.
    pub eval_pairs: usize,
    /// Votes recorded per evaluated pair; also the trial cap (odd).
    pub votes: usize,
    pub target: f64,
    pub samples_per_pair: usize,
    pub c: f64,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            positives: 500,
            negatives: 500,
            train_fraction: 0.75,
            eval_pairs: 7,
            votes: 201,
            target: 0.97,
            samples_per_pair: DEFAULT_SAMPLES_PER_PAIR,
            c: DEFAULT_C,
            seed: 1,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.votes.is_multiple_of(2) {
            return Err(Error::arg(format!(
                "vote count must be odd, got {}",
                self.votes
            )));
        }
        if self.eval_pairs == 0 {
            return Err(Error::arg("need at least one evaluation pair"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::arg(format!(
                "train fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.target) {
            return Err(Error::arg(format!(
                "target accuracy must lie in [0, 1], got {}",
                self.target
            )));
        }
        Ok(())
    }

    /// Generated dataset split into training pairs and evaluation pairs.
    pub fn split(
        &self,
        n_parent: usize,
        n_child: usize,
    ) -> Result<(Vec<LabeledPair>, Vec<LabeledPair>)> {
        self.validate()?;
        let ds = generate_dataset(
            n_parent,
            n_child,
            self.positives,
            self.negatives,
            self.seed,
            &GenerationConfig::default(),
        )?;
        let (train, mut test) = ds.split(self.train_fraction, self.seed);
        if test.len() < self.eval_pairs {
            return Err(Error::InvalidDataset(format!(
                "{} held-out pairs, {} requested",
                test.len(),
                self.eval_pairs
            )));
        }
        test.truncate(self.eval_pairs);
        Ok((train, test))
    }
}

/// Test accuracy of one method on one dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub n_parent: usize,
    pub n_child: usize,
    pub seed: u64,
    pub method: String,
    pub accuracy: f64,
}

impl BaselineRow {
    pub fn error(&self) -> f64 {
        1.0 - self.accuracy
    }
}

pub const BASELINE_CSV_HEADER: &str = "n_parent,n_child,seed,method,accuracy,error";

pub fn write_baseline_csv<W: Write>(rows: &[BaselineRow], mut w: W) -> Result<()> {
    writeln!(w, "{BASELINE_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n_parent,
            r.n_child,
            r.seed,
            r.method,
            r.accuracy,
            r.error()
        )?;
    }
    Ok(())
}

fn accuracy_of(hits: usize, total: usize) -> f64 {
    hits as f64 / total.max(1) as f64
}

/// Single-shot spectral classifier and the three kernel SVMs trained and
/// tested on the same split of one generated dataset. Uses the study's class
/// counts, split, `C` and seed; every held-out pair is tested.
pub fn compare_baselines(
    n_parent: usize,
    n_child: usize,
    study: &StudyConfig,
    representation: PairRepresentation,
    wl_iterations: usize,
) -> Result<Vec<BaselineRow>> {
    let (seed, c) = (study.seed, study.c);
    let ds = generate_dataset(
        n_parent,
        n_child,
        study.positives,
        study.negatives,
        seed,
        &GenerationConfig::default(),
    )?;
    let (train, test) = ds.split(study.train_fraction, seed);
    let row = |method: &str, accuracy| BaselineRow {
        n_parent,
        n_child,
        seed,
        method: method.to_string(),
        accuracy,
    };
    let model = train_spectral_model(&train, c, seed)?;
    let mut hits = 0;
    for p in &test {
        hits += (model.predict(&spectral_feature(&p.parent, &p.child))? == p.label) as usize;
    }
    let mut rows = vec![row("spectral", accuracy_of(hits, test.len()))];
    let tr: Vec<_> = train.iter().map(|p| (p.parent, p.child)).collect();
    let te: Vec<_> = test.iter().map(|p| (p.parent, p.child)).collect();
    let labels: Vec<_> = train.iter().map(|p| p.label).collect();
    for kind in KernelKind::ALL {
        let gram = pair_gram(kind, &tr, &te, wl_iterations, representation)?;
        let m = train_kernel_svm(&gram.train, &labels, c)?;
        let hits = test
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let k_row: Vec<f64> = gram.test.row(*i).iter().copied().collect();
                predict_kernel(&m, &k_row) == p.label
            })
            .count();
        rows.push(row(kind.name(), accuracy_of(hits, test.len())));
    }
    Ok(rows)
}

/// Mean accuracy per method over rows, in first-appearance order.
pub fn mean_accuracy_by_method(rows: &[BaselineRow]) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64, usize)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|(m, _, _)| *m == r.method) {
            Some(e) => {
                e.1 += r.accuracy;
                e.2 += 1;
            }
            None => out.push((r.method.clone(), r.accuracy, 1)),
        }
    }
    out.into_iter().map(|(m, s, k)| (m, s / k as f64)).collect()
}

/// Accuracy-versus-trials curves of both classifiers on one problem size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialCurves {
    pub n_parent: usize,
    pub n_child: usize,
    pub classical: Vec<PairVotes>,
    pub quantum: Vec<PairVotes>,
}

impl TrialCurves {
    pub fn measure(
        n_parent: usize,
        n_child: usize,
        study: &StudyConfig,
        quantum: &QuantumConfig,
    ) -> Result<Self> {
        let (train, eval) = study.split(n_parent, n_child)?;
        let spectral = train_spectral_model(&train, study.c, study.seed)?;
        let gbs = train_gbs_model(&train, quantum, study.samples_per_pair, study.c, study.seed)?;
        Ok(TrialCurves {
            n_parent,
            n_child,
            classical: classical_vote_records(
                &eval,
                &spectral,
                study.votes,
                rng::mix(study.seed, 1),
            )?,
            quantum: quantum_vote_records(
                &eval,
                &gbs,
                study.votes,
                quantum,
                rng::mix(study.seed, 2),
            )?,
        })
    }

    pub fn write_csv<W: Write>(&self, trials: &[usize], mut w: W) -> Result<()> {
        writeln!(w, "{CURVE_CSV_HEADER}")?;
        for (method, records) in [("classical", &self.classical), ("quantum", &self.quantum)] {
            for p in accuracy_curve(records, trials)? {
                writeln!(
                    w,
                    "{},{},{},{}",
                    self.n_parent, method, p.n_trials, p.accuracy
                )?;
            }
        }
        Ok(())
    }
}

pub const CURVE_CSV_HEADER: &str = "n_parent,method,n_trials,accuracy";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_parent: usize,
    pub n_child: usize,
    pub squeeze_db: Vec<f64>,
    pub loss_db: Vec<f64>,
    /// Cutoff and vacuum convention shared by every cell.
    pub base: QuantumConfig,
    pub study: StudyConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub squeeze_db: f64,
    pub loss_db: f64,
    pub required: RequiredTrials,
}

pub const SWEEP_CSV_HEADER: &str = "squeeze_db,loss_db,n_required,accuracy_at_cap";

/// Trains one sample-based model per grid cell on a shared dataset and
/// records the trials each needs to reach the target. Cells are ordered
/// squeezing-major.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    if cfg.squeeze_db.is_empty() || cfg.loss_db.is_empty() {
        return Err(Error::arg("sweep grids must be non-empty"));
    }
    let study = &cfg.study;
    let (train, eval) = study.split(cfg.n_parent, cfg.n_child)?;
    let grid: Vec<(f64, f64)> = cfg
        .squeeze_db
        .iter()
        .flat_map(|&s| cfg.loss_db.iter().map(move |&l| (s, l)))
        .collect();
    let cells: Vec<SweepCell> = grid
        .par_iter()
        .map(|&(squeeze_db, loss_db)| {
            let q = QuantumConfig {
                squeeze_db,
                eta: Some(10f64.powf(-loss_db / 10.0)),
                ..cfg.base
            };
            let model = train_gbs_model(&train, &q, study.samples_per_pair, study.c, study.seed)?;
            let records =
                quantum_vote_records(&eval, &model, study.votes, &q, rng::mix(study.seed, 3))?;
            Ok(SweepCell {
                squeeze_db,
                loss_db,
                required: required_trials(&records, study.target, study.votes)?,
            })
        })
        .collect::<Result<_>>()?;
    let saturated = cells.iter().filter(|c| c.required.saturated()).count();
    if saturated == cells.len() {
        log::warn!(
            "no sweep cell reached accuracy {} within {} trials",
            study.target,
            study.votes
        );
    }
    Ok(cells)
}

pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], mut w: W) -> Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for c in cells {
        let n = c
            .required
            .n_required
            .map_or_else(|| "saturated".to_string(), |n| n.to_string());
        writeln!(
            w,
            "{},{},{},{}",
            c.squeeze_db, c.loss_db, n, c.required.accuracy_at_cap
        )?;
    }
    Ok(())
}

/// Models and held-out pairs for one problem size.
pub struct SizeStudy {
    pub n_parent: usize,
    pub n_child: usize,
    pub eval: Vec<LabeledPair>,
    pub spectral: LinearSvmModel,
    pub gbs: LinearSvmModel,
    pub classical: RequiredTrials,
    pub quantum: RequiredTrials,
}

impl SizeStudy {
    pub fn run(
        n_parent: usize,
        n_child: usize,
        study: &StudyConfig,
        quantum: &QuantumConfig,
    ) -> Result<Self> {
        let (train, eval) = study.split(n_parent, n_child)?;
        let spectral = train_spectral_model(&train, study.c, study.seed)?;
        let gbs = train_gbs_model(&train, quantum, study.samples_per_pair, study.c, study.seed)?;
        let c_votes =
            classical_vote_records(&eval, &spectral, study.votes, rng::mix(study.seed, 1))?;
        let q_votes =
            quantum_vote_records(&eval, &gbs, study.votes, quantum, rng::mix(study.seed, 2))?;
        Ok(SizeStudy {
            n_parent,
            n_child,
            classical: required_trials(&c_votes, study.target, study.votes)?,
            quantum: required_trials(&q_votes, study.target, study.votes)?,
            eval,
            spectral,
            gbs,
        })
    }

    /// Trial counts used for timing; a saturated classifier is timed at the
    /// cap.
    pub fn trial_counts(&self) -> (usize, usize) {
        (
            self.classical.n_required.unwrap_or(self.classical.cap),
            self.quantum.n_required.unwrap_or(self.quantum.cap),
        )
    }

    /// Measured classical and simulated times against the modeled photonic
    /// time. The profile's overheads are used as given.
    pub fn runtime_row(
        &self,
        profile: &HardwareProfile,
        quantum: &QuantumConfig,
        seed: u64,
    ) -> Result<RuntimeRow> {
        let (n_c, n_q) = self.trial_counts();
        let t_c = classical_wallclock(&self.eval, &self.spectral, n_c, seed, 5)?;
        let t_cgbs = simulated_gbs_wallclock(&self.eval, &self.gbs, n_q, quantum, seed, 5)?;
        let t_q = quantum_wallclock(profile, self.n_parent, n_q);
        Ok(RuntimeRow::new(self.n_parent, n_c, n_q, t_c, t_q, t_cgbs))
    }
}

/// One [`SizeStudy`] per parent size, timed sequentially. With
/// `measure_overheads` the Takagi and prediction times are measured per size;
/// otherwise the profile's values are used.
pub fn runtime_report(
    sizes: &[usize],
    study: &StudyConfig,
    profile: &HardwareProfile,
    measure_overheads: bool,
) -> Result<RuntimeReport> {
    profile.validate()?;
    let quantum = QuantumConfig {
        squeeze_db: profile.squeeze_db,
        budget: profile.budget,
        ..QuantumConfig::default()
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let s = SizeStudy::run(n, default_child(n), study, &quantum)?;
        let p = if measure_overheads {
            profile.with_measured_overheads(n)?
        } else {
            *profile
        };
        rows.push(s.runtime_row(&p, &quantum, study.seed)?);
    }
    Ok(RuntimeReport {
        host: host_label(),
        profile: *profile,
        rows,
    })
}
